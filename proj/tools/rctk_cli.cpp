// rctk — reaction-coordinate mapping toolkit command line.
//
// Subcommands: map, chain, otto, set, catalog list, selftest.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rctk/engines/engine_map.hpp"
#include "rctk/engines/otto.hpp"
#include "rctk/io/output.hpp"
#include "rctk/mapping/rc_mapping.hpp"
#include "rctk/spectral/catalog.hpp"
#include "rctk/version.hpp"

using json = nlohmann::json;
using namespace rctk;

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    int jobs = 1;
    double tol = 1e-6;
};

void ensure_out_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
    if (!std::filesystem::is_directory(dir))
        throw ValidationError("output directory is not writable: " + dir);
}

// Canonical config string: the command line minus the binary path and the
// execution details (output location, worker count), so identical physics
// configs map to identical hashes.
std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--out" || a == "--jobs") {
            ++i;
            continue;
        }
        s += a;
        s += '\x1f';
    }
    return s;
}

struct DensityArgs {
    std::string family;
    std::string density_file;
    std::string statistics = "fermionic";
    double gamma = 1.0, delta = 0.0, eps = 0.0, wm = 0.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--family", family, "analytic family id (see `rctk catalog list`)");
        cmd->add_option("--density", density_file, "grid density CSV (omega,gamma)");
        cmd->add_option("--statistics", statistics, "bosonic|fermionic (for --density)");
        cmd->add_option("--gamma", gamma, "coupling amplitude");
        cmd->add_option("--delta", delta, "width parameter");
        cmd->add_option("--eps", eps, "center parameter");
        cmd->add_option("--wm", wm, "rigid cutoff frequency");
    }

    std::vector<double> family_params() const {
        const CatalogEntry& e = lookup(family);
        std::vector<double> p;
        for (const auto& name : e.param_names) {
            if (name == "gamma") p.push_back(gamma);
            else if (name == "delta") p.push_back(delta);
            else if (name == "eps") p.push_back(eps);
            else if (name == "wm") p.push_back(wm);
        }
        return p;
    }

    SpectralDensity resolve() const {
        if (!family.empty() && !density_file.empty())
            throw ValidationError("give either --family or --density, not both");
        if (!family.empty()) return make_density(family, family_params());
        if (!density_file.empty()) {
            Statistics st;
            if (statistics == "bosonic") st = Statistics::BosonicOdd;
            else if (statistics == "fermionic") st = Statistics::FermionicFullAxis;
            else throw ValidationError("--statistics must be bosonic or fermionic");
            SpectralDensity d = load_density_csv(density_file, st);
            if (moment(d, 0) <= 0.0)
                throw ValidationError("density is degenerate (vanishing weight)");
            return d;
        }
        throw ValidationError("one of --family or --density is required");
    }
};

RCMapResult run_mapping(const SpectralDensity& d, const std::string& mapping, double tol) {
    if (mapping == "phonon") return map_phonon(d, tol);
    if (mapping == "particle") return map_particle(d, tol);
    if (mapping == "fermionic") return map_fermionic(d, tol);
    if (mapping == "auto")
        return d.statistics() == Statistics::BosonicOdd ? map_phonon(d, tol)
                                                        : map_fermionic(d, tol);
    throw ValidationError("--mapping must be auto|phonon|particle|fermionic");
}

int cmd_map(const CommonOpts& common, const DensityArgs& dens, const std::string& mapping,
            bool verify, int samples, const std::string& hash) {
    ensure_out_dir(common.out_dir);
    SpectralDensity d = dens.resolve();
    RCMapResult r = run_mapping(d, mapping, common.tol);

    json out;
    out["lambda"] = r.lambda;
    out["lambda_sq"] = r.lambda_sq;
    out["rc_energy"] = r.rc_energy;
    out["used_principal_value"] = r.used_principal_value;
    out["statistics"] = to_string(d.statistics());
    if (!dens.family.empty()) out["family"] = dens.family;
    out["toolkit_version"] = kVersion;
    out["config_hash"] = hash;

    if (verify) {
        if (dens.family.empty())
            throw ValidationError("--verify needs an analytic --family");
        const CatalogEntry& e = lookup(dens.family);
        auto rep = verify_against_numeric(e, dens.family_params(), 1e-3);
        out["verify"] = {{"dev_lambda_sq", rep.dev_lambda_sq},
                         {"dev_rc_energy", rep.dev_rc_energy},
                         {"dev_residual", rep.dev_residual},
                         {"pass", rep.pass}};
        if (!rep.pass) std::cerr << "verification against the catalog failed\n";
    }

    std::ofstream js(common.out_dir + "/map_result.json");
    js << out.dump(2) << "\n";
    save_density_csv(common.out_dir + "/residual.csv", r.residual, hash,
                     static_cast<std::size_t>(samples));
    std::cout << "lambda_sq = " << format_g17(r.lambda_sq)
              << "\nrc_energy = " << format_g17(r.rc_energy) << "\n";
    if (verify) std::cout << "verify_pass = " << (out["verify"]["pass"].get<bool>() ? 1 : 0)
                          << "\n";
    return 0;
}

int cmd_chain(const CommonOpts& common, const DensityArgs& dens, int steps, int grid_n,
              const std::string& hash) {
    ensure_out_dir(common.out_dir);
    SpectralDensity d = dens.resolve();
    RecurseGridSpec spec;
    spec.n_points = static_cast<std::size_t>(grid_n);
    spec.tol = common.tol;
    std::vector<SpectralDensity> per_step;
    ChainCoefficients chain = recurse(d, steps, spec, &per_step);

    for (std::size_t k = 0; k < per_step.size(); ++k)
        save_density_csv(common.out_dir + "/residual_step_" + std::to_string(k + 1) + ".csv",
                         per_step[k], hash);

    json out;
    out["sites"] = chain.site_energies;
    out["hops"] = chain.hop_couplings;
    out["residual"] = "residual_step_" + std::to_string(per_step.size()) + ".csv";
    out["toolkit_version"] = kVersion;
    out["config_hash"] = hash;
    std::ofstream js(common.out_dir + "/chain.json");
    js << out.dump(2) << "\n";
    std::cout << "chain sites = " << chain.site_energies.size() << "\n";
    return 0;
}

int cmd_otto(const CommonOpts& common, OttoConfig cfg, const std::string& range,
             int range_n, const std::string& hash) {
    ensure_out_dir(common.out_dir);
    if (range.empty()) {
        CycleReport r = run_otto(cfg);
        json out;
        out["W_net"] = r.W_net;
        out["Q_hot"] = r.Q_hot;
        out["eta"] = r.eta;
        out["W_decouple_hot"] = r.W_decouple_hot;
        out["W_decouple_cold"] = r.W_decouple_cold;
        out["closure"] = r.closure;
        json ledger = json::array();
        for (const auto& s : r.ledger)
            ledger.push_back({{"stroke", s.name}, {"work", s.work}, {"heat", s.heat}});
        out["ledger"] = ledger;
        out["toolkit_version"] = kVersion;
        out["config_hash"] = hash;
        std::ofstream js(common.out_dir + "/cycle_report.json");
        js << out.dump(2) << "\n";
        std::cout << "W_net = " << format_g17(r.W_net) << "\neta = " << format_g17(r.eta)
                  << "\n";
        return 0;
    }
    const auto colon = range.find(':');
    if (colon == std::string::npos)
        throw ValidationError("--mu-cold-range must be LO:HI");
    const double lo = std::stod(range.substr(0, colon));
    const double hi = std::stod(range.substr(colon + 1));
    auto curve = otto_sweep(cfg, lo, hi, range_n);
    const char* variant = cfg.treatment == OttoTreatment::WeakCoupling
                              ? "weak"
                              : (cfg.decoupling == DecouplingProtocol::Instantaneous
                                     ? "rc_sudden"
                                     : "rc_adiabatic");
    CsvWriter csv(common.out_dir + "/parametric.csv", hash, {"mu_ratio", "W", "eta", "variant"});
    for (const auto& pt : curve) csv.row({pt.mu_ratio, pt.W, pt.eta}, variant);
    for (const auto& pt : curve)
        if (pt.max_eta)
            std::cout << "max_eta = " << format_g17(pt.eta)
                      << " at mu_ratio = " << format_g17(pt.mu_ratio) << "\n";
    return 0;
}

void write_grid_csv(const std::string& path, const EngineMapGrid& grid,
                    const std::string& hash) {
    CsvWriter csv(path, hash,
                  {"V", "Gamma", "IM", "IE", "P", "QL", "QR", "eta", "cop", "mode"});
    for (std::size_t iG = 0; iG < grid.Gamma_axis.size(); ++iG)
        for (std::size_t iV = 0; iV < grid.V_axis.size(); ++iV) {
            const CellResult& c = grid.at(iG, iV);
            if (!c.ok) continue;
            csv.row({grid.V_axis[iV], grid.Gamma_axis[iG], c.transport.IM, c.transport.IE,
                     c.transport.P, c.transport.QL, c.transport.QR, c.metrics.eta,
                     c.metrics.cop},
                    to_string(c.metrics.mode));
        }
}

json mode_boundaries(const EngineMapGrid& grid) {
    json rows = json::array();
    for (std::size_t iG = 0; iG < grid.Gamma_axis.size(); ++iG) {
        json transitions = json::array();
        for (std::size_t iV = 0; iV + 1 < grid.V_axis.size(); ++iV) {
            const CellResult &a = grid.at(iG, iV), &b = grid.at(iG, iV + 1);
            if (!a.ok || !b.ok) continue;
            if (a.metrics.mode != b.metrics.mode)
                transitions.push_back({{"v_low", grid.V_axis[iV]},
                                       {"v_high", grid.V_axis[iV + 1]},
                                       {"from", to_string(a.metrics.mode)},
                                       {"to", to_string(b.metrics.mode)}});
        }
        rows.push_back({{"gamma", grid.Gamma_axis[iG]}, {"transitions", transitions}});
    }
    return rows;
}

int cmd_set(const CommonOpts& common, const std::string& config_path,
            const std::string& solver, const std::string& hash) {
    ensure_out_dir(common.out_dir);
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config: " + config_path);
    json cfgj = json::parse(in, nullptr, true, true);

    SetSweepConfig cfg;
    cfg.eps = cfgj.value("eps", 1.0);
    cfg.delta = cfgj.value("delta", 0.01);
    cfg.beta_L = cfgj.value("beta_L", 2.0);
    cfg.beta_R = cfgj.value("beta_R", 1.0);
    cfg.lamb_shift = cfgj.value("lamb_shift", false);
    cfg.tol = common.tol < 1e-6 ? common.tol : cfgj.value("tol", 1e-8);
    cfg.jobs = common.jobs;
    auto axis = [&](const char* key, bool log_default) {
        const json& a = cfgj.at(key);
        const double lo = a.at("min").get<double>();
        const double hi = a.at("max").get<double>();
        const int n = a.at("n").get<int>();
        const bool logsc = a.value("scale", log_default ? "log" : "linear") == std::string("log");
        std::vector<double> v;
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) /(n - 1);
            v.push_back(logsc ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        return v;
    };
    cfg.V_axis = axis("V", false);
    cfg.Gamma_axis = axis("Gamma", true);
    cfg.validate();

    const bool want_exact = solver == "exact" || solver == "both";
    const bool want_rc = solver == "rc" || solver == "both";
    if (!want_exact && !want_rc)
        throw ValidationError("--solver must be exact|rc|both");

    EngineMapGrid exact, rc;
    if (want_exact) exact = sweep_map(cfg, SetSolver::Exact);
    if (want_rc) rc = sweep_map(cfg, SetSolver::RC);

    const EngineMapGrid& primary = want_exact ? exact : rc;
    write_grid_csv(common.out_dir + "/engine_map.csv", primary, hash);
    if (want_exact && want_rc)
        write_grid_csv(common.out_dir + "/engine_map_rc.csv", rc, hash);

    json bounds;
    bounds["solver"] = want_exact ? "exact" : "rc";
    bounds["boundaries"] = mode_boundaries(primary);
    if (want_exact && want_rc) bounds["boundaries_rc"] = mode_boundaries(rc);
    bounds["toolkit_version"] = kVersion;
    bounds["config_hash"] = hash;
    std::ofstream bs(common.out_dir + "/boundaries.json");
    bs << bounds.dump(2) << "\n";

    // per-cell failures logged, sweep continues
    {
        CsvWriter errs(common.out_dir + "/errors.csv", hash, {"V", "Gamma"});
        auto log_errors = [&](const EngineMapGrid& g, const char* which) {
            for (std::size_t iG = 0; iG < g.Gamma_axis.size(); ++iG)
                for (std::size_t iV = 0; iV < g.V_axis.size(); ++iV)
                    if (!g.at(iG, iV).ok)
                        errs.row({g.V_axis[iV], g.Gamma_axis[iG]},
                                 std::string(which) + ": " + g.at(iG, iV).error);
        };
        if (want_exact) log_errors(exact, "exact");
        if (want_rc) log_errors(rc, "rc");
    }

    if (want_exact && want_rc) {
        double max_rel_im = 0.0, max_rel_ie = 0.0;
        double scale_im = 0.0, scale_ie = 0.0;
        int mode_mismatches = 0;
        for (std::size_t i = 0; i < exact.cells.size(); ++i) {
            if (!exact.cells[i].ok || !rc.cells[i].ok) continue;
            scale_im = std::max(scale_im, std::abs(exact.cells[i].transport.IM));
            scale_ie = std::max(scale_ie, std::abs(exact.cells[i].transport.IE));
        }
        for (std::size_t i = 0; i < exact.cells.size(); ++i) {
            if (!exact.cells[i].ok || !rc.cells[i].ok) continue;
            const auto &te = exact.cells[i].transport, &tr = rc.cells[i].transport;
            max_rel_im = std::max(max_rel_im, std::abs(tr.IM - te.IM) /
                                                  std::max(std::abs(te.IM), 0.01 * scale_im));
            max_rel_ie = std::max(max_rel_ie, std::abs(tr.IE - te.IE) /
                                                  std::max(std::abs(te.IE), 0.01 * scale_ie));
            if (exact.cells[i].metrics.mode != rc.cells[i].metrics.mode) ++mode_mismatches;
        }
        json agree;
        agree["max_rel_dev_IM"] = max_rel_im;
        agree["max_rel_dev_IE"] = max_rel_ie;
        agree["mode_mismatch_cells"] = mode_mismatches;
        std::ofstream as(common.out_dir + "/agreement.json");
        as << agree.dump(2) << "\n";
        std::cout << "max_rel_dev_IM = " << format_g17(max_rel_im) << "\n";
    }
    for (const auto& w : primary.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "cells = " << primary.cells.size() << "\n";
    return 0;
}

int cmd_catalog_list() {
    for (const auto& e : catalog()) {
        std::cout << e.id << " [" << to_string(e.statistics) << ", "
                  << (e.mapping == MappingKind::Phonon ? "phonon" : "fermionic")
                  << (e.recursable ? ", rigid" : ", soft") << "] params:";
        for (const auto& p : e.param_names) std::cout << " " << p;
        std::cout << "\n";
    }
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[ok] " : "[FAIL] ") << what << "\n";
        if (!ok) ++failures;
    };
    for (const char* fam : {"lorentzian", "semicircle", "linear_rigid"}) {
        const CatalogEntry& e = lookup(fam);
        std::vector<double> p = e.param_names.size() == 2
                                    ? std::vector<double>{1.0, 1.5}
                                    : std::vector<double>{1.0, 0.4, 1.2};
        auto rep = verify_against_numeric(e, p, 1e-3, 40);
        check(rep.pass, std::string("catalog row ") + fam);
    }
    {
        SetSweepConfig cfg;
        cfg.V_axis = {0.3};
        cfg.Gamma_axis = {1.0};
        const SetModel m = set_model_at(cfg, 0.3, 1.0);
        TransportResult ex = currents(m);
        TransportResult rc = rc_currents(m);
        check(std::abs(rc.IM - ex.IM) < 0.03 * std::abs(ex.IM),
              "RC vs exact SET currents at V=0.3, Gamma=1");
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-coordinate mapping toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    DensityArgs map_dens, chain_dens;
    std::string mapping = "auto";
    bool verify = false;
    int samples = 1001;
    int steps = 10, grid_n = 4000;
    std::string config_path, solver = "exact";
    std::string mu_cold_range;
    int range_n = 33;
    OttoConfig otto_cfg;
    std::string treatment = "weak", decoupling = "sudden";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--jobs", common.jobs, "parallel sweep workers");
        cmd->add_option("--tol", common.tol, "quadrature tolerance");
    };

    CLI::App* mapc = app.add_subcommand("map", "single reaction-coordinate extraction");
    map_dens.add_to(mapc);
    mapc->add_option("--mapping", mapping, "auto|phonon|particle|fermionic");
    mapc->add_flag("--verify", verify, "cross-check against catalog closed forms");
    mapc->add_option("--samples", samples, "residual CSV sample count");
    add_common(mapc);

    CLI::App* chainc = app.add_subcommand("chain", "recursive star-to-chain mapping");
    chain_dens.add_to(chainc);
    chainc->add_option("--steps", steps, "number of mapping steps");
    chainc->add_option("--grid-n", grid_n, "residual grid points per step");
    add_common(chainc);

    CLI::App* ottoc = app.add_subcommand("otto", "discrete-stroke Otto cycle");
    ottoc->add_option("--treatment", treatment, "weak|rc");
    ottoc->add_option("--decoupling", decoupling, "sudden|adiabatic");
    ottoc->add_option("--mu-hot", otto_cfg.mu_hot, "splitting on the hot branch");
    ottoc->add_option("--mu-cold", otto_cfg.mu_cold, "splitting on the cold branch");
    ottoc->add_option("--mu-cold-range", mu_cold_range, "sweep range LO:HI");
    ottoc->add_option("--range-n", range_n, "sweep points");
    ottoc->add_option("--beta-h", otto_cfg.beta_h, "hot inverse temperature");
    ottoc->add_option("--beta-c", otto_cfg.beta_c, "cold inverse temperature");
    ottoc->add_option("--lambda-h", otto_cfg.rc_hot.lambda, "hot RC coupling");
    ottoc->add_option("--omega-h", otto_cfg.rc_hot.omega, "hot RC frequency");
    ottoc->add_option("--lambda-c", otto_cfg.rc_cold.lambda, "cold RC coupling");
    ottoc->add_option("--omega-c", otto_cfg.rc_cold.omega, "cold RC frequency");
    ottoc->add_flag("--renormalization", otto_cfg.include_renormalization,
                    "add the completed-square term lambda^2/Omega S^2");
    add_common(ottoc);

    CLI::App* setc = app.add_subcommand("set", "single-electron transistor sweep");
    setc->add_option("--config", config_path, "sweep config JSON")->required();
    setc->add_option("--solver", solver, "exact|rc|both");
    add_common(setc);

    CLI::App* catc = app.add_subcommand("catalog", "catalog inspection");
    catc->add_subcommand("list", "list families and parameters");

    app.add_subcommand("selftest", "quick internal verification");

    CLI11_PARSE(app, argc, argv);

    const std::string hash = config_hash(join_args(argc, argv));
    try {
        if (mapc->parsed()) return cmd_map(common, map_dens, mapping, verify, samples, hash);
        if (chainc->parsed()) return cmd_chain(common, chain_dens, steps, grid_n, hash);
        if (ottoc->parsed()) {
            if (treatment == "rc") otto_cfg.treatment = OttoTreatment::ReactionCoordinate;
            else if (treatment == "weak") otto_cfg.treatment = OttoTreatment::WeakCoupling;
            else throw ValidationError("--treatment must be weak|rc");
            if (decoupling == "adiabatic") otto_cfg.decoupling = DecouplingProtocol::Adiabatic;
            else if (decoupling == "sudden")
                otto_cfg.decoupling = DecouplingProtocol::Instantaneous;
            else throw ValidationError("--decoupling must be sudden|adiabatic");
            return cmd_otto(common, otto_cfg, mu_cold_range, range_n, hash);
        }
        if (setc->parsed()) return cmd_set(common, config_path, solver, hash);
        if (catc->parsed()) return cmd_catalog_list();
        if (app.get_subcommand("selftest")->parsed()) return cmd_selftest();
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownFamilyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownLabelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
