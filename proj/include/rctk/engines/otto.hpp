#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/quantum/hilbert_space.hpp"
#include "rctk/quantum/supersystem.hpp"

namespace rctk {

enum class OttoTreatment { WeakCoupling, ReactionCoordinate };
enum class DecouplingProtocol { Instantaneous, Adiabatic };

struct OttoReservoirRc {
    double lambda = 0.0;
    double omega = 1.0;
};

// Eight-stroke Otto cycle of a two-level system between a hot and a cold
// reservoir. Splittings: mu_hot at points A/A'/B/B', mu_cold at C/C'/D/D'.
struct OttoConfig {
    double mu_hot = 2.0;
    double mu_cold = 1.0;
    double beta_h = 0.5;
    double beta_c = 2.0;
    OttoReservoirRc rc_hot, rc_cold;
    OttoTreatment treatment = OttoTreatment::WeakCoupling;
    DecouplingProtocol decoupling = DecouplingProtocol::Instantaneous;
    SystemCoupling s_choice = SystemCoupling::SigmaX;
    bool include_renormalization = false;
    int n_max = -1; // < 0: adaptive truncation per supersystem

    void validate() const {
        if (!(mu_hot > mu_cold) || !(mu_cold > 0.0))
            throw ValidationError("otto: require mu_hot > mu_cold > 0");
        if (!(beta_c > beta_h) || !(beta_h > 0.0))
            throw ValidationError("otto: require beta_c > beta_h > 0 (T_h > T_c)");
        if (rc_hot.lambda < 0.0 || rc_cold.lambda < 0.0)
            throw ValidationError("otto: coupling lambda must be >= 0");
    }
};

struct StrokeEntry {
    std::string name;
    double work = 0.0; // energy added to the tracked inventory as work
    double heat = 0.0; // energy added as heat (isochores, RC re-thermalization)
};

struct CycleReport {
    std::vector<StrokeEntry> ledger;
    double W_net = 0.0; // net work output of the cycle (positive = produced)
    double Q_hot = 0.0; // energy change along the hot isochore A' -> B
    double W_decouple_hot = 0.0;
    double W_decouple_cold = 0.0;
    double eta = 0.0; // W_net / Q_hot, meaningful when Q_hot > 0
    double closure = 0.0; // sum of all ledger entries; zero for a closed cycle
};

namespace detail {

inline double weak_energy(double beta, double mu) {
    return -0.5 * mu * std::tanh(0.5 * beta * mu);
}

struct DecoupleOutcome {
    double work = 0.0;     // supersystem energy change during the ramp
    double e_sys = 0.0;    // system energy after decoupling
    double e_rc = 0.0;     // RC energy after decoupling (pre re-thermalization)
    Matrix rho_sys;        // reduced system state after decoupling
};

// Sudden decoupling: state unchanged, work = -<H_I>.
inline DecoupleOutcome decouple_sudden(const Supersystem& sys, const Matrix& rho,
                                       const Matrix& Hs0, const Matrix& Hrc) {
    DecoupleOutcome out;
    const double e_tot = expectation(sys.hamiltonian.mat, rho);
    out.e_sys = expectation(Hs0, rho);
    out.e_rc = expectation(Hrc, rho);
    out.work = (out.e_sys + out.e_rc) - e_tot;
    out.rho_sys = partial_trace({sys.space, rho}, {"tls"}).mat;
    return out;
}

// Adiabatic decoupling: populations frozen on the instantaneous eigenstates
// while lambda ramps to zero. The ramp conserves a two-valued symmetry label
// (sigma_z x (-1)^n parity for sigma_x coupling, sigma_z otherwise), and the
// infinitely slow limit preserves the energy rank within each sector, so the
// end state follows from sector-resolved rank matching. The last sliver of
// coupling is quenched suddenly; its work is O((s_min lambda)^2).
inline DecoupleOutcome decouple_adiabatic(const TlsRcSpec& spec, double beta) {
    Supersystem full = build_supersystem(spec);
    const int dim = full.space.total_dim();

    Matrix sector_op;
    if (spec.s_choice == SystemCoupling::SigmaX) {
        Matrix flip = Matrix::Zero(spec.n_max + 1, spec.n_max + 1);
        for (int n = 0; n <= spec.n_max; ++n) flip(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
        sector_op = embed(full.space, "tls", pauli_z()) * embed(full.space, "rc", flip);
    } else {
        sector_op = embed(full.space, "tls", pauli_z());
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(full.hamiltonian.mat);
    const Eigen::VectorXd E0 = es.eigenvalues();
    Eigen::VectorXd p(dim);
    const double emin = E0.minCoeff();
    for (int i = 0; i < dim; ++i) p[i] = std::exp(-beta * (E0[i] - emin));
    p /= p.sum();

    TlsRcSpec tail = spec;
    tail.lambda = 1e-3 * spec.lambda;
    Supersystem end_sys = build_supersystem(tail);
    Eigen::SelfAdjointEigenSolver<Matrix> ee(end_sys.hamiltonian.mat);

    auto sector_of = [&](const Matrix& vecs, int col) {
        const double val =
            (vecs.col(col).adjoint() * sector_op * vecs.col(col))(0, 0).real();
        return val >= 0.0 ? +1 : -1;
    };
    // eigenvalues come sorted; collect per-sector index lists in energy order
    auto split = [&](const Matrix& vecs) {
        std::array<std::vector<int>, 2> idx;
        for (int i = 0; i < dim; ++i) idx[sector_of(vecs, i) > 0 ? 0 : 1].push_back(i);
        return idx;
    };
    const auto start_idx = split(es.eigenvectors());
    const auto end_idx = split(ee.eigenvectors());
    if (start_idx[0].size() != end_idx[0].size())
        throw NonConvergentError("adiabatic tracking: sector dimensions changed");

    Matrix rho_end = Matrix::Zero(dim, dim);
    for (int sec = 0; sec < 2; ++sec)
        for (std::size_t k = 0; k < start_idx[sec].size(); ++k) {
            const auto v = ee.eigenvectors().col(end_idx[sec][k]);
            rho_end += p[start_idx[sec][k]] * (v * v.adjoint());
        }

    const Matrix Hs0 = 0.5 * spec.mu * embed(full.space, "tls", pauli_z());
    const Matrix a = boson_destroy(spec.n_max);
    const Matrix Hrc = spec.omega * embed(full.space, "rc", (a.adjoint() * a).eval());

    DecoupleOutcome out;
    double e_start = 0.0;
    for (int i = 0; i < dim; ++i) e_start += p[i] * E0[i];
    out.e_sys = expectation(Hs0, rho_end);
    out.e_rc = expectation(Hrc, rho_end);
    out.work = (out.e_sys + out.e_rc) - e_start;
    out.rho_sys = partial_trace({full.space, rho_end}, {"tls"}).mat;
    return out;
}

} // namespace detail

inline CycleReport run_otto(const OttoConfig& cfg) {
    cfg.validate();
    CycleReport rep;
    const double r = cfg.mu_cold / cfg.mu_hot;

    if (cfg.treatment == OttoTreatment::WeakCoupling) {
        const double E_B = detail::weak_energy(cfg.beta_h, cfg.mu_hot);
        const double E_D = detail::weak_energy(cfg.beta_c, cfg.mu_cold);
        const double E_A = E_D / r;
        const double E_C = r * E_B;
        const double W_exp = E_C - E_B;
        const double W_comp = E_A - E_D;
        rep.Q_hot = E_B - E_A;
        const double Q_cold = E_D - E_C;
        rep.ledger = {{"couple_hot", 0.0, 0.0},
                      {"hot_isochore", 0.0, rep.Q_hot},
                      {"decouple_hot", 0.0, 0.0},
                      {"rethermalize_hot", 0.0, 0.0},
                      {"expansion", W_exp, 0.0},
                      {"couple_cold", 0.0, 0.0},
                      {"cold_isochore", 0.0, Q_cold},
                      {"decouple_cold", 0.0, 0.0},
                      {"rethermalize_cold", 0.0, 0.0},
                      {"compression", W_comp, 0.0}};
        rep.W_net = -(W_exp + W_comp);
        // closed form, valid for every splitting ratio (W/Q_hot whenever Q_hot != 0)
        rep.eta = 1.0 - r;
    } else {
        TlsRcSpec spec_h{cfg.mu_hot,  cfg.rc_hot.lambda,  cfg.rc_hot.omega,
                         cfg.s_choice, 12, cfg.include_renormalization};
        TlsRcSpec spec_c{cfg.mu_cold, cfg.rc_cold.lambda, cfg.rc_cold.omega,
                         cfg.s_choice, 12, cfg.include_renormalization};
        spec_h.n_max = cfg.n_max > 0 ? cfg.n_max : choose_nmax(spec_h, cfg.beta_h);
        spec_c.n_max = cfg.n_max > 0 ? cfg.n_max : choose_nmax(spec_c, cfg.beta_c);

        Supersystem sys_h = build_supersystem(spec_h);
        Supersystem sys_c = build_supersystem(spec_c);
        const Matrix S2 = (system_coupling_matrix(cfg.s_choice) *
                           system_coupling_matrix(cfg.s_choice))
                              .eval();

        auto bare_parts = [&](const Supersystem& sys, const TlsRcSpec& sp) {
            const Matrix Hs0 = 0.5 * sp.mu * embed(sys.space, "tls", pauli_z());
            const Matrix a = boson_destroy(sp.n_max);
            const Matrix Hrc = sp.omega * embed(sys.space, "rc", (a.adjoint() * a).eval());
            return std::pair<Matrix, Matrix>(Hs0, Hrc);
        };
        auto [Hs0_h, Hrc_h] = bare_parts(sys_h, spec_h);
        auto [Hs0_c, Hrc_c] = bare_parts(sys_c, spec_c);

        auto rc_thermal_energy = [](const TlsRcSpec& sp, double beta) {
            double z = 0.0, ez = 0.0;
            for (int n = 0; n <= sp.n_max; ++n) {
                const double w = std::exp(-beta * sp.omega * n);
                z += w;
                ez += sp.omega * n * w;
            }
            return ez / z;
        };
        const double Erc_th_h = rc_thermal_energy(spec_h, cfg.beta_h);
        const double Erc_th_c = rc_thermal_energy(spec_c, cfg.beta_c);

        // hot isochore endpoint
        GibbsState gB = gibbs(sys_h.hamiltonian, cfg.beta_h);
        const double E_B = expectation(sys_h.hamiltonian.mat, gB.density);

        detail::DecoupleOutcome dh =
            (cfg.decoupling == DecouplingProtocol::Instantaneous)
                ? detail::decouple_sudden(sys_h, gB.density, Hs0_h, Hrc_h)
                : detail::decouple_adiabatic(spec_h, cfg.beta_h);
        rep.W_decouple_hot = dh.work;
        const double Q_reth_h = Erc_th_h - dh.e_rc;

        const double W_exp = (r - 1.0) * dh.e_sys;
        const double Esys_C = r * dh.e_sys;

        const double W_couple_c =
            cfg.include_renormalization
                ? (spec_c.lambda * spec_c.lambda / spec_c.omega) *
                      expectation(S2, dh.rho_sys)
                : 0.0;
        const double E_Cp = Esys_C + Erc_th_c + W_couple_c;

        GibbsState gD = gibbs(sys_c.hamiltonian, cfg.beta_c);
        const double E_D = expectation(sys_c.hamiltonian.mat, gD.density);
        const double Q_cold = E_D - E_Cp;

        detail::DecoupleOutcome dc =
            (cfg.decoupling == DecouplingProtocol::Instantaneous)
                ? detail::decouple_sudden(sys_c, gD.density, Hs0_c, Hrc_c)
                : detail::decouple_adiabatic(spec_c, cfg.beta_c);
        rep.W_decouple_cold = dc.work;
        const double Q_reth_c = Erc_th_c - dc.e_rc;

        const double W_comp = (1.0 / r - 1.0) * dc.e_sys;
        const double Esys_A = dc.e_sys / r;

        const double W_couple_h =
            cfg.include_renormalization
                ? (spec_h.lambda * spec_h.lambda / spec_h.omega) *
                      expectation(S2, dc.rho_sys)
                : 0.0;
        const double E_Ap = Esys_A + Erc_th_h + W_couple_h;
        rep.Q_hot = E_B - E_Ap;

        rep.ledger = {{"couple_hot", W_couple_h, 0.0},
                      {"hot_isochore", 0.0, rep.Q_hot},
                      {"decouple_hot", dh.work, 0.0},
                      {"rethermalize_hot", 0.0, Q_reth_h},
                      {"expansion", W_exp, 0.0},
                      {"couple_cold", W_couple_c, 0.0},
                      {"cold_isochore", 0.0, Q_cold},
                      {"decouple_cold", dc.work, 0.0},
                      {"rethermalize_cold", 0.0, Q_reth_c},
                      {"compression", W_comp, 0.0}};
        rep.W_net = -(W_couple_h + dh.work + W_exp + W_couple_c + dc.work + W_comp);
    }

    for (const auto& s : rep.ledger) rep.closure += s.work + s.heat;
    if (cfg.treatment == OttoTreatment::ReactionCoordinate)
        rep.eta = (rep.Q_hot > 0.0) ? rep.W_net / rep.Q_hot : 0.0;
    return rep;
}

struct OttoCurvePoint {
    double mu_ratio = 0.0;
    double W = 0.0;
    double eta = 0.0;
    bool max_eta = false;
};

// Parametric (W, eta) curve generated by varying the cold splitting. Flags the
// maximum-efficiency point among cycles with positive work output.
inline std::vector<OttoCurvePoint> otto_sweep(OttoConfig base, double mu_c_min,
                                              double mu_c_max, int n) {
    if (!(mu_c_min > 0.0) || !(mu_c_max < base.mu_hot) || !(mu_c_min < mu_c_max) || n < 2)
        throw ValidationError("otto_sweep: range must satisfy 0 < min < max < mu_hot");
    std::vector<OttoCurvePoint> curve;
    int best = -1;
    double best_eta = -1.0;
    for (int i = 0; i < n; ++i) {
        base.mu_cold = mu_c_min + (mu_c_max - mu_c_min) * i / (n - 1.0);
        CycleReport r = run_otto(base);
        OttoCurvePoint pt;
        pt.mu_ratio = base.mu_cold / base.mu_hot;
        pt.W = r.W_net;
        pt.eta = (r.Q_hot > 0.0 && r.W_net > 0.0) ? r.eta : 0.0;
        if (r.W_net > 0.0 && pt.eta > best_eta) {
            best_eta = pt.eta;
            best = i;
        }
        curve.push_back(pt);
    }
    if (best >= 0) curve[static_cast<std::size_t>(best)].max_eta = true;
    return curve;
}

} // namespace rctk
