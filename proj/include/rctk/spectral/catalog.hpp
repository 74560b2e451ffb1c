#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/mapping/rc_mapping.hpp"
#include "rctk/numerics/special.hpp"
#include "rctk/spectral/spectral_density.hpp"

namespace rctk {

enum class MappingKind { Phonon, Fermionic };

// One analytically solvable mapping: input family, extracted-mode closed forms
// and the residual density in closed form. These rows double as the oracle
// suite for the numerical mapping path.
struct CatalogEntry {
    std::string id;
    Statistics statistics;
    MappingKind mapping;
    std::vector<std::string> param_names;
    bool recursable = false;        // rigid cutoff: survives repeated mapping
    bool pv_first_moment = false;   // eps_RC requires a principal value

    std::function<double(const std::vector<double>&)> lambda_sq;
    std::function<double(const std::vector<double>&)> rc_energy;
    std::function<double(const std::vector<double>&, double)> residual_at;
    std::function<SpectralDensity(const std::vector<double>&)> density;
    std::function<SpectralDensity(const std::vector<double>&)> residual_density;
};

namespace detail {

inline void require_params(const CatalogEntry& e, const std::vector<double>& p) {
    if (p.size() != e.param_names.size())
        throw ValidationError("family '" + e.id + "' expects " +
                              std::to_string(e.param_names.size()) + " parameters");
    for (double v : p)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("family '" + e.id + "' requires positive finite parameters");
}

inline double sqr(double x) { return x * x; }

inline std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> cat;
    const double pi = M_PI;

    // ---- bosonic phonon rows -------------------------------------------------

    {
        CatalogEntry e;
        e.id = "phonon_soft_peak";
        e.statistics = Statistics::BosonicOdd;
        e.mapping = MappingKind::Phonon;
        e.param_names = {"gamma", "delta", "eps"};
        e.lambda_sq = [](const std::vector<double>& p) {
            return p[0] * p[1] * p[2] / (4.0 * std::sqrt(3.0 * sqr(p[1]) + sqr(p[2])));
        };
        e.rc_energy = [](const std::vector<double>& p) {
            return std::sqrt(3.0 * sqr(p[1]) + sqr(p[2]));
        };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) {
                return 8.0 * G * sqr(sqr(d)) * ep * w * (w * w + d * d + ep * ep) /
                       (sqr(sqr(d) + sqr(w - ep)) * sqr(sqr(d) + sqr(w + ep)));
            };
            return SpectralDensity::analytic("phonon_soft_peak", p, fn,
                                             Statistics::BosonicOdd, 0.0, kInf,
                                             {std::max(ep - d, 0.0), ep, ep + d},
                                             2.0 * (ep + 4.0 * d));
        };
        e.residual_at = [](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double s = 3.0 * sqr(d) + sqr(ep);
            return 8.0 * d * sqr(d) * w * (sqr(d) + w * w + sqr(ep)) /
                   (std::sqrt(s) * (2.0 * w * w * (5.0 * sqr(d) - sqr(ep)) + sqr(s) +
                                    sqr(sqr(w))));
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("phonon_soft_peak_residual", p, fn,
                                             Statistics::BosonicOdd, 0.0, kInf,
                                             {p[2]}, 2.0 * (p[2] + 4.0 * p[1]));
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "phonon_soft_cubic";
        e.statistics = Statistics::BosonicOdd;
        e.mapping = MappingKind::Phonon;
        e.param_names = {"gamma", "delta", "eps"};
        e.lambda_sq = [](const std::vector<double>& p) {
            return p[0] * sqr(p[1]) / (16.0 * std::sqrt(5.0 * sqr(p[1]) + sqr(p[2])));
        };
        e.rc_energy = [](const std::vector<double>& p) {
            return std::sqrt(5.0 * sqr(p[1]) + sqr(p[2]));
        };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) {
                return 4.0 * G * sqr(sqr(d)) * d * w * w * w /
                       (sqr(sqr(d) + sqr(w - ep)) * sqr(sqr(d) + sqr(w + ep)));
            };
            return SpectralDensity::analytic("phonon_soft_cubic", p, fn,
                                             Statistics::BosonicOdd, 0.0, kInf,
                                             {std::max(ep - d, 0.0), ep, ep + d},
                                             2.0 * (ep + 4.0 * d));
        };
        e.residual_at = [](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double s = 5.0 * sqr(d) + sqr(ep);
            return 16.0 * d * sqr(d) * w * w * w /
                   (std::sqrt(s) * (sqr(sqr(d)) + 2.0 * sqr(d) * (7.0 * w * w + sqr(ep)) +
                                    sqr(w * w - sqr(ep))));
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("phonon_soft_cubic_residual", p, fn,
                                             Statistics::BosonicOdd, 0.0, kInf,
                                             {p[2]}, 2.0 * (p[2] + 4.0 * p[1]));
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "linear_rigid";
        e.statistics = Statistics::BosonicOdd;
        e.mapping = MappingKind::Phonon;
        e.param_names = {"gamma", "wm"};
        e.recursable = true;
        e.lambda_sq = [pi](const std::vector<double>& p) {
            return std::sqrt(5.0 / 3.0) * p[0] * p[1] / (6.0 * pi);
        };
        e.rc_energy = [](const std::vector<double>& p) {
            return std::sqrt(3.0 / 5.0) * p[1];
        };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], wm = p[1];
            auto fn = [G, wm](double w) { return G * w / wm; };
            return SpectralDensity::analytic("linear_rigid", p, fn, Statistics::BosonicOdd,
                                             0.0, wm);
        };
        e.residual_at = [pi](const std::vector<double>& p, double w) {
            const double wm = p[1];
            if (w <= 0.0 || w >= wm) return 0.0;
            const double at = std::atanh(w / wm);
            const double den = pi * pi * w * w + 4.0 * w * at * (w * at - 2.0 * wm) +
                               4.0 * wm * wm;
            return 2.0 * std::sqrt(5.0 / 3.0) * pi * w * wm * wm / (3.0 * den);
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("linear_rigid_residual", p, fn,
                                             Statistics::BosonicOdd, 0.0, p[1]);
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "rubin";
        e.statistics = Statistics::BosonicOdd;
        e.mapping = MappingKind::Phonon;
        e.param_names = {"gamma", "wm"};
        e.recursable = true;
        e.lambda_sq = [](const std::vector<double>& p) {
            return p[0] * p[1] / (16.0 * std::sqrt(2.0));
        };
        e.rc_energy = [](const std::vector<double>& p) { return p[1] / std::sqrt(2.0); };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], wm = p[1];
            auto fn = [G, wm](double w) {
                const double x = w / wm;
                return (x >= 1.0) ? 0.0 : G * x * std::sqrt(1.0 - x * x);
            };
            return SpectralDensity::analytic("rubin", p, fn, Statistics::BosonicOdd, 0.0, wm);
        };
        e.residual_at = [](const std::vector<double>& p, double w) {
            const double wm = p[1];
            const double x = w / wm;
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return (w / std::sqrt(2.0)) * std::sqrt(1.0 - x * x);
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("rubin_residual", p, fn, Statistics::BosonicOdd,
                                             0.0, p[1]);
        };
        cat.push_back(e);
    }

    // ---- fermionic rows ------------------------------------------------------

    {
        CatalogEntry e;
        e.id = "lorentzian";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.pv_first_moment = true;
        e.lambda_sq = [](const std::vector<double>& p) { return 0.5 * p[0] * p[1]; };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) { return G * sqr(d) / (sqr(w - ep) + sqr(d)); };
            return SpectralDensity::analytic("lorentzian", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {ep - d, ep, ep + d}, 10.0 * d + std::abs(ep));
        };
        e.residual_at = [](const std::vector<double>& p, double) { return 2.0 * p[1]; };
        e.residual_density = [](const std::vector<double>& p) {
            const double d = p[1];
            auto fn = [d](double) { return 2.0 * d; };
            return SpectralDensity::analytic("lorentzian_residual", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {p[2]});
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "lorentzian_sq";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.lambda_sq = [](const std::vector<double>& p) { return 0.25 * p[0] * p[1]; };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) {
                return G * sqr(sqr(d)) / sqr(sqr(w - ep) + sqr(d));
            };
            return SpectralDensity::analytic("lorentzian_sq", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {ep - d, ep, ep + d}, 10.0 * d + std::abs(ep));
        };
        e.residual_at = [](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            return d * sqr(2.0 * d) / (sqr(w - ep) + sqr(2.0 * d));
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("lorentzian_sq_residual", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {p[2]}, 20.0 * p[1] + std::abs(p[2]));
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "gaussian";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.lambda_sq = [pi](const std::vector<double>& p) {
            return p[0] * p[1] / (2.0 * std::sqrt(pi));
        };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) { return G * std::exp(-sqr((w - ep) / d)); };
            return SpectralDensity::analytic("gaussian", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {ep - d, ep, ep + d}, 8.0 * d);
        };
        // Table residual involves erf of imaginary argument; evaluated through
        // the real Dawson function:
        //   Gamma1 = 2 delta / (sqrt(pi) e^{-x^2} + (4/sqrt(pi)) e^{x^2} D(x)^2)
        e.residual_at = [pi](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double x = (w - ep) / d;
            const double x2 = x * x;
            if (x2 > 700.0) return 0.0;
            const double den = std::sqrt(pi) * std::exp(-x2) +
                               (4.0 / std::sqrt(pi)) * std::exp(x2) * sqr(dawson(x));
            return 2.0 * d / den;
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("gaussian_residual", p, fn,
                                             Statistics::FermionicFullAxis, -kInf, kInf,
                                             {p[2]}, 8.0 * p[1]);
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "box";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.recursable = true;
        e.lambda_sq = [pi](const std::vector<double>& p) { return p[0] * p[1] / pi; };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G](double) { return G; };
            return SpectralDensity::analytic("box", p, fn, Statistics::FermionicFullAxis,
                                             ep - d, ep + d);
        };
        e.residual_at = [pi](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double x = (ep - w) / d;
            if (std::abs(x) >= 1.0 - 1e-12) return 0.0;
            return 4.0 * pi * d / (pi * pi + 4.0 * sqr(std::atanh(x)));
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("box_residual", p, fn,
                                             Statistics::FermionicFullAxis, p[2] - p[1],
                                             p[2] + p[1]);
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "parabolic_box";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.recursable = true;
        e.lambda_sq = [pi](const std::vector<double>& p) {
            return 2.0 * p[0] * p[1] / (3.0 * pi);
        };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) { return G * (1.0 - sqr((w - ep) / d)); };
            return SpectralDensity::analytic("parabolic_box", p, fn,
                                             Statistics::FermionicFullAxis, ep - d, ep + d);
        };
        e.residual_at = [pi](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double x = w - ep;
            if (std::abs(x / d) >= 1.0 - 1e-12) return 0.0;
            const double par = 1.0 - sqr(x / d);
            const double at = std::atanh(x / d);
            const double den = 4.0 * sqr(d * x - (x + d) * (x - d) * at) /
                                   (pi * pi * sqr(sqr(d))) +
                               sqr(par);
            return (8.0 * d / (3.0 * pi)) * par / den;
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("parabolic_box_residual", p, fn,
                                             Statistics::FermionicFullAxis, p[2] - p[1],
                                             p[2] + p[1]);
        };
        cat.push_back(e);
    }

    {
        CatalogEntry e;
        e.id = "semicircle";
        e.statistics = Statistics::FermionicFullAxis;
        e.mapping = MappingKind::Fermionic;
        e.param_names = {"gamma", "delta", "eps"};
        e.recursable = true;
        e.lambda_sq = [](const std::vector<double>& p) { return 0.25 * p[0] * p[1]; };
        e.rc_energy = [](const std::vector<double>& p) { return p[2]; };
        e.density = [](const std::vector<double>& p) {
            const double G = p[0], d = p[1], ep = p[2];
            auto fn = [G, d, ep](double w) {
                const double x = (w - ep) / d;
                return (std::abs(x) >= 1.0) ? 0.0 : G * std::sqrt(1.0 - x * x);
            };
            return SpectralDensity::analytic("semicircle", p, fn,
                                             Statistics::FermionicFullAxis, ep - d, ep + d);
        };
        e.residual_at = [](const std::vector<double>& p, double w) {
            const double d = p[1], ep = p[2];
            const double x = (w - ep) / d;
            if (std::abs(x) >= 1.0) return 0.0;
            return d * std::sqrt(1.0 - x * x);
        };
        e.residual_density = [e](const std::vector<double>& p) {
            auto fn = [e, p](double w) { return e.residual_at(p, w); };
            return SpectralDensity::analytic("semicircle_residual", p, fn,
                                             Statistics::FermionicFullAxis, p[2] - p[1],
                                             p[2] + p[1]);
        };
        cat.push_back(e);
    }

    return cat;
}

} // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> cat = detail::build_catalog();
    return cat;
}

inline const CatalogEntry& lookup(const std::string& id) {
    for (const auto& e : catalog())
        if (e.id == id) return e;
    throw UnknownFamilyError("unknown spectral density family '" + id + "'");
}

inline SpectralDensity make_density(const std::string& id, const std::vector<double>& params) {
    const CatalogEntry& e = lookup(id);
    detail::require_params(e, params);
    return e.density(params);
}

// Deviation report of the numerical mapping against the tabulated closed forms.
struct CatalogVerifyReport {
    double dev_lambda_sq = 0.0;
    double dev_rc_energy = 0.0;
    double dev_residual = 0.0; // max relative deviation over interior points
    bool pass = false;
};

// Run the matching numerical mapping on the family and compare against the
// closed forms at `n_points` interior points of the effective support.
inline CatalogVerifyReport verify_against_numeric(const CatalogEntry& e,
                                                  const std::vector<double>& params,
                                                  double tol, int n_points = 100) {
    detail::require_params(e, params);
    SpectralDensity d = e.density(params);
    const double quad_tol = std::min(1e-8, 0.01 * tol);
    RCMapResult m = (e.mapping == MappingKind::Phonon) ? map_phonon(d, quad_tol)
                                                       : map_fermionic(d, quad_tol);

    CatalogVerifyReport rep;
    const double ls = e.lambda_sq(params);
    const double rc = e.rc_energy(params);
    rep.dev_lambda_sq = std::abs(m.lambda_sq - ls) / std::abs(ls);
    rep.dev_rc_energy = std::abs(m.rc_energy - rc) / std::max(std::abs(rc), 1e-300);

    // Interior evaluation window: full rigid support trimmed by 2%, or the
    // region where a soft density is non-negligible.
    double lo = d.lo(), hi = d.hi();
    if (!d.bounded()) {
        const auto& bp = d.breakpoints();
        const double c = bp.empty() ? 0.0 : bp[bp.size() / 2];
        double width = 1.0;
        if (bp.size() >= 2) width = 0.5 * (bp.back() - bp.front());
        lo = c - 2.0 * width;
        hi = c + 2.0 * width;
        if (d.statistics() == Statistics::BosonicOdd) lo = std::max(lo, 0.05 * width);
    } else {
        const double span = hi - lo;
        lo += 0.02 * span;
        hi -= 0.02 * span;
    }
    for (int i = 0; i < n_points; ++i) {
        const double w = lo + (hi - lo) * (i + 0.5) / n_points;
        const double closed = e.residual_at(params, w);
        const double num = m.residual.raw(w);
        const double dev = std::abs(num - closed) / std::max(std::abs(closed), 1e-300);
        rep.dev_residual = std::max(rep.dev_residual, dev);
    }
    rep.pass = rep.dev_lambda_sq <= tol && rep.dev_rc_energy <= tol && rep.dev_residual <= tol;
    return rep;
}

} // namespace rctk
