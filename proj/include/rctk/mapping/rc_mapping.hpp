#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/spectral/spectral_density.hpp"

namespace rctk {

// Outcome of one reaction-coordinate extraction step: the extracted mode
// (coupling lambda, energy Omega or eps_RC) plus the residual coupling density
// seen by the new supersystem. The residual is evaluated lazily and exactly;
// use sample_to_grid to materialize it.
struct RCMapResult {
    double lambda = 0.0;
    double lambda_sq = 0.0;
    double rc_energy = 0.0;
    bool used_principal_value = false;
    SpectralDensity residual;
};

namespace detail {

inline SpectralDensity make_residual_density(const SpectralDensity& base, double lambda_sq,
                                             double tol) {
    const double lo = base.lo();
    const double hi = base.hi();
    const bool rigid = std::isfinite(lo) && std::isfinite(hi);
    const double span = rigid ? hi - lo : 0.0;
    auto fn = [base, lambda_sq, tol, lo, hi, rigid, span](double w) {
        if (rigid && std::min(std::abs(w - lo), std::abs(w - hi)) <= 1e-12 * span)
            return 0.0; // endpoint convention: arctanh-type denominators diverge there
        const double g = base.raw(w);
        if (g == 0.0) return 0.0;
        const double h = hilbert_pv(base, w, tol);
        return 4.0 * lambda_sq * g / (h * h + g * g);
    };
    return SpectralDensity::analytic("", {}, std::move(fn), base.statistics(), lo, hi,
                                     base.breakpoints(), base.pv_window());
}

} // namespace detail

// Bosonic phonon mapping: position-position coupling before and after.
//   lambda^2 = (1/2 pi Omega) int_0^inf w Gamma dw
//   Omega^2  = int w^3 Gamma / int w Gamma
//   Gamma1   = 4 lambda^2 Gamma / (H^2 + Gamma^2),  H the odd-extended transform
inline RCMapResult map_phonon(const SpectralDensity& d, double tol = 1e-6) {
    if (d.statistics() != Statistics::BosonicOdd)
        throw ValidationError("map_phonon requires a BosonicOdd density");
    MomentOptions mo;
    mo.tol = std::min(tol, 1e-8);
    const double m1 = moment(d, 1, mo);
    const double m3 = moment(d, 3, mo);
    if (!(m1 > 0.0) || !(m3 > 0.0))
        throw ValidationError("map_phonon: degenerate density (vanishing moments)");
    RCMapResult r;
    r.rc_energy = std::sqrt(m3 / m1);
    r.lambda_sq = m1 / (2.0 * M_PI * r.rc_energy);
    r.lambda = std::sqrt(r.lambda_sq);
    r.residual = detail::make_residual_density(d, r.lambda_sq, tol);
    return r;
}

// Fermionic particle mapping over the full energy axis (no continuation).
//   lambda^2 = (1/2 pi) int Gamma dw,  eps_RC = int w Gamma / int Gamma
inline RCMapResult map_fermionic(const SpectralDensity& d, double tol = 1e-6) {
    if (d.statistics() != Statistics::FermionicFullAxis)
        throw ValidationError("map_fermionic requires a FermionicFullAxis density");
    MomentOptions mo;
    mo.tol = std::min(tol, 1e-8);
    const double m0 = moment(d, 0, mo);
    if (!(m0 > 0.0)) throw ValidationError("map_fermionic: degenerate density");
    RCMapResult r;
    double m1;
    try {
        m1 = moment(d, 1, mo);
    } catch (const NeedsPrincipalValueError&) {
        mo.principal_value = true;
        m1 = moment(d, 1, mo);
        r.used_principal_value = true;
    }
    r.lambda_sq = m0 / (2.0 * M_PI);
    r.lambda = std::sqrt(r.lambda_sq);
    r.rc_energy = m1 / m0;
    r.residual = detail::make_residual_density(d, r.lambda_sq, tol);
    return r;
}

// Bosonic particle mapping: valid for densities supported on w > 0 only, where
// it coincides with the fermionic mapping restricted to the half axis.
inline RCMapResult map_particle(const SpectralDensity& d, double tol = 1e-6) {
    if (d.lo() < 0.0)
        throw ValidationError("map_particle requires support contained in w >= 0");
    SpectralDensity half = d.with_statistics(Statistics::FermionicFullAxis);
    return map_fermionic(half, tol);
}

// ---------------------------------------------------------------------------
// Recursive mapping: star to chain
// ---------------------------------------------------------------------------

struct ChainCoefficients {
    std::vector<double> site_energies; // Omega_1..Omega_N (or eps_1..eps_N)
    std::vector<double> hop_couplings; // lambda_1..lambda_N; lambda_1 couples the system
    SpectralDensity terminal_residual;
    bool breakdown = false; // Lanczos norm underflow produced a shorter chain
};

struct RecurseGridSpec {
    std::size_t n_points = 4000;
    double tol = 1e-6;
};

// Apply the statistics-appropriate mapping `steps` times, re-sampling each
// residual onto a fixed grid between steps. `step_residuals`, when given,
// collects the sampled residual after every step.
inline ChainCoefficients recurse(const SpectralDensity& d, int steps,
                                 const RecurseGridSpec& spec = {},
                                 std::vector<SpectralDensity>* step_residuals = nullptr) {
    if (steps < 1) throw ValidationError("recurse: steps must be >= 1");
    ChainCoefficients out;
    SpectralDensity cur = d;
    for (int k = 0; k < steps; ++k) {
        RCMapResult step;
        try {
            step = (cur.statistics() == Statistics::BosonicOdd) ? map_phonon(cur, spec.tol)
                                                                : map_fermionic(cur, spec.tol);
            if (!cur.bounded())
                throw DivergentError("residual support is unbounded; recursion requires "
                                     "a rigid cutoff");
            out.site_energies.push_back(step.rc_energy);
            out.hop_couplings.push_back(step.lambda);
            cur = sample_to_grid(step.residual, spec.n_points, cur.lo(), cur.hi());
            if (step_residuals) step_residuals->push_back(cur);
        } catch (const std::runtime_error& e) {
            throw DivergentError("recurse failed at step " + std::to_string(k + 1) + ": " +
                                 e.what());
        }
    }
    out.terminal_residual = cur;
    return out;
}

} // namespace rctk
