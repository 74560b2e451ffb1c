#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/mapping/rc_mapping.hpp"
#include "rctk/spectral/spectral_density.hpp"

namespace rctk {

// Star-shaped discretization of a reservoir: one mode per node, couplings
// chosen real and nonnegative (phases absorbed into the mode operators).
// Weight convention: 2 pi h_k^2 = w_k Gamma(omega_k).
struct DiscreteStar {
    std::vector<double> mode_energies;
    std::vector<double> couplings;
};

enum class StarKind { Phonon, Particle };

namespace detail {

// Panel edges packing nodes around the density's structure: geometric ladders
// around each breakpoint, clipped to the (possibly soft) support.
inline std::vector<double> discretization_edges(const SpectralDensity& d) {
    std::vector<double> edges;
    double lo = d.lo(), hi = d.hi();
    std::vector<double> centers = d.breakpoints();
    if (centers.empty()) {
        if (!d.bounded())
            throw ValidationError("discretize: unbounded density without breakpoints");
        centers = {0.5 * (lo + hi)};
    }
    double width = d.pv_window() > 0.0 ? 0.25 * d.pv_window() : 0.0;
    if (width <= 0.0) {
        width = centers.size() >= 2 ? 0.5 * (centers.back() - centers.front())
                                    : 0.1 * std::max(1.0, std::abs(centers[0]));
    }
    const double ladder[] = {0.0, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 2000.0};
    for (double c : centers)
        for (double s : ladder) {
            edges.push_back(c - s * width);
            edges.push_back(c + s * width);
        }
    if (!std::isfinite(lo)) lo = *std::min_element(edges.begin(), edges.end());
    if (!std::isfinite(hi)) hi = *std::max_element(edges.begin(), edges.end());
    edges.push_back(lo);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    std::vector<double> out;
    for (double e : edges) {
        if (e < lo || e > hi) continue;
        if (out.empty() || e - out.back() > 1e-12 * (hi - lo)) out.push_back(e);
    }
    if (out.size() < 2) throw ValidationError("discretize: degenerate support");
    return out;
}

} // namespace detail

// Composite Gauss-Legendre discretization of Gamma onto n_modes star modes.
inline DiscreteStar discretize(const SpectralDensity& d, std::size_t n_modes) {
    std::vector<double> edges = detail::discretization_edges(d);
    const std::size_t npanels = edges.size() - 1;
    if (n_modes < npanels)
        throw ValidationError("discretize: need at least one node per panel");
    const std::size_t per = n_modes / npanels;
    std::size_t extra = n_modes % npanels;

    DiscreteStar star;
    star.mode_energies.reserve(n_modes);
    star.couplings.reserve(n_modes);
    std::vector<double> xs, ws;
    for (std::size_t p = 0; p < npanels; ++p) {
        std::size_t n = per + (extra > 0 ? 1 : 0);
        if (extra > 0) --extra;
        if (n == 0) continue;
        gauss_legendre(static_cast<int>(n), xs, ws);
        const double c = 0.5 * (edges[p] + edges[p + 1]);
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = c + h * xs[k];
            const double val = d.raw(w);
            star.mode_energies.push_back(w);
            star.couplings.push_back(std::sqrt(std::max(0.0, h * ws[k] * val / (2.0 * M_PI))));
        }
    }
    return star;
}

// Chain form of a star plus the orthogonal Lanczos basis that generated it.
// The basis columns fix the Bogoliubov transform of the full mapping.
struct StarChainResult {
    ChainCoefficients chain;
    Eigen::MatrixXd basis; // star-size x chain-length, orthonormal columns
};

// Tridiagonalize the star with the seed fixed by the system-reservoir
// coupling. Particle/fermionic case: plain Lanczos on diag(omega_k) seeded
// with h_k. Phonon case: Lanczos on the squared-frequency quadratic form
// diag(omega_k^2) seeded with h_k sqrt(omega_k); site frequencies are the
// square roots of the diagonal and position couplings follow from the
// ladder-operator normalization.
inline StarChainResult lanczos_chain(const DiscreteStar& star, std::size_t modes,
                                     StarKind kind) {
    const std::size_t n = star.mode_energies.size();
    if (n == 0 || star.couplings.size() != n)
        throw ValidationError("lanczos_chain: empty or inconsistent star");
    if (modes == 0 || modes > n)
        throw ValidationError("lanczos_chain: requested modes must be in [1, star size]");

    Eigen::VectorXd diag(n), seed(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = star.mode_energies[k];
        const double h = star.couplings[k];
        if (kind == StarKind::Phonon) {
            if (w <= 0.0)
                throw ValidationError("lanczos_chain: phonon star requires positive energies");
            diag[k] = w * w;
            seed[k] = h * std::sqrt(w);
        } else {
            diag[k] = w;
            seed[k] = h;
        }
    }
    const double seed_norm = seed.norm();
    if (!(seed_norm > 0.0))
        throw ValidationError("lanczos_chain: couplings are all zero");

    StarChainResult out;
    Eigen::MatrixXd Q(n, modes);
    Q.col(0) = seed / seed_norm;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = diag.asDiagonal() * Q.col(0);
    alpha.push_back(Q.col(0).dot(v));
    v -= alpha[0] * Q.col(0);

    const double scale = diag.cwiseAbs().maxCoeff();
    std::size_t built = 1;
    for (std::size_t j = 1; j < modes; ++j) {
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            v -= Q.leftCols(built) * (Q.leftCols(built).transpose() * v);
        const double b = v.norm();
        if (b <= 1e-13 * scale) {
            out.chain.breakdown = true;
            break;
        }
        beta.push_back(b);
        Q.col(built) = v / b;
        v = diag.asDiagonal() * Q.col(built);
        alpha.push_back(Q.col(built).dot(v));
        v -= alpha.back() * Q.col(built) + b * Q.col(built - 1);
        ++built;
    }

    out.basis = Q.leftCols(built);
    auto& ch = out.chain;
    if (kind == StarKind::Phonon) {
        for (std::size_t j = 0; j < built; ++j) {
            if (alpha[j] <= 0.0) throw NonConvergentError("lanczos_chain: negative site form");
            ch.site_energies.push_back(std::sqrt(alpha[j]));
        }
        ch.hop_couplings.push_back(seed_norm / std::sqrt(ch.site_energies[0]));
        for (std::size_t j = 0; j + 1 < built; ++j)
            ch.hop_couplings.push_back(
                beta[j] / (2.0 * std::sqrt(ch.site_energies[j] * ch.site_energies[j + 1])));
    } else {
        for (std::size_t j = 0; j < built; ++j) ch.site_energies.push_back(alpha[j]);
        ch.hop_couplings.push_back(seed_norm);
        for (std::size_t j = 0; j + 1 < built; ++j) ch.hop_couplings.push_back(beta[j]);
    }
    return out;
}

// Bogoliubov blocks of the discrete transform generated by the Lanczos basis.
// Particle/fermionic mappings do not mix creation and annihilation parts
// (V = 0, U unitary); the phonon mapping mixes them through the
// frequency-weighted normal-mode construction.
struct BogoliubovBlocks {
    Eigen::MatrixXd U, V;
};

inline BogoliubovBlocks bogoliubov_blocks(const DiscreteStar& star, const StarChainResult& r,
                                          StarKind kind) {
    const auto n = static_cast<Eigen::Index>(star.mode_energies.size());
    const Eigen::Index m = r.basis.cols();
    BogoliubovBlocks b;
    if (kind == StarKind::Particle) {
        b.U = r.basis;
        b.V = Eigen::MatrixXd::Zero(n, m);
        return b;
    }
    b.U.resize(n, m);
    b.V.resize(n, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double wk = star.mode_energies[static_cast<std::size_t>(k)];
        for (Eigen::Index q = 0; q < m; ++q) {
            const double Oq = r.chain.site_energies[static_cast<std::size_t>(q)];
            const double a = std::sqrt(wk / Oq);
            b.U(k, q) = 0.5 * (a + 1.0 / a) * r.basis(k, q);
            b.V(k, q) = 0.5 * (a - 1.0 / a) * r.basis(k, q);
        }
    }
    return b;
}

} // namespace rctk
