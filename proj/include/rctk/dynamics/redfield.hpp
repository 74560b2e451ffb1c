#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/numerics/special.hpp"
#include "rctk/quantum/hilbert_space.hpp"
#include "rctk/spectral/spectral_density.hpp"

namespace rctk {

// A residual reservoir attached to the supersystem: thermal parameters, the
// residual coupling density Gamma^(1), and the supersystem operator it couples
// to (Hermitian position-type for bosonic, annihilation-type for fermionic).
struct ReservoirSpec {
    std::string label;
    double beta = 1.0;
    double mu = 0.0; // fermionic only
    SpectralDensity residual;
    OperatorMatrix coupling;
    Statistics statistics = Statistics::FermionicFullAxis;
};

struct RedfieldOptions {
    bool lamb_shift = true; // imaginary (level-shift) parts of the half-sided transforms
    double pv_tol = 1e-8;
    double degeneracy_bin = 1e-9; // relative to ||H||; Bohr frequencies closer are merged
};

struct Liouvillian {
    int dim = 0;                     // supersystem dimension d
    Eigen::VectorXd energies;        // eigenvalues of H
    Matrix eigenvectors;             // H = Q E Q^dag
    Matrix generator;                // full generator in the eigenbasis, d^2 x d^2
    std::vector<Matrix> reservoir_parts; // dissipator per attached reservoir
    std::vector<ReservoirSpec> attachments;
    std::vector<std::string> warnings;
};

namespace detail {

inline void add_dissipator_halfpair(Matrix& L, const Matrix& Lam, const Matrix& A,
                                    const Matrix& Aconj) {
    const auto d = A.rows();
    const Matrix I = Matrix::Identity(d, d);
    L += kron(A.transpose(), Lam);
    L -= kron(I, (A * Lam).eval());
    L += kron(Lam.conjugate(), Aconj);
    L -= kron((Lam.adjoint() * Aconj).transpose().eval(), I);
}

// Snap Bohr frequencies onto cluster representatives so that numerical
// eigenvalue jitter cannot split physical degeneracies.
inline std::map<double, double> bin_bohr_frequencies(const Eigen::VectorXd& E, double tol,
                                                     std::vector<std::string>& warnings) {
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(E.size()) * E.size());
    for (Eigen::Index m = 0; m < E.size(); ++m)
        for (Eigen::Index n = 0; n < E.size(); ++n) all.push_back(E[m] - E[n]);
    std::sort(all.begin(), all.end());
    const double hnorm = std::max(std::abs(all.front()), std::abs(all.back()));
    const double jitter = 100.0 * std::numeric_limits<double>::epsilon() * std::max(hnorm, 1.0);
    std::map<double, double> snap;
    std::size_t i = 0;
    bool warned = false;
    while (i < all.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < all.size() && all[j] - all[i] <= tol) sum += all[j++];
        const double rep = sum / static_cast<double>(j - i);
        if (!warned && all[j - 1] - all[i] > jitter) {
            warnings.push_back("DegenerateBasisWarning: distinct Bohr frequencies within the "
                               "degeneracy bin were merged");
            warned = true;
        }
        for (std::size_t k = i; k < j; ++k) snap[all[k]] = rep;
        i = j;
    }
    return snap;
}

// Bosonic full Fourier transform of the bath correlation function,
// gamma(nu) = Gamma_odd(nu) (1 + n_B(nu)), finite at nu -> 0 for densities
// vanishing linearly there.
inline double bosonic_gamma(const SpectralDensity& d, double beta, double nu) {
    const double scale = std::isfinite(d.hi()) ? d.hi() : 1.0;
    const double tiny = 1e-8 * std::max(scale, 1.0);
    if (std::abs(nu) < tiny) {
        const double h = 10.0 * tiny;
        return (d(h) / h) / beta;
    }
    return d(nu) * (1.0 + bose_occupation(nu, beta));
}

} // namespace detail

// Assemble the non-secular Born-Markov (Redfield) generator in the eigenbasis
// of H, with half-sided bath correlation transforms built from the residual
// densities and Fermi/Bose occupations.
inline Liouvillian build_redfield(const OperatorMatrix& H,
                                  const std::vector<ReservoirSpec>& reservoirs,
                                  const RedfieldOptions& opts = {}) {
    if (!is_hermitian(H.mat)) throw ValidationError("build_redfield: H is not Hermitian");
    Liouvillian L;
    L.dim = static_cast<int>(H.mat.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
    L.energies = es.eigenvalues();
    L.eigenvectors = es.eigenvectors();
    L.attachments = reservoirs;

    const int d = L.dim;
    const int d2 = d * d;
    const double hnorm = std::max(L.energies.cwiseAbs().maxCoeff(), 1e-300);
    auto snap = detail::bin_bohr_frequencies(L.energies, opts.degeneracy_bin * hnorm,
                                             L.warnings);

    // coherent part: -i (1 x H - H^T x 1) with H diagonal here
    Matrix Ldiag = Matrix::Zero(d2, d2);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const int idx = n * d + m; // column-major vec index of (m, n)
            Ldiag(idx, idx) = Complex(0.0, -(L.energies[m] - L.energies[n]));
        }
    L.generator = Ldiag;

    for (const auto& res : reservoirs) {
        if (!(res.beta > 0.0))
            throw ValidationError("reservoir '" + res.label + "': beta must be positive");
        if (res.coupling.mat.rows() != d)
            throw ValidationError("reservoir coupling operator dimension mismatch");
        Matrix A = L.eigenvectors.adjoint() * res.coupling.mat * L.eigenvectors;
        Matrix K = Matrix::Zero(d2, d2);

        // smoothness advisory: the density should vary slowly on the thermal scale
        {
            const double probe = 1.0 / res.beta;
            const double g0 = res.residual(0.0), g1 = res.residual(probe);
            if (std::abs(g1 - g0) > 0.5 * (std::abs(g0) + std::abs(g1)) + 1e-300)
                L.warnings.push_back("reservoir '" + res.label +
                                     "': residual density varies on the thermal scale; "
                                     "Born-Markov treatment may be inaccurate");
        }

        if (res.statistics == Statistics::BosonicOdd) {
            if (!is_hermitian(res.coupling.mat))
                throw ValidationError("bosonic reservoir requires a Hermitian coupling");
            auto gam = [&](double nu) { return detail::bosonic_gamma(res.residual, res.beta, nu); };
            const double hi = res.residual.hi();
            const double glo = std::isfinite(hi) ? -hi : -kInf;
            const double ghi = std::isfinite(hi) ? hi : kInf;
            std::vector<double> seeds = res.residual.breakpoints();
            for (double b : res.residual.breakpoints()) seeds.push_back(-b);
            seeds.push_back(0.0);
            seeds.push_back(1.0 / res.beta);
            seeds.push_back(-1.0 / res.beta);
            std::map<double, Complex> cache;
            auto hhat = [&](double w) {
                auto it = cache.find(w);
                if (it != cache.end()) return it->second;
                double re = 0.5 * gam(-w);
                double im = 0.0;
                if (opts.lamb_shift)
                    im = -0.5 * pv_transform(gam, glo, ghi, -w, opts.pv_tol, seeds,
                                             res.residual.pv_window());
                const Complex v(re, im);
                cache[w] = v;
                return v;
            };
            Matrix Lam(d, d);
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    Lam(m, n) = A(m, n) * hhat(snap.at(L.energies[m] - L.energies[n]));
            detail::add_dissipator_halfpair(K, Lam, A, A);
        } else {
            const Matrix Adag = A.adjoint();
            auto gf = [&](double nu) {
                return res.residual(nu) * fermi_occupation(nu, res.beta, res.mu);
            };
            auto gbar = [&](double nu) {
                return res.residual(nu) * (1.0 - fermi_occupation(nu, res.beta, res.mu));
            };
            std::vector<double> seeds = res.residual.breakpoints();
            seeds.push_back(res.mu);
            const double lo = res.residual.lo(), hi = res.residual.hi();
            std::map<double, Complex> cache12, cache21;
            auto h12 = [&](double w) {
                auto it = cache12.find(w);
                if (it != cache12.end()) return it->second;
                double re = 0.5 * gf(w);
                double im = 0.0;
                if (opts.lamb_shift)
                    im = 0.5 * pv_transform(gf, lo, hi, w, opts.pv_tol, seeds,
                                            res.residual.pv_window());
                const Complex v(re, im);
                cache12[w] = v;
                return v;
            };
            auto h21 = [&](double w) {
                auto it = cache21.find(w);
                if (it != cache21.end()) return it->second;
                double re = 0.5 * gbar(-w);
                double im = 0.0;
                if (opts.lamb_shift)
                    im = -0.5 * pv_transform(gbar, lo, hi, -w, opts.pv_tol, seeds,
                                             res.residual.pv_window());
                const Complex v(re, im);
                cache21[w] = v;
                return v;
            };
            Matrix Lam12(d, d), Lam21(d, d);
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    const double w = snap.at(L.energies[m] - L.energies[n]);
                    Lam12(m, n) = Adag(m, n) * h12(w);
                    Lam21(m, n) = A(m, n) * h21(w);
                }
            detail::add_dissipator_halfpair(K, Lam12, A, Adag);
            detail::add_dissipator_halfpair(K, Lam21, Adag, A);
        }
        L.generator += K;
        L.reservoir_parts.push_back(std::move(K));
    }
    return L;
}

struct SteadyReport {
    Matrix state; // original basis, trace one, Hermitian
    std::vector<double> matter_current; // into the supersystem, per reservoir
    std::vector<double> energy_current;
    double residual_norm = 0.0;
    std::vector<std::string> warnings;
};

struct SteadyOptions {
    // Full spectral diagnostics (kernel multiplicity, relaxation) are run up
    // to this Liouville dimension; beyond it a rank test on the generator
    // stands in for the multiplicity check.
    int spectrum_check_max_dim2 = 1296;
};

// Null-space steady state with trace normalization and sanity checks. The
// kernel vector is obtained from a trace-pinned least-squares solve, which
// stays well conditioned even for very weak residual coupling.
inline SteadyReport steady_state(const Liouvillian& L,
                                 const std::optional<OperatorMatrix>& number_op = {},
                                 const SteadyOptions& sopts = {}) {
    const int d = L.dim;
    const int d2 = d * d;

    if (d2 <= sopts.spectrum_check_max_dim2) {
        Eigen::ComplexEigenSolver<Matrix> es(L.generator);
        const Vector ev = es.eigenvalues();
        const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
        int kernel_idx = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d2; ++i)
            if (std::abs(ev[i]) < best) {
                best = std::abs(ev[i]);
                kernel_idx = i;
            }
        double second = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d2; ++i)
            if (i != kernel_idx) second = std::min(second, std::abs(ev[i]));
        if (second <= 1e-12 * scale)
            throw NonUniqueSteadyStateError("Liouvillian kernel is not one-dimensional");
        for (int i = 0; i < d2; ++i)
            if (i != kernel_idx && ev[i].real() > 1e-10 * scale)
                throw NotRelaxingError("Liouvillian has an eigenvalue with positive real part");
    } else {
        Eigen::ColPivHouseholderQR<Matrix> qr(L.generator);
        qr.setThreshold(1e-13);
        if (d2 - qr.rank() > 1)
            throw NonUniqueSteadyStateError("Liouvillian kernel is not one-dimensional");
    }

    // minimize ||L x|| subject to the trace functional pinned to one
    Matrix M(d2 + 1, d2);
    M.topRows(d2) = L.generator;
    const double weight = std::max(L.generator.norm() / d, 1e-300);
    M.row(d2).setZero();
    for (int k = 0; k < d; ++k) M(d2, k * d + k) = weight;
    Vector rhs = Vector::Zero(d2 + 1);
    rhs[d2] = weight;
    Vector x = M.colPivHouseholderQr().solve(rhs);

    Matrix rho = Eigen::Map<const Matrix>(x.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-12 * rho.norm())
        throw NonUniqueSteadyStateError("steady-state candidate is traceless");
    rho /= tr;

    Eigen::SelfAdjointEigenSolver<Matrix> esr(rho);
    if (esr.eigenvalues().minCoeff() < -1e-8)
        throw PositivityError("steady state violates positivity beyond tolerance: min eig = " +
                              std::to_string(esr.eigenvalues().minCoeff()));

    SteadyReport rep;
    rep.warnings = L.warnings;
    const Vector vec_rho = Eigen::Map<const Vector>(rho.data(), d2);
    rep.residual_norm = (L.generator * vec_rho).norm();

    Matrix N_eig;
    if (number_op)
        N_eig = L.eigenvectors.adjoint() * number_op->mat * L.eigenvectors;
    Matrix H_eig = L.energies.cast<Complex>().asDiagonal();
    for (const auto& K : L.reservoir_parts) {
        const Vector w = K * vec_rho;
        const Matrix M = Eigen::Map<const Matrix>(w.data(), d, d);
        rep.energy_current.push_back((H_eig * M).trace().real());
        rep.matter_current.push_back(number_op ? (N_eig * M).trace().real() : 0.0);
    }
    rep.state = L.eigenvectors * rho * L.eigenvectors.adjoint();
    return rep;
}

} // namespace rctk
