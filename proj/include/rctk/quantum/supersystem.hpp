#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/quantum/hilbert_space.hpp"

namespace rctk {

enum class SystemCoupling { SigmaX, SigmaZ, ProjectorUp };

inline Matrix system_coupling_matrix(SystemCoupling c) {
    switch (c) {
        case SystemCoupling::SigmaX: return pauli_x();
        case SystemCoupling::SigmaZ: return pauli_z();
        case SystemCoupling::ProjectorUp: return 0.5 * (pauli_z() + Matrix::Identity(2, 2));
    }
    throw ValidationError("unknown system coupling choice");
}

// Two-level system plus one bosonic reaction coordinate:
//   H = (mu/2) sigma_z + [lambda^2/Omega S^2] + lambda S (b + b^dag) + Omega b^dag b
// The completed-square term is optional; with it the spectrum stays bounded
// from below for every lambda.
struct TlsRcSpec {
    double mu = 1.0;
    double lambda = 0.0;
    double omega = 1.0;
    SystemCoupling s_choice = SystemCoupling::SigmaX;
    int n_max = 12;
    bool include_renormalization = false;
};

// Single dot tunnel-coupled to two fermionic reaction coordinates
// (triple quantum dot), Jordan-Wigner order (d, dL, dR).
struct TripleDotSpec {
    double eps = 1.0;
    double lambda_L = 0.0, lambda_R = 0.0;
    double eps_L = 1.0, eps_R = 1.0;
};

struct Supersystem {
    HilbertSpace space;
    OperatorMatrix hamiltonian;
    std::vector<OperatorMatrix> couplings; // residual-reservoir attachment operators
    std::optional<OperatorMatrix> number_op;
};

inline Supersystem build_supersystem(const TlsRcSpec& s) {
    if (s.n_max < 2) throw ValidationError("TlsRc: n_max must be >= 2");
    if (s.lambda < 0.0 || !(s.omega > 0.0))
        throw ValidationError("TlsRc: require lambda >= 0 and omega > 0");
    Supersystem sys;
    sys.space.factors = {{"tls", 2}, {"rc", s.n_max + 1}};
    sys.space.validate();
    const Matrix a = boson_destroy(s.n_max);
    const Matrix x = a + a.adjoint().eval();
    const Matrix S = system_coupling_matrix(s.s_choice);
    Matrix H = 0.5 * s.mu * embed(sys.space, "tls", pauli_z()) +
               s.lambda * embed(sys.space, "tls", S) * embed(sys.space, "rc", x) +
               s.omega * embed(sys.space, "rc", (a.adjoint() * a).eval());
    if (s.include_renormalization)
        H += (s.lambda * s.lambda / s.omega) * embed(sys.space, "tls", (S * S).eval());
    sys.hamiltonian = {sys.space, H};
    sys.couplings.push_back({sys.space, embed(sys.space, "rc", x)});
    return sys;
}

inline Supersystem build_supersystem(const TripleDotSpec& s) {
    Supersystem sys;
    sys.space.factors = {{"d", 2}, {"dL", 2}, {"dR", 2}};
    sys.space.validate();
    const auto c = fermion_destroy_all(sys.space, {"d", "dL", "dR"});
    const Matrix &d = c[0], &dL = c[1], &dR = c[2];
    Matrix H = s.eps * (d.adjoint() * d) + s.eps_L * (dL.adjoint() * dL) +
               s.eps_R * (dR.adjoint() * dR) +
               s.lambda_L * (d * dL.adjoint() + dL * d.adjoint()) +
               s.lambda_R * (d * dR.adjoint() + dR * d.adjoint());
    sys.hamiltonian = {sys.space, H};
    sys.couplings.push_back({sys.space, dL});
    sys.couplings.push_back({sys.space, dR});
    sys.number_op = OperatorMatrix{
        sys.space, (d.adjoint() * d + dL.adjoint() * dL + dR.adjoint() * dR).eval()};
    return sys;
}

// Smallest oscillator truncation whose Gibbs populations are converged:
// thermal tail mass below 1e-8 at the coldest beta, and the bottom half of
// the spectrum stable to 1e-6 under a 50% truncation increase.
inline int choose_nmax(TlsRcSpec spec, double beta_cold) {
    const double disp = spec.omega > 0.0 ? (spec.lambda / spec.omega) : 0.0;
    int n = std::max({8, static_cast<int>(std::ceil(19.0 / (beta_cold * spec.omega))),
                      static_cast<int>(std::ceil(8.0 * disp * disp))});
    for (int iter = 0; iter < 12; ++iter) {
        const int n_big = n + (n + 1) / 2;
        spec.n_max = n;
        Supersystem small = build_supersystem(spec);
        spec.n_max = n_big;
        Supersystem big = build_supersystem(spec);

        Eigen::SelfAdjointEigenSolver<Matrix> es_s(small.hamiltonian.mat);
        Eigen::SelfAdjointEigenSolver<Matrix> es_b(big.hamiltonian.mat);
        auto pops = [&](const Eigen::VectorXd& E) {
            Eigen::VectorXd p(E.size());
            const double e0 = E.minCoeff();
            for (Eigen::Index i = 0; i < E.size(); ++i)
                p[i] = std::exp(-beta_cold * (E[i] - e0));
            return Eigen::VectorXd(p / p.sum());
        };
        const Eigen::VectorXd ps = pops(es_s.eigenvalues());
        const Eigen::VectorXd pb = pops(es_b.eigenvalues());
        double max_diff = 0.0;
        for (Eigen::Index i = 0; i < ps.size() / 2; ++i)
            max_diff = std::max(max_diff, std::abs(ps[i] - pb[i]));
        // thermal mass on the top oscillator level
        GibbsState g = gibbs(small.hamiltonian, beta_cold);
        double tail = 0.0;
        const int dim_rc = n + 1;
        for (int t = 0; t < 2; ++t) {
            const int idx = t * dim_rc + n; // |tls=t, rc=n_max>
            tail += g.density(idx, idx).real();
        }
        if (max_diff < 1e-6 && tail < 1e-8) return n;
        n = n_big;
        if (2 * (n + 1) > HilbertSpace::kDimCap)
            throw TruncationError("TlsRc truncation did not converge under the dimension cap");
    }
    throw TruncationError("TlsRc truncation did not converge");
}

// Reduced supersystem Gibbs state of the system factor: the O(lambda_residual)
// approximation to the mean-force Gibbs state.
inline OperatorMatrix mean_force_state(const TlsRcSpec& spec, double beta) {
    Supersystem sys = build_supersystem(spec);
    GibbsState g = gibbs(sys.hamiltonian, beta);
    return partial_trace({sys.space, g.density}, {"tls"});
}

// Fermionic analogue: dot plus one fermionic RC, grand-canonical at (beta, mu).
struct DotRcSpec {
    double eps = 1.0;    // dot level
    double lambda = 0.0; // dot-RC tunneling
    double eps_rc = 1.0; // RC level
};

inline OperatorMatrix mean_force_state(const DotRcSpec& s, double beta, double mu) {
    HilbertSpace space;
    space.factors = {{"d", 2}, {"rc", 2}};
    space.validate();
    const auto c = fermion_destroy_all(space, {"d", "rc"});
    const Matrix &d = c[0], &f = c[1];
    const Matrix N = d.adjoint() * d + f.adjoint() * f;
    Matrix H = s.eps * (d.adjoint() * d) + s.eps_rc * (f.adjoint() * f) +
               s.lambda * (d * f.adjoint() + f * d.adjoint());
    OperatorMatrix K{space, H - mu * N};
    GibbsState g = gibbs(K, beta);
    return partial_trace({space, g.density}, {"d"});
}

} // namespace rctk
