#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "rctk/errors.hpp"

namespace rctk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Composite Hilbert space with labelled tensor factors. Factor 0 is the most
// significant index (Kronecker convention).
struct HilbertSpace {
    struct Factor {
        std::string label;
        int dim;
    };
    std::vector<Factor> factors;
    static constexpr int kDimCap = 4096;

    int total_dim() const {
        int d = 1;
        for (const auto& f : factors) d *= f.dim;
        return d;
    }

    int factor_index(const std::string& label) const {
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (factors[i].label == label) return static_cast<int>(i);
        throw UnknownLabelError("no tensor factor labelled '" + label + "'");
    }

    void validate() const {
        for (std::size_t i = 0; i < factors.size(); ++i)
            for (std::size_t j = i + 1; j < factors.size(); ++j)
                if (factors[i].label == factors[j].label)
                    throw ValidationError("duplicate factor label '" + factors[i].label + "'");
        if (total_dim() > kDimCap)
            throw DimensionCapError("composite dimension exceeds cap of " +
                                    std::to_string(kDimCap));
    }
};

struct OperatorMatrix {
    HilbertSpace space;
    Matrix mat;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Lift a single-factor operator to the full space.
inline Matrix embed(const HilbertSpace& space, const std::string& label, const Matrix& op) {
    const int idx = space.factor_index(label);
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t f = 0; f < space.factors.size(); ++f) {
        const int d = space.factors[f].dim;
        if (static_cast<int>(f) == idx) {
            if (op.rows() != d || op.cols() != d)
                throw ValidationError("embed: operator dimension mismatch on '" + label + "'");
            out = kron(out, op);
        } else {
            out = kron(out, Matrix::Identity(d, d));
        }
    }
    return out;
}

// ---- elementary operators --------------------------------------------------

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// Truncated bosonic annihilation operator on an (n_max+1)-dimensional ladder.
inline Matrix boson_destroy(int n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int k = 1; k <= n_max; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

// Fermionic annihilation operators with Jordan-Wigner strings over the listed
// two-dimensional factors, in the given order. Occupation basis |0>, |1>.
inline std::vector<Matrix> fermion_destroy_all(const HilbertSpace& space,
                                               const std::vector<std::string>& jw_order) {
    Matrix f(2, 2), z(2, 2);
    f << 0, 1, 0, 0; // <0|f|1> = 1
    z << 1, 0, 0, -1;
    std::vector<Matrix> out;
    for (std::size_t j = 0; j < jw_order.size(); ++j) {
        Matrix op = Matrix::Identity(1, 1);
        for (std::size_t f_idx = 0; f_idx < space.factors.size(); ++f_idx) {
            const std::string& lbl = space.factors[f_idx].label;
            std::size_t pos = jw_order.size();
            for (std::size_t k = 0; k < jw_order.size(); ++k)
                if (jw_order[k] == lbl) pos = k;
            Matrix local;
            if (pos == j)
                local = f;
            else if (pos < j)
                local = z;
            else
                local = Matrix::Identity(space.factors[f_idx].dim, space.factors[f_idx].dim);
            op = kron(op, local);
        }
        out.push_back(op);
    }
    return out;
}

// ---- states ----------------------------------------------------------------

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

struct GibbsState {
    HilbertSpace space;
    double beta;
    Matrix density;
};

// e^{-beta H}/Z via eigendecomposition with a ground-energy shift.
// beta = inf returns the (degenerate-safe) ground-space projector.
inline GibbsState gibbs(const OperatorMatrix& H, double beta) {
    if (!is_hermitian(H.mat)) throw ValidationError("gibbs: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
    const Eigen::VectorXd E = es.eigenvalues();
    const Matrix& Q = es.eigenvectors();
    const double e0 = E.minCoeff();
    Eigen::VectorXd w(E.size());
    if (std::isinf(beta)) {
        const double window = 1e-12 * std::max(1.0, std::abs(e0));
        for (Eigen::Index i = 0; i < E.size(); ++i) w[i] = (E[i] - e0 <= window) ? 1.0 : 0.0;
    } else {
        for (Eigen::Index i = 0; i < E.size(); ++i) w[i] = std::exp(-beta * (E[i] - e0));
    }
    w /= w.sum();
    GibbsState g;
    g.space = H.space;
    g.beta = beta;
    g.density = Q * w.asDiagonal() * Q.adjoint();
    return g;
}

// Trace-preserving reduction onto the kept factors (order preserved).
inline OperatorMatrix partial_trace(const OperatorMatrix& rho,
                                    const std::vector<std::string>& keep) {
    const auto& factors = rho.space.factors;
    const std::size_t nf = factors.size();
    std::vector<bool> keep_mask(nf, false);
    for (const auto& k : keep) keep_mask[rho.space.factor_index(k)] = true;

    std::vector<int> dims(nf);
    for (std::size_t i = 0; i < nf; ++i) dims[i] = factors[i].dim;

    int dk = 1, dt = 1;
    for (std::size_t i = 0; i < nf; ++i) (keep_mask[i] ? dk : dt) *= dims[i];

    // strides of each factor in the full index
    std::vector<int> stride(nf, 1);
    for (int i = static_cast<int>(nf) - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    // enumerate kept and traced multi-indices as full-index offsets
    auto offsets = [&](bool kept) {
        std::vector<int> offs{0};
        for (std::size_t f = 0; f < nf; ++f) {
            if (keep_mask[f] != kept) continue;
            std::vector<int> next;
            next.reserve(offs.size() * dims[f]);
            for (int base : offs)
                for (int q = 0; q < dims[f]; ++q) next.push_back(base + q * stride[f]);
            offs.swap(next);
        }
        return offs;
    };
    const std::vector<int> keep_offs = offsets(true);
    const std::vector<int> trace_offs = offsets(false);

    OperatorMatrix out;
    for (std::size_t i = 0; i < nf; ++i)
        if (keep_mask[i]) out.space.factors.push_back(factors[i]);
    out.mat = Matrix::Zero(dk, dk);
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b) {
            Complex s = 0.0;
            for (int t : trace_offs) s += rho.mat(keep_offs[a] + t, keep_offs[b] + t);
            out.mat(a, b) = s;
        }
    return out;
}

inline double expectation(const Matrix& op, const Matrix& rho) {
    return (op * rho).trace().real();
}

// Trace distance (1/2)||rho - sigma||_1 for Hermitian arguments.
inline double trace_distance(const Matrix& rho, const Matrix& sigma) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho - sigma);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace rctk
