#pragma once

#include <cmath>

namespace rctk {

// Dawson integral D(x) = exp(-x^2) int_0^x exp(t^2) dt.
// Series for small |x|, nine-term asymptotic expansion beyond.
inline double dawson(double x) {
    const double ax = std::abs(x);
    if (ax < 4.5) {
        // Maclaurin-type series in the scaled variable; converges fast here.
        double term = x;
        double sum = x;
        const double x2 = x * x;
        for (int n = 1; n < 120; ++n) {
            term *= -2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        // sum = sum_k (-1)^k 2^k x^{2k+1} / (2k+1)!! ... already D(x)
        return sum;
    }
    // D(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    double dfact = 1.0;
    for (int k = 1; k <= 10; ++k) {
        dfact *= (2.0 * k - 1.0);
        term = dfact * std::pow(inv2x2, k);
        sum += term;
    }
    return sum / (2.0 * x);
}

// Imaginary error function erfi(x) = -i erf(ix) = 2/sqrt(pi) * exp(x^2) D(x).
inline double erfi(double x) {
    return 2.0 / std::sqrt(M_PI) * std::exp(x * x) * dawson(x);
}

// Fermi-Dirac occupation at inverse temperature beta and chemical potential mu.
inline double fermi_occupation(double omega, double beta, double mu) {
    const double z = beta * (omega - mu);
    if (z > 700.0) return 0.0;
    if (z < -700.0) return 1.0;
    return 1.0 / (std::exp(z) + 1.0);
}

// Bose-Einstein occupation n(omega) = 1/(exp(beta*omega)-1); negative for omega < 0.
inline double bose_occupation(double omega, double beta) {
    const double z = beta * omega;
    if (z > 700.0) return 0.0;
    if (z < -700.0) return -1.0;
    return 1.0 / std::expm1(z);
}

} // namespace rctk
