#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rctk/errors.hpp"

namespace rctk {

// Monotone cubic (PCHIP, Fritsch-Carlson) interpolant. Shape-preserving, so a
// nonnegative table stays nonnegative between samples.
class PchipInterpolant {
public:
    PchipInterpolant() = default;

    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw ValidationError("pchip: need at least two samples with matching lengths");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i] < x_[i + 1]))
                throw ValidationError("pchip: abscissae must be strictly increasing");
        d_.assign(n, 0.0);
        compute_derivatives();
    }

    double operator()(double u) const {
        const std::size_t i = segment(u);
        const double h = x_[i + 1] - x_[i];
        const double s = (u - x_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    // Coefficients of the local cubic p(u) = c0 + c1 t + c2 t^2 + c3 t^3,
    // t = u - x[i], on segment i.
    void segment_coeffs(std::size_t i, double& c0, double& c1, double& c2, double& c3) const {
        const double h = x_[i + 1] - x_[i];
        const double slope = (y_[i + 1] - y_[i]) / h;
        c0 = y_[i];
        c1 = d_[i];
        c2 = (3.0 * slope - 2.0 * d_[i] - d_[i + 1]) / h;
        c3 = (d_[i] + d_[i + 1] - 2.0 * slope) / (h * h);
    }

    std::size_t segment(double u) const {
        if (u <= x_.front()) return 0;
        if (u >= x_.back()) return x_.size() - 2;
        const auto it = std::upper_bound(x_.begin(), x_.end(), u);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    const std::vector<double>& abscissae() const { return x_; }
    const std::vector<double>& ordinates() const { return y_; }
    std::size_t size() const { return x_.size(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    void compute_derivatives() {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d_[0] = edge_derivative(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = edge_derivative(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    // Three-point one-sided estimate clamped for monotonicity.
    static double edge_derivative(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0)
            d = 0.0;
        else if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0))
            d = 3.0 * del0;
        return d;
    }

    std::vector<double> x_, y_;
    std::vector<double> d_;
};

} // namespace rctk
