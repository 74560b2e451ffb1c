#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "rctk/errors.hpp"

namespace rctk {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 nodes).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        res_k += kWgk[j] * fsum;
        if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
    }
    result = res_k * h;
    err = std::abs((res_k - res_g) * h);
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

} // namespace detail

// Adaptive Gauss-Kronrod integration over [a, b] with optional interior
// breakpoints seeding the initial partition (sharp features, Fermi edges).
template <class F>
inline QuadResult integrate_adaptive(const F& f, double a, double b,
                                     const QuadOptions& opts = {},
                                     const std::vector<double>& breakpoints = {}) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<double> pts;
    pts.push_back(a);
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<detail::Segment> queue;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        detail::Segment s{pts[i], pts[i + 1], 0.0, 0.0};
        detail::gk15(f, s.a, s.b, s.value, s.error);
        total += s.value;
        total_err += s.error;
        queue.push(s);
    }

    int n = static_cast<int>(queue.size());
    while (n < opts.max_intervals) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        detail::Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at machine resolution; accept its estimate as-is.
            total_err -= worst.error;
            continue;
        }
        detail::Segment left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++n;
    }
    out.value = total;
    out.error = total_err;
    out.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return out;
}

template <class F>
inline double integrate(const F& f, double a, double b, const QuadOptions& opts = {},
                        const std::vector<double>& breakpoints = {}) {
    QuadResult r = integrate_adaptive(f, a, b, opts, breakpoints);
    if (!r.converged)
        throw NonConvergentError("adaptive quadrature did not reach tolerance on finite interval");
    return r.value;
}

// Integral over [a, inf) via the rational substitution w = a + t/(1-t).
template <class F>
inline double integrate_to_inf(const F& f, double a, const QuadOptions& opts = {},
                               const std::vector<double>& breakpoints = {}) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double w = a + t / om;
        return f(w) / (om * om);
    };
    std::vector<double> tb;
    for (double p : breakpoints)
        if (p > a) tb.push_back((p - a) / (1.0 + (p - a)));
    QuadResult r = integrate_adaptive(g, 0.0, 1.0, opts, tb);
    if (!r.converged)
        throw NonConvergentError("adaptive quadrature did not converge on semi-infinite interval");
    return r.value;
}

// Integral over (-inf, a].
template <class F>
inline double integrate_from_minus_inf(const F& f, double a, const QuadOptions& opts = {},
                                       const std::vector<double>& breakpoints = {}) {
    std::vector<double> mb;
    for (double p : breakpoints) mb.push_back(2.0 * a - p);
    return integrate_to_inf([&](double w) { return f(2.0 * a - w); }, a, opts, mb);
}

// Full-axis integral split at `center`.
template <class F>
inline double integrate_full_axis(const F& f, double center, const QuadOptions& opts = {},
                                  const std::vector<double>& breakpoints = {}) {
    return integrate_to_inf(f, center, opts, breakpoints) +
           integrate_from_minus_inf(f, center, opts, breakpoints);
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

// Estimate the power-law decay exponent p of |f| at large |w| (f ~ w^-p),
// probing geometrically spaced points on one side. Returns +inf when the
// samples are numerically zero.
template <class F>
inline double decay_exponent(const F& f, double start, int sign = +1) {
    const double s = std::max(std::abs(start), 1.0);
    double p_min = std::numeric_limits<double>::infinity();
    double prev = std::abs(f(sign * s));
    double w = s;
    bool any = false;
    for (int k = 0; k < 6; ++k) {
        w *= 2.0;
        const double cur = std::abs(f(sign * w));
        if (prev > 0.0 && cur > 0.0) {
            p_min = std::min(p_min, std::log(prev / cur) / std::log(2.0));
            any = true;
        }
        prev = cur;
    }
    if (!any) return std::numeric_limits<double>::infinity();
    return p_min;
}

} // namespace rctk
