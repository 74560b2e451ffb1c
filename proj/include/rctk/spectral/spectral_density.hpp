#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/numerics/interp.hpp"
#include "rctk/numerics/quadrature.hpp"

namespace rctk {

// Statistics convention for a coupling density Gamma(omega):
//  - BosonicOdd: stored for omega >= 0; evaluation at omega < 0 returns
//    -Gamma(-omega) (odd analytic continuation to the full axis).
//  - FermionicFullAxis: defined on the full axis as stored, no continuation.
enum class Statistics { BosonicOdd, FermionicFullAxis };

inline const char* to_string(Statistics s) {
    return s == Statistics::BosonicOdd ? "bosonic" : "fermionic";
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Frequency-resolved coupling density. Either a closed-form family or a
// sampled grid with monotone cubic interpolation between samples.
class SpectralDensity {
public:
    SpectralDensity() = default;

    static SpectralDensity analytic(std::string family, std::vector<double> params,
                                    std::function<double(double)> fn, Statistics stat,
                                    double lo, double hi,
                                    std::vector<double> breakpoints = {},
                                    double pv_window = 0.0) {
        SpectralDensity d;
        d.stat_ = stat;
        d.lo_ = lo;
        d.hi_ = hi;
        d.family_ = std::move(family);
        d.params_ = std::move(params);
        d.fn_ = std::move(fn);
        d.breakpoints_ = std::move(breakpoints);
        d.pv_window_ = pv_window;
        if (stat == Statistics::BosonicOdd && lo < 0.0)
            throw ValidationError("bosonic densities are stored for omega >= 0 only");
        return d;
    }

    static SpectralDensity from_grid(std::vector<double> omega, std::vector<double> values,
                                     Statistics stat) {
        SpectralDensity d;
        d.stat_ = stat;
        if (omega.size() != values.size() || omega.size() < 2)
            throw ValidationError("grid density: need >= 2 samples, equal lengths");
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        for (double& v : values) {
            if (v < -1e-10 * vmax)
                throw ValidationError("grid density: negative sample value");
            if (v < 0.0) v = 0.0;
        }
        if (stat == Statistics::BosonicOdd && omega.front() < 0.0)
            throw ValidationError("bosonic grid densities are stored for omega >= 0 only");
        d.lo_ = omega.front();
        d.hi_ = omega.back();
        d.grid_ = std::make_shared<PchipInterpolant>(std::move(omega), std::move(values));
        return d;
    }

    Statistics statistics() const { return stat_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }
    bool is_grid() const { return grid_ != nullptr; }
    const PchipInterpolant& grid() const { return *grid_; }
    const std::string& family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // Characteristic half-width used to split PV integrals on unbounded
    // supports; 0 requests an automatic choice.
    double pv_window() const { return pv_window_; }

    // Density on its stored domain; zero outside.
    double raw(double w) const {
        if (w < lo_ || w > hi_) return 0.0;
        if (grid_) return std::max(0.0, (*grid_)(w));
        return fn_ ? fn_(w) : 0.0;
    }

    // Statistics-aware evaluation (odd continuation for BosonicOdd).
    double operator()(double w) const {
        if (stat_ == Statistics::BosonicOdd && w < 0.0) return -raw(-w);
        return raw(w);
    }

    // Reinterpret the stored function under different statistics. Dropping the
    // odd continuation is only meaningful for supports contained in w >= 0.
    SpectralDensity with_statistics(Statistics s) const {
        if (s == Statistics::BosonicOdd && lo_ < 0.0)
            throw ValidationError("cannot reinterpret a density with negative support "
                                  "as BosonicOdd");
        SpectralDensity d = *this;
        d.stat_ = s;
        return d;
    }

    SpectralDensity scaled(double alpha) const {
        if (alpha < 0.0) throw ValidationError("density scale factor must be >= 0");
        SpectralDensity d = *this;
        if (grid_) {
            std::vector<double> v = grid_->ordinates();
            for (double& y : v) y *= alpha;
            d.grid_ = std::make_shared<PchipInterpolant>(grid_->abscissae(), std::move(v));
        } else {
            auto base = fn_;
            d.fn_ = [base, alpha](double w) { return alpha * base(w); };
            d.family_ = family_.empty() ? family_ : family_ + "*scaled";
        }
        return d;
    }

private:
    Statistics stat_ = Statistics::BosonicOdd;
    double lo_ = 0.0, hi_ = 0.0;
    std::string family_;
    std::vector<double> params_;
    std::function<double(double)> fn_;
    std::vector<double> breakpoints_;
    double pv_window_ = 0.0;
    std::shared_ptr<const PchipInterpolant> grid_;
};

inline double eval(const SpectralDensity& d, double omega) { return d(omega); }

// ---------------------------------------------------------------------------
// Principal-value Hilbert transform  (1/pi) PV int Gamma(w')/(w'-w) dw'
// ---------------------------------------------------------------------------

namespace detail {

// Exact PV integral of a pchip interpolant against the Cauchy kernel:
//   PV int p(u)/(u - w) du   over the interpolant's domain.
// Each cubic segment integrates in closed form; the log terms are grouped by
// node so that the pair adjacent to an interior pole cancels exactly.
inline double pv_pchip(const PchipInterpolant& P, double w) {
    const auto& x = P.abscissae();
    const std::size_t nseg = x.size() - 1;
    const double span = x.back() - x.front();

    double poly = 0.0;
    std::vector<double> at_pole(nseg); // each segment's cubic evaluated at u = w
    for (std::size_t i = 0; i < nseg; ++i) {
        double c0, c1, c2, c3;
        P.segment_coeffs(i, c0, c1, c2, c3);
        const double a = x[i] - w;
        const double b = x[i + 1] - w;
        // Re-expand the cubic in powers of v = u - w.
        const double A0 = c0 + a * (-c1 + a * (c2 - a * c3)); // p_i(w)
        const double A1 = c1 - 2.0 * c2 * a + 3.0 * c3 * a * a;
        const double A2 = c2 - 3.0 * c3 * a;
        const double A3 = c3;
        const double h = b - a;
        poly += A1 * h + 0.5 * A2 * h * (b + a) + (A3 / 3.0) * h * (b * b + a * b + a * a);
        at_pole[i] = A0;
    }

    double logs = 0.0;
    const double tiny = 1e-14 * std::max(span, std::abs(w));
    for (std::size_t j = 0; j < x.size(); ++j) {
        double coef;
        if (j == 0)
            coef = -at_pole[0];
        else if (j == x.size() - 1)
            coef = at_pole[nseg - 1];
        else
            coef = at_pole[j - 1] - at_pole[j];
        const double dist = std::abs(x[j] - w);
        if (dist <= tiny) {
            const bool endpoint = (j == 0 || j == x.size() - 1);
            if (endpoint && std::abs(coef) > 1e-12 * std::max(1.0, std::abs(at_pole[0])))
                throw EndpointSingularityError(
                    "Hilbert transform evaluated at a rigid-cutoff endpoint");
            continue; // interior node hit: adjacent-cubic values cancel
        }
        logs += coef * std::log(dist);
    }
    return poly + logs;
}

// Magnitude scale of a density-like callable, probed at the pole, the feature
// breakpoints and a few generic points. Gives the subtraction quadrature an
// absolute-tolerance floor so that cancelling integrals can converge.
template <class F>
inline double callable_scale(const F& f, double lo, double hi, double w,
                             const std::vector<double>& breakpoints) {
    double s = std::abs(f(w));
    for (double b : breakpoints)
        if (b > lo && b < hi) s = std::max(s, std::abs(f(b)));
    for (double t : {0.21, 0.47, 0.73, 0.94})
        s = std::max(s, std::abs(f(lo + t * (hi - lo))));
    return s;
}

// PV integral of a callable against the Cauchy kernel over [lo, hi] with the
// pole inside: singularity subtraction plus the analytic log remainder.
template <class F>
inline double pv_callable_finite(const F& f, double lo, double hi, double w,
                                 const QuadOptions& opts,
                                 const std::vector<double>& breakpoints) {
    const double span = hi - lo;
    const double edge_tol = 1e-13 * std::max({span, std::abs(lo), std::abs(hi), 1.0});
    if (std::abs(w - lo) <= edge_tol || std::abs(w - hi) <= edge_tol)
        throw EndpointSingularityError("PV pole coincides with an integration endpoint");
    const double fw = f(w);
    auto sub = [&](double u) {
        const double du = u - w;
        if (std::abs(du) < 1e-140) return 0.0; // GK nodes never hit the pole exactly
        return (f(u) - fw) / du;
    };
    std::vector<double> bp = breakpoints;
    bp.push_back(w);
    QuadOptions o = opts;
    o.abs_tol = std::max(o.abs_tol,
                         0.25 * o.rel_tol * callable_scale(f, lo, hi, w, breakpoints));
    QuadResult r = integrate_adaptive(sub, lo, hi, o, bp);
    if (!r.converged)
        throw NonConvergentError("PV quadrature did not converge on finite support");
    if (w > lo && w < hi) return r.value + fw * std::log((hi - w) / (w - lo));
    return r.value + fw * std::log(std::abs((hi - w) / (lo - w)));
}

} // namespace detail

// PV transform of an arbitrary callable with support [lo, hi] (either side may
// be infinite). `window` sets the half-width of the subtraction region around
// the pole on unbounded supports.
template <class F>
inline double pv_transform(const F& f, double lo, double hi, double w, double tol,
                           const std::vector<double>& breakpoints = {},
                           double window = 0.0) {
    QuadOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = 0.0;
    if (std::isfinite(lo) && std::isfinite(hi))
        return detail::pv_callable_finite(f, lo, hi, w, opts, breakpoints) / M_PI;

    double W = window;
    if (W <= 0.0) {
        W = 1.0 + 0.5 * std::abs(w);
        for (double b : breakpoints) W = std::max(W, 0.5 * std::abs(b - w));
    }
    double left = std::isfinite(lo) ? std::max(lo, w - W) : w - W;
    double right = std::isfinite(hi) ? std::min(hi, w + W) : w + W;
    if (!(left < w && w < right)) {
        // Pole outside the clipped window: no principal value needed there.
        left = std::min(left, w - W);
        right = std::max(right, w + W);
        left = std::isfinite(lo) ? std::max(lo, left) : left;
        right = std::isfinite(hi) ? std::min(hi, right) : right;
    }

    QuadOptions tail_opts = opts;
    tail_opts.abs_tol = std::max(
        tail_opts.abs_tol,
        0.25 * opts.rel_tol * detail::callable_scale(f, left, right, w, breakpoints));

    double value = 0.0;
    if (left < right && left <= w && w <= right)
        value += detail::pv_callable_finite(f, left, right, w, opts, breakpoints);
    else if (left < right) {
        QuadResult r = integrate_adaptive([&](double u) { return f(u) / (u - w); }, left,
                                          right, tail_opts, breakpoints);
        if (!r.converged) throw NonConvergentError("PV window quadrature did not converge");
        value += r.value;
    }
    auto kern = [&](double u) { return f(u) / (u - w); };
    if (!std::isfinite(hi))
        value += integrate_to_inf(kern, right, tail_opts, breakpoints);
    else if (right < hi)
        value += integrate(kern, right, hi, tail_opts, breakpoints);
    if (!std::isfinite(lo))
        value += integrate_from_minus_inf(kern, left, tail_opts, breakpoints);
    else if (lo < left)
        value += integrate(kern, lo, left, tail_opts, breakpoints);
    return value / M_PI;
}

// (1/pi) PV int Gamma(w')/(w' - w) dw' over the statistics-appropriate domain:
// full axis with odd continuation for BosonicOdd, the stored support for
// FermionicFullAxis.
inline double hilbert_pv(const SpectralDensity& d, double w, double tol = 1e-6) {
    if (d.statistics() == Statistics::BosonicOdd) {
        if (d.is_grid()) {
            // Full-axis transform of the odd extension reduces to two exact
            // pchip transforms of the stored half: kernel 1/(u-w) + 1/(u+w).
            return (detail::pv_pchip(d.grid(), w) + detail::pv_pchip(d.grid(), -w)) / M_PI;
        }
        auto ext = [&](double u) { return d(u); };
        std::vector<double> bp = d.breakpoints();
        const std::size_t nb = bp.size();
        for (std::size_t i = 0; i < nb; ++i) bp.push_back(-bp[i]);
        const double hi = d.hi();
        const double lo = std::isfinite(hi) ? -hi : -kInf;
        return pv_transform(ext, lo, std::isfinite(hi) ? hi : kInf, w, tol, bp,
                            d.pv_window());
    }
    if (d.is_grid()) return detail::pv_pchip(d.grid(), w) / M_PI;
    auto f = [&](double u) { return d.raw(u); };
    return pv_transform(f, d.lo(), d.hi(), w, tol, d.breakpoints(), d.pv_window());
}

// ---------------------------------------------------------------------------
// Moments  int w^n Gamma(w) dw  over the statistics-appropriate domain
// ---------------------------------------------------------------------------

struct MomentOptions {
    bool principal_value = false;
    double tol = 1e-10;
};

namespace detail {

inline double moment_grid(const PchipInterpolant& P, int n) {
    // 5-point Gauss-Legendre per segment: exact for the cubic times w^n (n<=3).
    static const double xg[5] = {-0.906179845938663992798, -0.538469310105683091036, 0.0,
                                 0.538469310105683091036, 0.906179845938663992798};
    static const double wg[5] = {0.236926885056189087514, 0.478628670499366468041,
                                 0.568888888888888888889, 0.478628670499366468041,
                                 0.236926885056189087514};
    const auto& x = P.abscissae();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double c = 0.5 * (x[i] + x[i + 1]);
        const double h = 0.5 * (x[i + 1] - x[i]);
        double s = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double u = c + h * xg[k];
            s += wg[k] * std::pow(u, n) * P(u);
        }
        total += h * s;
    }
    return total;
}

} // namespace detail

inline double moment(const SpectralDensity& d, int n, const MomentOptions& opts = {}) {
    if (n != 0 && n != 1 && n != 3)
        throw ValidationError("moment order must be one of {0, 1, 3}");
    auto g = [&](double w) { return std::pow(w, n) * d.raw(w); };

    const bool bosonic = d.statistics() == Statistics::BosonicOdd;
    const double lo = bosonic ? std::max(0.0, d.lo()) : d.lo();
    const double hi = d.hi();

    if (d.is_grid()) {
        double m = detail::moment_grid(d.grid(), n);
        return m;
    }

    QuadOptions q;
    q.rel_tol = opts.tol;
    const auto& bp = d.breakpoints();

    const bool open_hi = !std::isfinite(hi);
    const bool open_lo = !std::isfinite(lo);
    double probe = 1.0;
    for (double b : bp) probe = std::max(probe, 2.0 * std::abs(b));

    if (!open_lo && !open_hi) return integrate(g, lo, hi, q, bp);

    const double p_hi = open_hi ? decay_exponent(g, probe, +1) : kInf;
    const double p_lo = open_lo ? decay_exponent(g, probe, -1) : kInf;

    if (p_hi > 1.05 && p_lo > 1.05) {
        // Absolutely convergent.
        if (open_lo && open_hi) {
            const double c = bp.empty() ? 0.0 : bp[bp.size() / 2];
            return integrate_full_axis(g, c, q, bp);
        }
        if (open_hi) return integrate_to_inf(g, lo, q, bp);
        return integrate_from_minus_inf(g, hi, q, bp);
    }

    // Possibly conditionally convergent: mirrored tails about the center.
    if (open_lo && open_hi) {
        const double c = bp.empty() ? 0.0 : bp[bp.size() / 2];
        auto mirrored = [&](double u) { return g(c + u) + g(c - u); };
        const double p_m = decay_exponent(mirrored, probe, +1);
        if (p_m > 1.05) {
            if (!opts.principal_value)
                throw NeedsPrincipalValueError(
                    "moment is conditionally convergent; set the principal_value flag");
            const double W = probe;
            double val = integrate(g, c - W, c + W, q, bp);
            val += integrate_to_inf(mirrored, W, q);
            return val;
        }
    }
    throw DivergentError("moment integrand does not decay fast enough to converge");
}

// ---------------------------------------------------------------------------

// Transform evaluated on the source density's own sample grid.
struct HilbertTransformResult {
    std::vector<double> omega;
    std::vector<double> values;
};

inline HilbertTransformResult hilbert_pv_grid(const SpectralDensity& d, double tol = 1e-6) {
    if (!d.is_grid())
        throw ValidationError("hilbert_pv_grid expects a grid density");
    HilbertTransformResult out;
    out.omega = d.grid().abscissae();
    out.values.reserve(out.omega.size());
    const std::size_t n = out.omega.size();
    for (std::size_t i = 0; i < n; ++i) {
        // boundary samples sit exactly on the rigid edge, where the transform
        // diverges logarithmically whenever the density does not vanish there
        if (i == 0 || i + 1 == n) {
            const double edge_val = d.grid().ordinates()[i];
            if (edge_val != 0.0) {
                out.values.push_back((i == 0 ? 1.0 : -1.0) *
                                     std::numeric_limits<double>::infinity());
                continue;
            }
        }
        out.values.push_back(hilbert_pv(d, out.omega[i], tol));
    }
    return out;
}

// Sample a density onto an n-point uniform grid over [lo, hi] with a half-cell
// offset from both ends (rigid-cutoff residuals diverge logarithmically in
// their denominators exactly at the endpoints).
inline SpectralDensity sample_to_grid(const SpectralDensity& d, std::size_t n,
                                      double lo, double hi) {
    if (n < 8) throw ValidationError("sample_to_grid: need at least 8 points");
    const double h = (hi - lo) / static_cast<double>(n);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = lo + h * (0.5 + static_cast<double>(i));
        y[i] = std::max(0.0, d.raw(x[i]));
    }
    return SpectralDensity::from_grid(std::move(x), std::move(y), d.statistics());
}

} // namespace rctk
