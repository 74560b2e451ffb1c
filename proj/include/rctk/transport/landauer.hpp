#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rctk/errors.hpp"
#include "rctk/numerics/quadrature.hpp"
#include "rctk/numerics/special.hpp"

namespace rctk {

// Lorentzian lead of a single-electron transistor:
//   Gamma(w) = gamma * delta^2 / ((w - eps_center)^2 + delta^2)
struct LeadSpec {
    double gamma = 1.0;
    double delta = 0.1;
    double eps_center = 1.0;
    double beta = 1.0;
    double mu = 0.0;
};

// Noninteracting resonant level between two Lorentzian leads.
struct SetModel {
    double eps = 1.0;
    LeadSpec left, right;

    void validate() const {
        if (!(left.gamma > 0.0) || !(right.gamma > 0.0) || !(left.delta > 0.0) ||
            !(right.delta > 0.0))
            throw ValidationError("SetModel: lead gamma and delta must be positive");
        if (!(left.beta > 0.0) || !(right.beta > 0.0))
            throw ValidationError("SetModel: lead temperatures must be positive");
    }
};

inline double lead_density(const LeadSpec& l, double w) {
    const double x = w - l.eps_center;
    return l.gamma * l.delta * l.delta / (x * x + l.delta * l.delta);
}

// Real part of the retarded self-energy, closed form for Lorentzian leads:
//   Lambda(w) = sum_a (gamma_a delta_a / 2) (w - eps_a) / ((w - eps_a)^2 + delta_a^2)
inline double level_shift(const SetModel& m, double w) {
    double s = 0.0;
    for (const LeadSpec* l : {&m.left, &m.right}) {
        const double x = w - l->eps_center;
        s += 0.5 * l->gamma * l->delta * x / (x * x + l->delta * l->delta);
    }
    return s;
}

// Single-channel transmission function.
inline double transmission(const SetModel& m, double w) {
    const double gl = lead_density(m.left, w);
    const double gr = lead_density(m.right, w);
    const double de = w - m.eps - level_shift(m, w);
    const double half = 0.5 * (gl + gr);
    return gl * gr / (de * de + half * half);
}

struct TransportResult {
    double IM = 0.0; // matter current, positive left -> right
    double IE = 0.0; // energy current, positive left -> right
    double P = 0.0;  // chemical work rate extracted
    double QL = 0.0; // heat entering the system from the left lead
    double QR = 0.0; // heat entering the system from the right lead
};

namespace detail {

// Real roots of w - eps - Lambda(w) = 0 (one or three for strong coupling).
inline std::vector<double> resonance_roots(const SetModel& m) {
    const double hw = std::sqrt(0.5 * (m.left.gamma * m.left.delta +
                                       m.right.gamma * m.right.delta));
    const double lo = std::min({m.eps, m.left.eps_center, m.right.eps_center}) -
                      3.0 * hw - 3.0 * std::max(m.left.delta, m.right.delta);
    const double hi = std::max({m.eps, m.left.eps_center, m.right.eps_center}) +
                      3.0 * hw + 3.0 * std::max(m.left.delta, m.right.delta);
    auto g = [&](double w) { return w - m.eps - level_shift(m, w); };
    std::vector<double> roots;
    const int n = 4000;
    double prev_w = lo, prev_g = g(lo);
    for (int i = 1; i <= n; ++i) {
        const double w = lo + (hi - lo) * i / n;
        const double gw = g(w);
        if (prev_g == 0.0) roots.push_back(prev_w);
        if (prev_g * gw < 0.0) {
            double a = prev_w, b = w;
            for (int it = 0; it < 80; ++it) {
                const double c = 0.5 * (a + b);
                if (g(a) * g(c) <= 0.0)
                    b = c;
                else
                    a = c;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_w = w;
        prev_g = gw;
    }
    return roots;
}

} // namespace detail

// Landauer currents I_M = (1/2pi) int T (f_L - f_R), I_E with weight w.
// The integration window unites the Fermi windows of both leads with the
// lead-resonance windows; sharp transmission features seed the partition.
inline TransportResult currents(const SetModel& m, double tol = 1e-8) {
    m.validate();
    const double hwl = std::sqrt(m.left.gamma * m.left.delta);
    const double hwr = std::sqrt(m.right.gamma * m.right.delta);
    double lo = std::min(m.left.mu - 40.0 / m.left.beta, m.right.mu - 40.0 / m.right.beta);
    double hi = std::max(m.left.mu + 40.0 / m.left.beta, m.right.mu + 40.0 / m.right.beta);
    lo = std::min({lo, m.left.eps_center - 10.0 * hwl, m.right.eps_center - 10.0 * hwr});
    hi = std::max({hi, m.left.eps_center + 10.0 * hwl, m.right.eps_center + 10.0 * hwr});

    std::vector<double> seeds = {m.eps,
                                 m.left.mu,
                                 m.right.mu,
                                 m.left.eps_center,
                                 m.right.eps_center,
                                 m.left.eps_center - m.left.delta,
                                 m.left.eps_center + m.left.delta,
                                 m.right.eps_center - m.right.delta,
                                 m.right.eps_center + m.right.delta};
    for (double r : detail::resonance_roots(m)) {
        const double pad = std::max({m.left.delta, m.right.delta});
        seeds.push_back(r - 3.0 * pad);
        seeds.push_back(r - pad);
        seeds.push_back(r);
        seeds.push_back(r + pad);
        seeds.push_back(r + 3.0 * pad);
    }
    for (double k : {1.0, 5.0, 20.0}) {
        seeds.push_back(m.left.mu - k / m.left.beta);
        seeds.push_back(m.left.mu + k / m.left.beta);
        seeds.push_back(m.right.mu - k / m.right.beta);
        seeds.push_back(m.right.mu + k / m.right.beta);
    }

    auto window = [&](double w) {
        return transmission(m, w) * (fermi_occupation(w, m.left.beta, m.left.mu) -
                                     fermi_occupation(w, m.right.beta, m.right.mu));
    };
    QuadOptions opts;
    opts.rel_tol = tol;
    opts.max_intervals = 8000;
    QuadResult rm = integrate_adaptive(window, lo, hi, opts, seeds);
    QuadResult re = integrate_adaptive([&](double w) { return w * window(w); }, lo, hi,
                                       opts, seeds);
    // allow an absolute floor at equilibrium where both integrals vanish
    const double floor = 1e-14 * std::max(1.0, std::abs(hi - lo));
    if (!rm.converged && rm.error > floor)
        throw NonConvergentError("Landauer matter-current quadrature did not converge");
    if (!re.converged && re.error > floor * std::max(std::abs(lo), std::abs(hi)))
        throw NonConvergentError("Landauer energy-current quadrature did not converge");

    TransportResult t;
    t.IM = rm.value / (2.0 * M_PI);
    t.IE = re.value / (2.0 * M_PI);
    t.P = -(m.left.mu - m.right.mu) * t.IM;
    t.QL = t.IE - m.left.mu * t.IM;
    t.QR = -(t.IE - m.right.mu * t.IM);
    return t;
}

} // namespace rctk
