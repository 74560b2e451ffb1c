#include <catch2/catch.hpp>

#include <cmath>

#include "rctk/spectral/catalog.hpp"
#include "rctk/transport/landauer.hpp"

using namespace rctk;

namespace {

SetModel fig3_model(double V, double Gamma, double eps = 1.0, double delta = 0.01) {
    SetModel m;
    m.eps = eps;
    m.left = {Gamma, delta, eps, 2.0 / eps, +0.5 * V};
    m.right = {Gamma, delta, eps, 1.0 / eps, -0.5 * V};
    return m;
}

} // namespace

TEST_CASE("transmission is a proper single-channel probability") {
    for (double Gamma : {0.05, 1.0, 100.0, 5000.0}) {
        SetModel m = fig3_model(0.5, Gamma);
        for (int i = 0; i <= 400; ++i) {
            const double w = -20.0 + 40.0 * i / 400.0;
            const double T = transmission(m, w);
            CHECK(T >= 0.0);
            CHECK(T <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("symmetric leads transmit perfectly at the shifted resonance") {
    SetModel m = fig3_model(0.3, 50.0);
    // w = eps is a root of w - eps - Lambda(w) for symmetric leads centred at eps
    CHECK(transmission(m, m.eps) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form level shift equals the numerical Hilbert transform") {
    SetModel m = fig3_model(0.8, 3.0);
    auto dl = make_density("lorentzian", {m.left.gamma, m.left.delta, m.left.eps_center});
    auto dr = make_density("lorentzian", {m.right.gamma, m.right.delta, m.right.eps_center});
    for (double w : {0.2, 0.9, 1.05, 2.0}) {
        const double viaspec = -0.5 * (hilbert_pv(dl, w, 1e-9) + hilbert_pv(dr, w, 1e-9));
        CHECK(level_shift(m, w) == Approx(viaspec).epsilon(1e-6).margin(1e-12));
    }
}

TEST_CASE("equilibrium leads carry no current") {
    SetModel m = fig3_model(0.0, 1.0);
    m.left.beta = m.right.beta = 1.3;
    TransportResult t = currents(m, 1e-10);
    CHECK(std::abs(t.IM) < 1e-12);
    CHECK(std::abs(t.IE) < 1e-12);
}

TEST_CASE("transport identities hold by construction") {
    SetModel m = fig3_model(0.4, 2.0);
    TransportResult t = currents(m);
    CHECK(t.P == Approx(-(m.left.mu - m.right.mu) * t.IM));
    CHECK(t.QL == Approx(t.IE - m.left.mu * t.IM));
    CHECK(t.QR == Approx(-(t.IE - m.right.mu * t.IM)));
}

TEST_CASE("tight coupling in the weak-coupling limit") {
    // At Gamma -> 0 only the bare resonance conducts: I_E ~ eps I_M, the
    // engine stalls at V* = 2/3 where eta hits Carnot.
    SECTION("current ratio") {
        SetModel m = fig3_model(0.3, 0.01);
        TransportResult t = currents(m, 1e-10);
        CHECK(t.IE / t.IM == Approx(m.eps).epsilon(0.01));
    }
    SECTION("efficiency approaches V/(eps + V/2)") {
        for (double V : {0.2, 0.4, 0.6}) {
            SetModel m = fig3_model(V, 0.01);
            TransportResult t = currents(m, 1e-10);
            CHECK(t.P > 0.0);
            CHECK(t.P / t.QR == Approx(V / (1.0 + 0.5 * V)).epsilon(0.02));
        }
    }
    SECTION("direct engine-fridge transition at the stall voltage") {
        SetModel before = fig3_model(0.60, 0.01);
        SetModel after = fig3_model(0.75, 0.01);
        CHECK(currents(before).P > 0.0);
        TransportResult ta = currents(after);
        CHECK(ta.P < 0.0);
        CHECK(ta.QL > 0.0);
    }
}

TEST_CASE("ultrastrong coupling revives cooling") {
    SetModel m = fig3_model(1.0, 5000.0);
    TransportResult t = currents(m);
    CHECK(t.QL > 0.0);
    CHECK(t.P < 0.0);
}

TEST_CASE("quadrature tolerance is honoured") {
    SetModel m = fig3_model(0.7, 10.0);
    TransportResult a = currents(m, 1e-6);
    TransportResult b = currents(m, 5e-7);
    CHECK(std::abs(a.IM - b.IM) < 1e-6 * std::max(1.0, std::abs(a.IM)));
    CHECK(std::abs(a.IE - b.IE) < 1e-6 * std::max(1.0, std::abs(a.IE)));
}

TEST_CASE("carnot bounds on a coarse sweep") {
    const double TL = 0.5, TR = 1.0;
    const double eta_ca = 1.0 - TL / TR;
    const double cop_ca = TL / (TR - TL);
    for (double Gamma : {0.05, 0.6, 7.0, 90.0, 3000.0}) {
        for (double V : {0.1, 0.5, 0.8, 1.2, 1.8}) {
            TransportResult t = currents(fig3_model(V, Gamma));
            const double Si = -t.QL / TL - t.QR / TR;
            CHECK(Si >= -1e-10);
            if (t.P > 0.0 && t.QR > 0.0) CHECK(t.P / t.QR <= eta_ca + 1e-8);
            if (t.QL > 0.0 && t.P < 0.0) CHECK(t.QL / (-t.P) <= cop_ca + 1e-8);
        }
    }
}
