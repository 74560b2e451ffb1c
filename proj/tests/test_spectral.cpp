#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "rctk/spectral/catalog.hpp"
#include "rctk/spectral/spectral_density.hpp"

using namespace rctk;

TEST_CASE("adaptive quadrature sanity") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == Approx(1.0 / 3.0));
    CHECK(integrate_full_axis([](double x) { return std::exp(-x * x); }, 0.0) ==
          Approx(std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(integrate_to_inf([](double x) { return std::exp(-2.0 * x); }, 0.0) ==
          Approx(0.5).epsilon(1e-10));
}

TEST_CASE("eval honors statistics and support") {
    SECTION("lorentzian peak value equals gamma") {
        auto d = make_density("lorentzian", {2.0, 0.5, 1.0});
        CHECK(eval(d, 1.0) == Approx(2.0));
    }
    SECTION("bosonic odd continuation") {
        auto d = make_density("linear_rigid", {1.0, 1.0});
        CHECK(eval(d, -0.5) == Approx(-0.5));
        CHECK(eval(d, 0.5) == Approx(0.5));
    }
    SECTION("zero outside a rigid support") {
        auto d = make_density("semicircle", {1.0, 1.0, 3.0});
        CHECK(eval(d, 4.5) == 0.0);
        CHECK(eval(d, 1.2) == 0.0);
        auto lin = make_density("linear_rigid", {1.0, 1.0});
        CHECK(eval(lin, 1.5) == 0.0);
    }
}

TEST_CASE("hilbert_pv against closed forms") {
    SECTION("zero density transforms to zero") {
        SpectralDensity z = SpectralDensity::from_grid({0.1, 0.5, 1.0, 1.5, 2.0},
                                                       {0, 0, 0, 0, 0},
                                                       Statistics::FermionicFullAxis);
        CHECK(hilbert_pv(z, 0.7) == Approx(0.0).margin(1e-14));
    }
    SECTION("flat box matches the log antiderivative") {
        // (1/pi) PV int_a^b G/(w'-w) dw' = (G/pi) ln((b-w)/(w-a))
        const double G = 1.3, d = 0.8, e = 2.0;
        auto box = make_density("box", {G, d, e});
        for (double w : {1.3, 1.9, 2.5}) {
            const double expect = G / M_PI * std::log((e + d - w) / (w - (e - d)));
            CHECK(hilbert_pv(box, w, 1e-9) == Approx(expect).epsilon(1e-8));
        }
    }
    SECTION("lorentzian matches -G d (w-e)/((w-e)^2+d^2)") {
        const double G = 1.7, d = 0.6, e = 1.1;
        auto lor = make_density("lorentzian", {G, d, e});
        for (double w : {-1.0, 0.9, 1.1, 2.5, 8.0}) {
            const double x = w - e;
            const double expect = -G * d * x / (x * x + d * d);
            CHECK(hilbert_pv(lor, w, 1e-9) == Approx(expect).epsilon(1e-7).margin(1e-10));
        }
    }
    SECTION("semicircle transform is linear inside the support") {
        const double G = 2.0, d = 1.5, e = 3.0;
        auto sc = make_density("semicircle", {G, d, e});
        for (double w : {2.0, 3.0, 3.9}) {
            CHECK(hilbert_pv(sc, w, 1e-9) ==
                  Approx(-G * (w - e) / d).epsilon(1e-7).margin(1e-9));
        }
    }
    SECTION("poles outside a bounded support need no principal value") {
        const double G = 1.3, d = 0.8, e = 2.0;
        auto box = make_density("box", {G, d, e});
        for (double w : {0.4, 3.4, 5.0}) {
            const double expect = G / M_PI * std::log(std::abs((e + d - w) / (e - d - w)));
            CHECK(hilbert_pv(box, w, 1e-9) == Approx(expect).epsilon(1e-8));
            auto g = sample_to_grid(box, 1500, e - d, e + d);
            CHECK(hilbert_pv(g, w) == Approx(expect).epsilon(2e-3));
        }
    }
    SECTION("endpoint evaluation raises EndpointSingularity") {
        auto box = make_density("box", {1.0, 0.5, 2.0});
        CHECK_THROWS_AS(hilbert_pv(box, 2.5), EndpointSingularityError);
    }
}

TEST_CASE("hilbert_pv properties") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> u(0.1, 1.0);

    SECTION("linearity on random grid densities") {
        // random smooth bump mixtures, sampled densely enough that the
        // monotone-cubic interpolation error sits below the tolerance
        auto bump_density = [&](int nb) {
            std::vector<double> c(nb), s(nb), a0(nb);
            for (int k = 0; k < nb; ++k) {
                c[k] = 1.0 + 2.0 * u(rng);
                s[k] = 0.3 + 0.5 * u(rng);
                a0[k] = u(rng);
            }
            const std::size_t n = 800;
            std::vector<double> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = 0.5 + 3.0 * i / (n - 1.0);
                double v = 0.0;
                for (int k = 0; k < nb; ++k)
                    v += a0[k] * std::exp(-(x[i] - c[k]) * (x[i] - c[k]) / (s[k] * s[k]));
                y[i] = v;
            }
            return std::pair<std::vector<double>, std::vector<double>>(x, y);
        };
        auto [x, y1] = bump_density(3);
        auto [x2, y2] = bump_density(2);
        (void)x2;
        const double a = 0.7, b = 1.9;
        std::vector<double> yc(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) yc[i] = a * y1[i] + b * y2[i];
        auto d1 = SpectralDensity::from_grid(x, y1, Statistics::FermionicFullAxis);
        auto d2 = SpectralDensity::from_grid(x, y2, Statistics::FermionicFullAxis);
        auto dc = SpectralDensity::from_grid(x, yc, Statistics::FermionicFullAxis);
        for (double w : {1.0, 2.0, 2.9}) {
            CHECK(hilbert_pv(dc, w) ==
                  Approx(a * hilbert_pv(d1, w) + b * hilbert_pv(d2, w)).margin(2e-6));
        }
    }

    SECTION("bosonic transform is even in omega") {
        auto d = make_density("rubin", {1.4, 2.0});
        for (double w : {0.3, 0.9, 1.7}) {
            CHECK(hilbert_pv(d, w, 1e-8) == Approx(hilbert_pv(d, -w, 1e-8)).epsilon(1e-6));
        }
    }

    SECTION("grid and analytic paths agree to 1e-3 at interior points") {
        for (const char* fam : {"semicircle", "box", "parabolic_box", "gaussian"}) {
            auto d = make_density(fam, {1.2, 0.9, 2.4});
            double lo = d.lo(), hi = d.hi();
            if (!d.bounded()) { // gaussian: wide truncation window
                lo = 2.4 - 9.0;
                hi = 2.4 + 9.0;
            }
            auto g = sample_to_grid(d, 2000, lo, hi);
            for (double frac : {0.2, 0.45, 0.6, 0.8}) {
                const double w = lo + frac * (hi - lo);
                const double ha = hilbert_pv(d, w, 1e-8);
                const double hg = hilbert_pv(g, w);
                CHECK(hg == Approx(ha).epsilon(1e-3).margin(1e-6));
            }
        }
        auto d = make_density("rubin", {1.0, 2.0});
        auto g = sample_to_grid(d, 2000, 0.0, 2.0);
        for (double w : {0.4, 1.0, 1.6}) {
            CHECK(hilbert_pv(g, w) == Approx(hilbert_pv(d, w, 1e-8)).epsilon(1e-3).margin(1e-6));
        }
    }
}

TEST_CASE("moments") {
    SECTION("linear rigid first moment is 1/3") {
        auto d = make_density("linear_rigid", {1.0, 1.0});
        CHECK(moment(d, 1) == Approx(1.0 / 3.0).epsilon(1e-10));
    }
    SECTION("lorentzian zeroth moment is pi G d") {
        auto d = make_density("lorentzian", {2.0, 0.5, 1.0});
        CHECK(moment(d, 0) == Approx(M_PI * 2.0 * 0.5).epsilon(1e-8));
    }
    SECTION("lorentzian first moment needs the principal value flag") {
        auto d = make_density("lorentzian", {2.0, 0.5, 1.0});
        CHECK_THROWS_AS(moment(d, 1), NeedsPrincipalValueError);
        MomentOptions mo;
        mo.principal_value = true;
        CHECK(moment(d, 1, mo) == Approx(M_PI * 2.0 * 0.5 * 1.0).epsilon(1e-6));
    }
    SECTION("third moment of a lorentzian diverges") {
        auto d = make_density("lorentzian", {1.0, 0.5, 1.0});
        MomentOptions mo;
        mo.principal_value = true;
        CHECK_THROWS_AS(moment(d, 3, mo), DivergentError);
    }
    SECTION("zeroth moment of nonnegative densities is nonnegative") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(32), y(32);
            for (int i = 0; i < 32; ++i) {
                x[i] = -1.0 + 0.2 * i;
                y[i] = u(rng);
            }
            auto d = SpectralDensity::from_grid(x, y, Statistics::FermionicFullAxis);
            CHECK(moment(d, 0) >= 0.0);
        }
    }
    SECTION("invalid order is rejected") {
        auto d = make_density("box", {1.0, 1.0, 2.0});
        CHECK_THROWS_AS(moment(d, 2), ValidationError);
    }
}

TEST_CASE("grid-evaluated transform lives on the source grid, finite inside") {
    auto d = make_density("semicircle", {1.0, 1.0, 3.0});
    auto g = sample_to_grid(d, 128, d.lo(), d.hi());
    auto tr = hilbert_pv_grid(g);
    REQUIRE(tr.omega.size() == g.grid().size());
    CHECK(tr.omega == g.grid().abscissae());
    for (std::size_t i = 1; i + 1 < tr.values.size(); ++i)
        CHECK(std::isfinite(tr.values[i]));
    CHECK_THROWS_AS(hilbert_pv_grid(d), ValidationError);
}

TEST_CASE("grid density validation") {
    CHECK_THROWS_AS(SpectralDensity::from_grid({1.0, 0.5}, {1.0, 1.0},
                                               Statistics::FermionicFullAxis),
                    ValidationError);
    CHECK_THROWS_AS(SpectralDensity::from_grid({0.0, 1.0}, {1.0, -0.5},
                                               Statistics::FermionicFullAxis),
                    ValidationError);
    CHECK_THROWS_AS(SpectralDensity::from_grid({-1.0, 1.0}, {0.5, 0.5},
                                               Statistics::BosonicOdd),
                    ValidationError);
}
