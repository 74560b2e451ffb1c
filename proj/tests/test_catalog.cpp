#include <catch2/catch.hpp>

#include <cmath>

#include "rctk/numerics/special.hpp"
#include "rctk/spectral/catalog.hpp"

using namespace rctk;

TEST_CASE("dawson function against its defining integral") {
    for (double x : {0.2, 0.9, 2.1, 4.0, 4.4, 5.2, 8.0}) {
        const double ref =
            std::exp(-x * x) * integrate([](double t) { return std::exp(t * t); }, 0.0, x,
                                         {1e-13, 0.0, 4000});
        CHECK(dawson(x) == Approx(ref).epsilon(5e-8));
        CHECK(dawson(-x) == Approx(-ref).epsilon(5e-8));
    }
}

TEST_CASE("catalog lookup returns tabulated closed forms") {
    SECTION("linear_rigid RC energy") {
        const auto& e = lookup("linear_rigid");
        CHECK(e.rc_energy({1.0, 2.0}) == Approx(std::sqrt(3.0 / 5.0) * 2.0));
    }
    SECTION("lorentzian residual is the flat density 2 delta") {
        const auto& e = lookup("lorentzian");
        CHECK(e.residual_at({3.0, 0.4, 1.0}, -2.0) == Approx(0.8));
        CHECK(e.residual_at({3.0, 0.4, 1.0}, 5.0) == Approx(0.8));
        CHECK(e.pv_first_moment);
    }
    SECTION("lorentzian_sq residual is a rescaled lorentzian") {
        const auto& e = lookup("lorentzian_sq");
        const double d = 0.5, ep = 1.5;
        const double w = 2.1;
        CHECK(e.residual_at({2.0, d, ep}, w) ==
              Approx(d * 4.0 * d * d / ((w - ep) * (w - ep) + 4.0 * d * d)));
    }
    SECTION("unknown family") {
        CHECK_THROWS_AS(lookup("ohmic_exp"), UnknownFamilyError);
        CHECK_THROWS_AS(make_density("nope", {1.0}), UnknownFamilyError);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(make_density("box", {1.0}), ValidationError);
        CHECK_THROWS_AS(make_density("box", {1.0, -0.5, 2.0}), ValidationError);
    }
}

TEST_CASE("statistics flags per table") {
    CHECK(lookup("phonon_soft_peak").statistics == Statistics::BosonicOdd);
    CHECK(lookup("rubin").statistics == Statistics::BosonicOdd);
    CHECK(lookup("box").statistics == Statistics::FermionicFullAxis);
    CHECK(lookup("gaussian").statistics == Statistics::FermionicFullAxis);
    // odd continuation only on the bosonic side
    auto rb = make_density("rubin", {1.0, 1.0});
    CHECK(eval(rb, -0.5) == Approx(-eval(rb, 0.5)));
    auto sc = make_density("semicircle", {1.0, 0.5, 2.0});
    CHECK(eval(sc, 1.2) == 0.0);
}

TEST_CASE("soft-cutoff rows are marked non-recursable") {
    CHECK_FALSE(lookup("phonon_soft_peak").recursable);
    CHECK_FALSE(lookup("phonon_soft_cubic").recursable);
    CHECK_FALSE(lookup("lorentzian").recursable);
    CHECK_FALSE(lookup("lorentzian_sq").recursable);
    CHECK_FALSE(lookup("gaussian").recursable);
    CHECK(lookup("linear_rigid").recursable);
    CHECK(lookup("rubin").recursable);
    CHECK(lookup("box").recursable);
    CHECK(lookup("parabolic_box").recursable);
    CHECK(lookup("semicircle").recursable);
}

TEST_CASE("verify_against_numeric on spot-checked rows") {
    SECTION("soft-cutoff phonon row at delta=1, eps=2, gamma=1") {
        const auto& e = lookup("phonon_soft_peak");
        const std::vector<double> p{1.0, 1.0, 2.0};
        CHECK(e.lambda_sq(p) == Approx(1.0 * 1.0 * 2.0 / (4.0 * std::sqrt(7.0))));
        auto rep = verify_against_numeric(e, p, 1e-3);
        INFO("lambda_sq dev " << rep.dev_lambda_sq << ", rc dev " << rep.dev_rc_energy
                              << ", residual dev " << rep.dev_residual);
        CHECK(rep.pass);
    }
    SECTION("parabolic box lambda_sq = 2 G d / (3 pi)") {
        const auto& e = lookup("parabolic_box");
        const std::vector<double> p{1.0, 1.0, 2.0};
        CHECK(e.lambda_sq(p) == Approx(2.0 / (3.0 * M_PI)));
        auto rep = verify_against_numeric(e, p, 1e-3);
        CHECK(rep.pass);
    }
    SECTION("flat box residual against the tabulated arctanh form") {
        const auto& e = lookup("box");
        auto rep = verify_against_numeric(e, {1.5, 0.8, 2.0}, 1e-3);
        CHECK(rep.pass);
    }
}
