#include <catch2/catch.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "rctk/io/output.hpp"
#include "rctk/spectral/catalog.hpp"

using namespace rctk;

namespace {

std::string tmp_path(const char* name) {
    return std::string("rctk_test_") + name;
}

} // namespace

TEST_CASE("format_g17 round-trips doubles") {
    for (double v : {1.0 / 3.0, 2.718281828459045e-7, -4.9e300, 0.0}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}

TEST_CASE("density csv round trip") {
    const std::string path = tmp_path("density.csv");
    auto d = make_density("semicircle", {1.0, 0.8, 2.0});
    auto g = sample_to_grid(d, 200, d.lo(), d.hi());
    save_density_csv(path, g, config_hash("x"));

    SpectralDensity back = load_density_csv(path, Statistics::FermionicFullAxis);
    for (double w : {1.5, 2.0, 2.6})
        CHECK(back.raw(w) == Approx(g.raw(w)).margin(1e-12));

    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# rctk v", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("density loader validates input") {
    const std::string path = tmp_path("bad.csv");
    {
        std::ofstream out(path);
        out << "a,b\n1,2\n";
    }
    CHECK_THROWS_AS(load_density_csv(path, Statistics::FermionicFullAxis), ValidationError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_density_csv("does_not_exist.csv", Statistics::FermionicFullAxis),
                    ValidationError);
}

TEST_CASE("operator container round trip") {
    const std::string path = tmp_path("op.rcop");
    HilbertSpace space;
    space.factors = {{"s", 2}, {"r", 3}};
    OperatorMatrix op{space, Matrix::Random(6, 6)};
    save_operator(path, op, R"({"labels":["s","r"]})");
    std::string meta;
    OperatorMatrix back = load_operator(path, &meta);
    CHECK(meta == R"({"labels":["s","r"]})");
    CHECK((back.mat - op.mat).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("config hash is deterministic and content-sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
}

TEST_CASE("steady report serializes with the unit convention") {
    SteadyReport rep;
    rep.matter_current = {0.25, -0.25};
    rep.energy_current = {0.5, -0.5};
    rep.residual_norm = 1e-14;
    const std::string js = steady_report_to_json(rep, {"L", "R"}, config_hash("c"));
    CHECK(js.find("hbar=kB=1") != std::string::npos);
    CHECK(js.find("\"label\": \"L\", \"I_M\": 0.25") != std::string::npos);
    CHECK(js.find("\"I_E\": -0.5") != std::string::npos);
}
