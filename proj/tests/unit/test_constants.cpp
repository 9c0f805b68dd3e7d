#include <doctest.h>

#include "constants.hpp"
#include "errors.hpp"
#include "model.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>

using namespace hl;

namespace {

nlohmann::json oracle_file() {
  std::ifstream in(std::string(HL_DATA_DIR) + "/constants_oracle.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

double hex(const nlohmann::json &entry) {
  return std::strtod(entry.at("hex").get<std::string>().c_str(), nullptr);
}

void check_record(const HarnackConstants &k, const nlohmann::json &o) {
  CHECK(k.eta == hex(o["eta"]));
  CHECK(k.alpha == hex(o["alpha"]));
  CHECK(k.alpha_exponent == o["alpha_exponent"].get<int>());
  CHECK(k.beta == hex(o["beta"]));
  CHECK(k.gamma == hex(o["gamma"]));
  CHECK(k.kappa == hex(o["kappa"]));
  CHECK(k.j0 == o["j0"].get<std::int64_t>());
  CHECK(k.m0 == o["m0"].get<int>());
  CHECK(k.m1 == o["m1"].get<int>());
  CHECK(k.K == hex(o["K"]));
}

} // namespace

TEST_SUITE("constants") {

TEST_CASE("reference record is bit-identical to the exact derivation") {
  const auto o = oracle_file()["cases"]["reference"]["constants"];
  const HarnackConstants k = build_constants(ProcessModel::stable(3, 1.0).scale(), 3.0, 16.0, kInfinity);
  check_record(k, o);
  CHECK(k.inputs.cD == 4.0);
  CHECK(k.inputs.c0 == 3.0);
  CHECK(k.inputs.cJ == 16.0);
}

TEST_CASE("d = 2, alpha = 1 record") {
  const auto o = oracle_file()["cases"]["stable_d2_a1"]["constants"];
  const HarnackConstants k = build_constants(power_law_scale(0.25, 1.0), 2.0, 1.0, kInfinity);
  check_record(k, o);
}

TEST_CASE("least_j0 needs strict excess") {
  CHECK(least_j0(1.0, 4.0) == 3); // 2^2 = 4 is not > 4
  CHECK(least_j0(1.0, 3.9) == 2);
  CHECK(least_j0(1.0 / 576, 4.0) == 800);
  CHECK_THROWS_AS(least_j0(0.0, 4.0), DomainError);
}

TEST_CASE("gamma is capped at 1/6") {
  const HarnackConstants k = build_constants(power_law_scale(1.0, 1.0), 1.0, 1e-6, kInfinity);
  CHECK(k.gamma == 1.0 / 6.0);
}

TEST_CASE("slowly decaying scales have no admissible alpha") {
  CHECK_THROWS_AS(build_constants(power_law_scale(1.0, 0.01), 1.0, 1.0, kInfinity), NumericalError);
}

TEST_CASE("radii sequence and the block envelope") {
  const auto o = oracle_file()["cases"]["reference"];
  const GreenScale g = ProcessModel::stable(3, 1.0).scale();
  const HarnackConstants k = build_constants(g, 3.0, 16.0, kInfinity);
  for (double R : {1.0, 1e-3, 250.0}) {
    const auto r = radii_sequence(g, k, R, 1000);
    const double a4 = std::pow(k.alpha, 4) * R;
    CHECK(r.front() == doctest::Approx(a4 * std::strtod(o["r1_ratio_hex"].get<std::string>().c_str(), nullptr)).epsilon(1e-12));
    for (std::size_t j = 1; j < r.size(); ++j)
      REQUIRE(r[j] < r[j - 1]);
    const SumCheck s = check_sum_rj(g, k, R);
    CHECK(s.pass);
    CHECK(s.j_max == 8000);
    CHECK(s.envelope_violations == 0);
    const double series = o["sum_rj_series_ratio"].get<double>();
    CHECK(s.sum / s.bound < series);
    CHECK((s.sum + s.tail) / s.bound > series);
    CHECK((s.sum + s.tail) / s.bound == doctest::Approx(0.563).epsilon(5e-4));
  }
}

TEST_CASE("radii beyond the tabulated range are reported") {
  const GreenScale g = tabulated_scale({0.001, 0.01, 0.1, 1.0}, {1e6, 1e4, 100, 1});
  const HarnackConstants k = build_constants(g, 3.0, 16.0, 1.0);
  CHECK_THROWS_AS(radii_sequence(g, k, 2.0, 10), DomainError);
  CHECK(check_sum_rj(g, k, 0.5).pass);
}

} // TEST_SUITE
