#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <harnacklab/harnacklab.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

namespace {

struct Model {
  hl_model *p = nullptr;
  ~Model() { hl_model_free(p); }
};

} // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(hl_version()) > 0);
  CHECK(std::string(hl_status_name(HL_OK)) == "ok");
  CHECK(std::string(hl_status_name(HL_DOMAIN_ERROR)) == "domain error");
  CHECK(std::string(hl_status_name(static_cast<hl_status>(99))) == "unknown status");
}

TEST_CASE("null arguments are rejected") {
  CHECK(hl_model_stable(3, 1.0, nullptr) == HL_INVALID_ARGUMENT);
  CHECK(std::strlen(hl_last_error()) > 0);
  double v = 0.0;
  CHECK(hl_scale_value(nullptr, 1.0, &v) == HL_INVALID_ARGUMENT);
  CHECK(hl_model_dim(nullptr) == 0);
  hl_model_free(nullptr);
  hl_run_output_free(nullptr);
  hl_string_free(nullptr);
}

TEST_CASE("model construction errors map to status codes") {
  Model m;
  CHECK(hl_model_stable(3, 2.5, &m.p) == HL_CONFIG_ERROR);
  CHECK(m.p == nullptr);
  CHECK(hl_model_brownian(2, &m.p) != HL_OK);
  CHECK(hl_model_tabulated(3, "/nonexistent/scale.txt", &m.p) == HL_CONFIG_ERROR);
  CHECK(std::string(hl_last_error()).find("scale.txt") != std::string::npos);
}

TEST_CASE("recurrent stable model has no scale") {
  Model m;
  REQUIRE(hl_model_stable(1, 1.0, &m.p) == HL_OK);
  CHECK(hl_model_has_green(m.p) == 0);
  double v = 0.0;
  CHECK(hl_scale_value(m.p, 1.0, &v) == HL_DOMAIN_ERROR);
  const double c[] = {0.0}, x[] = {0.0}, z[] = {2.0};
  double k = 0.0;
  REQUIRE(hl_poisson_kernel(m.p, c, 1.0, x, z, &k) == HL_OK);
  CHECK(k == doctest::Approx(1.0 / (std::numbers::pi * 2.0 * std::sqrt(3.0))));
}

TEST_CASE("Green function and scale of the d = 3 Cauchy-type process") {
  Model m;
  REQUIRE(hl_model_stable(3, 1.0, &m.p) == HL_OK);
  CHECK(hl_model_dim(m.p) == 3);
  CHECK(hl_model_has_green(m.p) == 1);
  const double x[] = {0, 0, 0}, y[] = {0, 2, 0};
  double g = 0.0;
  REQUIRE(hl_green(m.p, x, y, &g) == HL_OK);
  const double A = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  CHECK(g == doctest::Approx(A / 4.0).epsilon(1e-14));
  double s = 0.0, r = 0.0;
  REQUIRE(hl_scale_value(m.p, 2.0, &s) == HL_OK);
  CHECK(s == doctest::Approx(g).epsilon(1e-14));
  REQUIRE(hl_scale_invert(m.p, s, &r) == HL_OK);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
  size_t violations = 1;
  REQUIRE(hl_scale_verify(m.p, &violations) == HL_OK);
  CHECK(violations == 0);
  double gb = 0.0;
  const double c[] = {0, 0, 0}, far[] = {0, 0, 3};
  REQUIRE(hl_ball_green(m.p, c, 1.0, x, far, &gb) == HL_OK);
  CHECK(gb == 0.0);
}

TEST_CASE("capacity and constants") {
  Model m;
  REQUIRE(hl_model_stable(3, 1.0, &m.p) == HL_OK);
  const double c[] = {0, 0, 0};
  hl_capacity_result cap{};
  REQUIRE(hl_ball_capacity(m.p, c, 1.0, 512, 3.0, &cap) == HL_OK);
  const double exact = std::numbers::pi * std::numbers::pi;
  CHECK(cap.capacity >= exact * (1 - 1e-9));
  // The discretized LP converges from above; 512 points sit within 10%.
  CHECK(cap.capacity <= exact * 1.1);
  CHECK(cap.lower_bound <= exact);
  CHECK(cap.upper_bound >= exact);
  CHECK(cap.n_points == 512);
  hl_constants k{};
  REQUIRE(hl_build_constants(m.p, 3.0, 16.0, INFINITY, &k) == HL_OK);
  CHECK(k.eta == 1.0 / 32);
  CHECK(k.alpha == 1.0 / 16);
  CHECK(k.j0 == 800);
  CHECK(k.m0 == 11);
  CHECK(k.m1 == 9);
  CHECK(k.K == 1769472.0 * std::pow(4.0, 20));
  CHECK(hl_build_constants(m.p, 3.0, 16.0, INFINITY, nullptr) == HL_INVALID_ARGUMENT);
}

TEST_CASE("hitting probability") {
  Model m;
  REQUIRE(hl_model_brownian(3, &m.p) == HL_OK);
  const double c[] = {0, 0, 0}, x[] = {2, 0, 0};
  hl_estimate e{};
  REQUIRE(hl_hitting_probability(m.p, c, 1.0, 4.0, x, 20000, 42, 1, &e) == HL_OK);
  CHECK(std::abs(e.mean - 1.0 / 3.0) < 4 * e.std_error);
  CHECK(e.n == 20000);
  hl_estimate e2{};
  REQUIRE(hl_hitting_probability(m.p, c, 1.0, 4.0, x, 20000, 42, 2, &e2) == HL_OK);
  CHECK(e.mean == e2.mean);
  const double inside[] = {0.5, 0, 0};
  CHECK(hl_hitting_probability(m.p, c, 1.0, 4.0, x, 0, 42, 1, &e) != HL_OK);
  (void)inside;
}

TEST_CASE("run interface") {
  char *text = nullptr;
  REQUIRE(hl_default_config(&text) == HL_OK);
  CHECK(std::string(text).find("[model]") != std::string::npos);
  hl_string_free(text);

  const char *cfg = "[model]\nkind = stable\nd = 3\nalpha = 1\n[constants]\nc0 = 3\ncJ = 16\n";
  hl_run_options opt{};
  opt.format = "csv";
  hl_run_output out{};
  REQUIRE(hl_run("constants", cfg, "mem.ini", &opt, &out) == HL_OK);
  CHECK(std::string(out.json).find("\"K\"") != std::string::npos);
  REQUIRE(out.csv != nullptr);
  CHECK(std::string(out.csv).rfind("name,value", 0) == 0);
  CHECK(std::string(out.format) == "csv");
  CHECK(std::string(out.path).empty());
  hl_run_output_free(&out);
  CHECK(out.json == nullptr);

  hl_run_output bad{};
  CHECK(hl_run("constants", "", "empty.ini", nullptr, &bad) == HL_CONFIG_ERROR);
  CHECK(std::string(hl_last_error()).find("empty.ini") != std::string::npos);
  CHECK(hl_run("no-such", cfg, nullptr, nullptr, &bad) == HL_CONFIG_ERROR);
  CHECK(hl_run("check-scale", "[model]\nd = 1\n", nullptr, nullptr, &bad) == HL_DOMAIN_ERROR);
  CHECK(hl_run(nullptr, cfg, nullptr, nullptr, &bad) == HL_INVALID_ARGUMENT);
  opt.format = "xml";
  CHECK(hl_run("constants", cfg, nullptr, &opt, &bad) == HL_CONFIG_ERROR);
}

TEST_CASE("seed override changes the run and is reproducible") {
  const char *cfg = "[model]\nkind = brownian\nd = 3\n[mc]\nn = 2000\n";
  hl_run_options opt{};
  opt.has_seed = 1;
  opt.seed = 7;
  hl_run_output a{}, b{}, c{};
  REQUIRE(hl_run("simulate hit", cfg, nullptr, &opt, &a) <= HL_CHECK_FAILED);
  REQUIRE(hl_run("simulate hit", cfg, nullptr, &opt, &b) <= HL_CHECK_FAILED);
  opt.seed = 8;
  REQUIRE(hl_run("simulate hit", cfg, nullptr, &opt, &c) <= HL_CHECK_FAILED);
  CHECK(std::string(a.json) == std::string(b.json));
  CHECK(std::string(a.json) != std::string(c.json));
  CHECK(std::string(a.json).find("\"seed\": 7") != std::string::npos);
  hl_run_output_free(&a);
  hl_run_output_free(&b);
  hl_run_output_free(&c);
}
