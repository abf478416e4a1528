// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "pluri/pluri.h"

namespace {

const std::string kData = PLURI_DATA_DIR;

const char* kHalfSquare =
    R"({"n": 1, "h": [{"component": 0, "exponents": [1], "re": 1, "im": 0}],
        "g": [{"component": 0, "exponents": [2], "re": 0.5, "im": 0}]})";

std::string take(char* s) {
  std::string out(s);
  pluri_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(pluri_version()) == "0.1.0");
  CHECK(std::string(pluri_status_name(PLURI_OK)) == "ok");
  CHECK(std::strlen(pluri_status_name(PLURI_ERR_HYPOTHESIS_VIOLATED)) > 0);
}

TEST_CASE("map lifecycle and evaluation") {
  pluri_map* m = nullptr;
  REQUIRE(pluri_map_parse(kHalfSquare, &m) == PLURI_OK);
  CHECK(pluri_map_dim(m) == 1);

  const double z[2] = {0.2, 0.0};
  double w[2];
  REQUIRE(pluri_eval(m, z, w) == PLURI_OK);
  CHECK(std::abs(w[0] - 0.22) < 1e-15);
  CHECK(w[1] == 0.0);

  double det = 0.0;
  REQUIRE(pluri_det_jacobian(m, z, &det) == PLURI_OK);
  CHECK(det == doctest::Approx(1.0 - 0.04));

  double big = 0.0, small = 0.0;
  REQUIRE(pluri_lambda_extremes(m, z, &big, &small) == PLURI_OK);
  CHECK(big == doctest::Approx(1.2));
  CHECK(small == doctest::Approx(0.8));

  double om[2];
  REQUIRE(pluri_omega(m, z, om) == PLURI_OK);
  CHECK(std::abs(om[0] - 0.2) < 1e-15);

  char* text = nullptr;
  REQUIRE(pluri_map_serialize(m, &text) == PLURI_OK);
  const std::string s = take(text);
  pluri_map* back = nullptr;
  REQUIRE(pluri_map_parse(s.c_str(), &back) == PLURI_OK);
  REQUIRE(pluri_map_serialize(back, &text) == PLURI_OK);
  CHECK(take(text) == s);
  pluri_map_free(back);
  pluri_map_free(m);
  pluri_map_free(nullptr);
}

TEST_CASE("errors are codes plus a message") {
  pluri_map* m = nullptr;
  CHECK(pluri_map_parse("{", &m) == PLURI_ERR_PARSE);
  CHECK(m == nullptr);
  CHECK(std::string(pluri_last_error()).find("line") != std::string::npos);
  CHECK(pluri_map_parse(R"({"n": 2, "h": [], "g": [], "x": 1})", &m) == PLURI_ERR_VALIDATION);
  CHECK(pluri_map_load((kData + "/missing.json").c_str(), &m) == PLURI_ERR_PARSE);
  CHECK(pluri_map_parse(nullptr, &m) == PLURI_ERR_INVALID_ARGUMENT);

  REQUIRE(pluri_map_parse(R"({"n": 1, "h": [{"component": 0, "exponents": [2], "re": 1, "im": 0}], "g": []})",
                          &m) == PLURI_OK);
  const double zero[2] = {0.0, 0.0};
  double om[2];
  CHECK(pluri_omega(m, zero, om) == PLURI_ERR_DH_SINGULAR);
  pluri_map_free(m);

  double v = 0.0;
  CHECK(pluri_mprime(2.0, 0.2, &v) == PLURI_ERR_PRECONDITION);
  CHECK(pluri_mprime(1.0, 0.2, &v) == PLURI_OK);
  CHECK(v == doctest::Approx(3.0));
  double ru = 0.0, rc = 0.0;
  CHECK(pluri_bloch_radii(1, 1000.0, 1.0, &ru, &rc) == PLURI_ERR_HYPOTHESIS_VIOLATED);
  REQUIRE(pluri_bloch_radii(1, 1.0, 1.0, &ru, &rc) == PLURI_OK);
  CHECK(ru == doctest::Approx(7.5096e-3).epsilon(1e-4));
  CHECK(rc == doctest::Approx(1.1275e-3).epsilon(1e-4));
}

TEST_CASE("constants and the counterexample family") {
  double psi0, r0, t_star, nu_max;
  pluri_constants(&psi0, &r0, &t_star, &nu_max);
  CHECK(psi0 == doctest::Approx((11.0 + 5.0 * std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  CHECK(nu_max == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-15));

  pluri_map* f = nullptr;
  REQUIRE(pluri_map_counterexample(10, 2, &f) == PLURI_OK);
  CHECK(pluri_map_dim(f) == 2);
  const double z[4] = {0.1, 0.0, 0.0, 0.5};
  double w[4];
  REQUIRE(pluri_eval(f, z, w) == PLURI_OK);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[3] == doctest::Approx(0.05));
  pluri_map_free(f);
  CHECK(pluri_map_counterexample(10, 1, &f) == PLURI_ERR_DOMAIN);
}

TEST_CASE("commands through the C API") {
  pluri_report* r = nullptr;
  REQUIRE(pluri_run("constants", nullptr, &r) == PLURI_OK);
  CHECK(pluri_report_exit_code(r) == 0);
  char* text = nullptr;
  REQUIRE(pluri_report_json(r, &text) == PLURI_OK);
  CHECK(take(text).find("\"psi0\"") != std::string::npos);
  pluri_report_free(r);

  const std::string opts = R"({"spec": ")" + kData + R"(/half_square.json", "r": 0.5, "samples": 2000})";
  REQUIRE(pluri_run("volume", opts.c_str(), &r) == PLURI_OK);
  CHECK(pluri_report_exit_code(r) == 0);
  REQUIRE(pluri_report_csv(r, &text) == PLURI_OK);
  CHECK(take(text).rfind("quantity,", 0) == 0);
  pluri_report_free(r);

  REQUIRE(pluri_run("volume", R"({"bogus": 1})", &r) == PLURI_OK);
  CHECK(pluri_report_exit_code(r) == 3);
  pluri_report_free(r);

  CHECK(pluri_run("volume", "{not json", &r) == PLURI_ERR_PARSE);
  CHECK(pluri_run(nullptr, nullptr, &r) == PLURI_ERR_INVALID_ARGUMENT);
  CHECK(pluri_report_exit_code(nullptr) == 3);
}
