#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pluri/error.hpp"
#include "pluri/specio.hpp"

using namespace pluri;

namespace {

const std::string kData = PLURI_DATA_DIR;

Error error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an Error");
  return Error(ErrorKind::Internal, "unreachable");
}

}  // namespace

TEST_CASE("identity spec") {
  const MapSpec s = parse_spec(R"({"n": 1, "h": [{"component": 0, "exponents": [1], "re": 1, "im": 0}], "g": []})");
  CHECK(s.map.n() == 1);
  CHECK(s.map.h() == PolyMap::identity(1));
  CHECK(s.map.g().empty());
  CHECK(!s.name);
}

TEST_CASE("duplicate monomials merge") {
  const MapSpec s = parse_spec(R"({"schema": 1, "n": 1,
    "h": [{"component": 0, "exponents": [1], "re": 1, "im": 0},
          {"component": 0, "exponents": [1], "re": 0.5, "im": 2}],
    "g": []})");
  REQUIRE(s.map.h().terms().size() == 1);
  CHECK(s.map.h().terms()[0].coefficient == cplx(1.5, 2.0));
}

TEST_CASE("validation errors name the field") {
  const Error len = error_of(R"({"n": 2, "h": [{"component": 0, "exponents": [1], "re": 1, "im": 0}], "g": []})");
  CHECK(len.kind() == ErrorKind::ValidationError);
  CHECK(std::string(len.what()).find("h[0].exponents") != std::string::npos);

  const Error deg = error_of(R"({"n": 1, "h": [], "g": [{"component": 0, "exponents": [17], "re": 1, "im": 0}]})");
  CHECK(deg.kind() == ErrorKind::ValidationError);
  CHECK(std::string(deg.what()).find("g[0].exponents[0]") != std::string::npos);

  CHECK(error_of(R"({"n": 1, "h": [{"component": 1, "exponents": [1], "re": 1, "im": 0}], "g": []})").kind() ==
        ErrorKind::ValidationError);
  CHECK(error_of(R"({"n": 0, "h": [], "g": []})").kind() == ErrorKind::ValidationError);
  CHECK(error_of(R"({"n": 1, "h": [], "g": [], "extra": 3})").kind() == ErrorKind::ValidationError);
  CHECK(error_of(R"({"schema": 2, "n": 1, "h": [], "g": []})").kind() == ErrorKind::ValidationError);
  CHECK(error_of(R"({"n": 1, "h": []})").kind() == ErrorKind::ValidationError);
  CHECK(error_of(R"({"n": 1, "h": [{"component": 0, "exponents": [1], "re": "1", "im": 0}], "g": []})").kind() ==
        ErrorKind::ValidationError);
  CHECK(error_of(R"([1, 2])").kind() == ErrorKind::ValidationError);
}

TEST_CASE("malformed documents report line and column") {
  const Error e = error_of("{\n  \"n\": 1,\n  \"h\": [,\n}");
  CHECK(e.kind() == ErrorKind::ParseError);
  CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  CHECK(error_of("").kind() == ErrorKind::ParseError);
}

TEST_CASE("serialization round-trips byte for byte") {
  std::mt19937_64 rng(81);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 20; ++t) {
      MapSpec s{PHMap(oracle::random_poly(n, 6, 0, 4, 1.0, rng), oracle::random_poly(n, 6, 0, 4, 1.0, rng)),
                std::nullopt, std::nullopt};
      if (t % 2) {
        s.name = "map " + std::to_string(t);
        s.description = "random \"quoted\" map";
      }
      const std::string once = serialize_spec(s);
      const MapSpec back = parse_spec(once);
      CHECK(back.map.h() == s.map.h());
      CHECK(back.map.g() == s.map.g());
      CHECK(back.name == s.name);
      CHECK(serialize_spec(back) == once);
      CHECK(once.back() == '\n');
    }
}

TEST_CASE("bundled specs load") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kData)) {
    const MapSpec s = load_spec(entry.path().string());
    CHECK(s.map.n() >= 1);
    CHECK(s.name);
    CHECK(serialize_spec(parse_spec(serialize_spec(s))) == serialize_spec(s));
    ++count;
  }
  CHECK(count >= 6);

  const MapSpec half = load_spec(kData + "/half_square.json");
  CHECK(half.map.g() == PolyMap(1, {{0, {2}, 0.5}}));
  try {
    load_spec(kData + "/does_not_exist.json");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}
