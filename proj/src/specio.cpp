#include "pluri/specio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pluri/error.hpp"

namespace pluri {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ValidationError, path + ": " + msg);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

int read_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < -1000000 || x > 1000000) invalid(path, "integer out of range");
  return static_cast<int>(x);
}

double read_real(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(path, "must be finite");
  return x;
}

PolyMap read_poly(const json& doc, const char* key, int n) {
  const std::string base = key;
  if (!doc.contains(key)) invalid(base, "missing");
  const json& arr = doc.at(key);
  if (!arr.is_array()) invalid(base, "expected an array of monomials");
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = base + "[" + std::to_string(i) + "]";
    const json& t = arr[i];
    if (!t.is_object()) invalid(path, "expected an object");
    for (const auto& [k, _] : t.items())
      if (k != "component" && k != "exponents" && k != "re" && k != "im") invalid(path + "." + k, "unknown field");
    for (const char* req : {"component", "exponents", "re", "im"})
      if (!t.contains(req)) invalid(path + "." + req, "missing");
    Monomial m;
    m.component = read_int(t.at("component"), path + ".component");
    if (m.component < 0 || m.component >= n) invalid(path + ".component", "must lie in [0, " + std::to_string(n) + ")");
    const json& ex = t.at("exponents");
    if (!ex.is_array()) invalid(path + ".exponents", "expected an array");
    if (static_cast<int>(ex.size()) != n)
      invalid(path + ".exponents", "has length " + std::to_string(ex.size()) + ", expected n = " + std::to_string(n));
    for (std::size_t j = 0; j < ex.size(); ++j) {
      const std::string ep = path + ".exponents[" + std::to_string(j) + "]";
      const int e = read_int(ex[j], ep);
      if (e < 0) invalid(ep, "must be non-negative");
      if (e > kMaxDegreePerVariable) invalid(ep, "exceeds the degree cap " + std::to_string(kMaxDegreePerVariable));
      m.exponents.push_back(e);
    }
    m.coefficient = {read_real(t.at("re"), path + ".re"), read_real(t.at("im"), path + ".im")};
    terms.push_back(std::move(m));
  }
  return PolyMap(n, std::move(terms));
}

ojson write_poly(const PolyMap& p) {
  ojson arr = ojson::array();
  for (const auto& m : p.terms()) {
    ojson t;
    t["component"] = m.component;
    t["exponents"] = m.exponents;
    t["re"] = m.coefficient.real();
    t["im"] = m.coefficient.imag();
    arr.push_back(std::move(t));
  }
  return arr;
}

}  // namespace

MapSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "malformed mapping spec at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) invalid("$", "expected a JSON object");
  for (const auto& [k, _] : doc.items())
    if (k != "schema" && k != "n" && k != "h" && k != "g" && k != "metadata") invalid(k, "unknown field");
  if (doc.contains("schema") && read_int(doc.at("schema"), "schema") != 1) invalid("schema", "only schema 1 is supported");
  if (!doc.contains("n")) invalid("n", "missing");
  const int n = read_int(doc.at("n"), "n");
  if (n < 1) invalid("n", "must be >= 1");

  MapSpec spec{PHMap(read_poly(doc, "h", n), read_poly(doc, "g", n)), std::nullopt, std::nullopt};
  if (doc.contains("metadata")) {
    const json& md = doc.at("metadata");
    if (!md.is_object()) invalid("metadata", "expected an object");
    for (const auto& [k, v] : md.items()) {
      if (k != "name" && k != "description") invalid("metadata." + k, "unknown field");
      if (!v.is_string()) invalid("metadata." + k, "expected a string");
    }
    if (md.contains("name")) spec.name = md.at("name").get<std::string>();
    if (md.contains("description")) spec.description = md.at("description").get<std::string>();
  }
  return spec;
}

MapSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read mapping spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string serialize_spec(const MapSpec& spec) {
  ojson doc;
  doc["schema"] = 1;
  doc["n"] = spec.map.n();
  doc["h"] = write_poly(spec.map.h());
  doc["g"] = write_poly(spec.map.g());
  if (spec.name || spec.description) {
    ojson md = ojson::object();
    if (spec.name) md["name"] = *spec.name;
    if (spec.description) md["description"] = *spec.description;
    doc["metadata"] = std::move(md);
  }
  return doc.dump(2) + "\n";
}

}  // namespace pluri
