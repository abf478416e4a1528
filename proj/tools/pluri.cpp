// Command-line front end. Parses flags into a JSON option object, hands it to
// pluri_run through the C API and writes the report (and CSV sidecar).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pluri/pluri.h"

namespace {

enum class Kind { Real, Integer, Unsigned, Text };

struct Flag {
  const char* name;  // without leading dashes
  const char* key;   // option key in the JSON object
  Kind kind;
  const char* help;
};

struct Command {
  const char* name;
  const char* help;
  std::vector<Flag> flags;
};

const std::vector<Flag> kScanFlags = {
    {"radius", "radius", Kind::Real, "domain ball radius"},
};

const std::vector<Flag> kConnectivityFlags = {
    {"radius", "radius", Kind::Real, "domain ball radius"},
    {"grid-points", "grid_points", Kind::Integer, "points in the image cloud"},
    {"k-neighbors", "k_neighbors", Kind::Integer, "k for the k-NN scale"},
    {"pair-budget", "pair_budget", Kind::Integer, "pairs compared"},
    {"rho", "rho", Kind::Real, "sample from B(rho * radius)"},
};

std::vector<Command> commands() {
  std::vector<Command> out = {
      {"info", "summarise a mapping spec", {}},
      {"eval", "evaluate f = h + conj(g) at a point", {{"point", "point", Kind::Text, "comma-separated complex point"}}},
      {"derivs", "derivatives, dilatation and stretches at a point", {{"point", "point", Kind::Text, "comma-separated complex point"}}},
      {"volume",
       "generalized volume profile, or both volumes and their inequality at --r",
       {{"r", "r", Kind::Real, "single radius"}, {"budget", "budget", Kind::Integer, "number of dyadic radii"}}},
      {"bloch",
       "Landau-Bloch pipeline for --spec, or closed-form radii from --alpha/--volume/--n",
       {{"alpha", "alpha", Kind::Real, "|det J_f(0)|"},
        {"volume", "volume", Kind::Real, "sup of the generalized volume"},
        {"n", "n", Kind::Integer, "dimension"},
        {"budget", "budget", Kind::Integer, "number of dyadic radii"},
        {"pairs", "pairs", Kind::Integer, "univalence pairs"},
        {"targets", "targets", Kind::Integer, "covering targets"}}},
      {"verify-univalence", "seeded collision search", kScanFlags},
      {"verify-covering",
       "Newton multistart covering check",
       {{"domain-radius", "domain_radius", Kind::Real, "preimages must lie in this ball"},
        {"target-radius", "target_radius", Kind::Real, "targets are drawn from this ball"},
        {"starts", "starts", Kind::Integer, "multistart points"}}},
      {"connectivity", "linear-connectivity estimate of the image", kConnectivityFlags},
      {"stability-scan",
       "univalence scans over sampled perturbations",
       {{"kind", "kind", Kind::Text, "perturbation kind"},
        {"perturbations", "perturbations", Kind::Integer, "number of perturbations"},
        {"radius", "radius", Kind::Real, "domain ball radius"}}},
      {"shear-verify", "shear-construction check", kConnectivityFlags},
      {"transfer-collision",
       "turn a collision of h + g A0 into one of h + conj(g) A",
       {{"a0", "a0", Kind::Text, "matrix, rows separated by ';'"},
        {"kind", "kind", Kind::Text, "perturbation kind of A0"},
        {"z1", "z1", Kind::Text, "first point"},
        {"z2", "z2", Kind::Text, "second point"}}},
      {"demo-counterexample",
       "volume and covering of f_k(z) = (k z1, z2 / k, ...)",
       {{"k", "k", Kind::Integer, "stretch factor"},
        {"n", "n", Kind::Integer, "dimension"},
        {"r", "r", Kind::Real, "radius for the real volume"},
        {"targets", "targets", Kind::Integer, "covering targets"}}},
      {"constants", "closed-form constants", {}},
  };
  for (auto& c : out)
    if (std::string(c.name) == "shear-verify") {
      c.flags.push_back({"part", "part", Kind::Text, "I or II"});
      c.flags.push_back({"a", "a", Kind::Text, "perturbation matrix, rows separated by ';'"});
      c.flags.push_back({"kind", "kind", Kind::Text, "perturbation kind of A"});
      c.flags.push_back({"omega-grid", "omega_grid", Kind::Integer, "points for the dilatation maximum"});
    }
  return out;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T parse_number(const std::string& flag, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("--" + flag + ": cannot parse '" + text + "'");
  return v;
}

void put(nlohmann::json& opts, const Flag& f, const std::string& text) {
  switch (f.kind) {
    case Kind::Real: opts[f.key] = parse_number<double>(f.name, text); break;
    case Kind::Integer: opts[f.key] = parse_number<long long>(f.name, text); break;
    case Kind::Unsigned: opts[f.key] = parse_number<unsigned long long>(f.name, text); break;
    case Kind::Text: opts[f.key] = text; break;
  }
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pluri_string_free(s);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pluriharmonic mapping toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pluri_version()));

  const std::vector<Flag> globals = {
      {"spec", "spec", Kind::Text, "mapping-spec JSON file"},
      {"seed", "seed", Kind::Unsigned, "random seed (default 42)"},
      {"samples", "samples", Kind::Integer, "sample count of the main stochastic stage"},
      {"tol", "tol", Kind::Real, "tolerance (default 1e-9)"},
      {"workers", "workers", Kind::Integer, "worker threads (default 1)"},
  };
  std::map<std::string, std::string> global_values;
  for (const auto& f : globals) app.add_option("--" + std::string(f.name), global_values[f.name], f.help);
  std::string out_path, csv_path;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "write the CSV sidecar here");

  const auto cmds = commands();
  std::vector<std::map<std::string, std::string>> values(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    sub->fallthrough();
    for (const auto& f : cmds[i].flags) sub->add_option("--" + std::string(f.name), values[i][f.name], f.help);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  std::size_t chosen = 0;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) chosen = i;

  nlohmann::json opts = nlohmann::json::object();
  try {
    for (const auto& f : globals)
      if (app.count("--" + std::string(f.name))) put(opts, f, global_values[f.name]);
    for (const auto& f : cmds[chosen].flags)
      if (subs[chosen]->count("--" + std::string(f.name))) put(opts, f, values[chosen][f.name]);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  pluri_report* report = nullptr;
  if (pluri_run(cmds[chosen].name, opts.dump().c_str(), &report) != PLURI_OK) {
    std::cerr << "error: " << pluri_last_error() << "\n";
    return 3;
  }
  std::unique_ptr<pluri_report, decltype(&pluri_report_free)> guard(report, pluri_report_free);

  char* raw = nullptr;
  pluri_report_json(report, &raw);
  const std::string json_text = take(raw);
  const int code = pluri_report_exit_code(report);

  if (out_path.empty()) {
    std::cout << json_text;
  } else if (!write_file(out_path, json_text)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 3;
  }
  if (!csv_path.empty()) {
    raw = nullptr;
    pluri_report_csv(report, &raw);
    if (!write_file(csv_path, take(raw))) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return 3;
    }
  }
  if (code != 0) {
    const auto doc = nlohmann::json::parse(json_text);
    const auto& res = doc.at("results");
    if (res.contains("error")) std::cerr << "error: " << res["error"]["message"].get<std::string>() << "\n";
  }
  return code;
}
