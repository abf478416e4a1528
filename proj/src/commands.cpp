#include "pluri/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "pluri/bloch.hpp"
#include "pluri/error.hpp"
#include "pluri/geomverify.hpp"
#include "pluri/specio.hpp"
#include "pluri/stability.hpp"
#include "pluri/volume.hpp"

namespace pluri {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string Report::dump() const { return json.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Text parsing of complex values

namespace {

double parse_real(std::string_view s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw Error(ErrorKind::ValidationError, "cannot parse complex number '" + whole + "'");
  return v;
}

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw Error(ErrorKind::ValidationError, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, text), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  if (split_at == std::string::npos) {
    if (body.empty()) return {0.0, 1.0};
    return {0.0, parse_real(body, text)};
  }
  return {parse_real(std::string_view(body).substr(0, split_at), text),
          parse_real(std::string_view(body).substr(split_at), text)};
}

CVec parse_cvector(const std::string& text) {
  const auto parts = split(strip(text), ',');
  CVec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) v[static_cast<Eigen::Index>(k)] = parse_complex(parts[k]);
  return v;
}

CMat parse_cmatrix(const std::string& text) {
  const auto rows = split(strip(text), ';');
  const auto n = static_cast<int>(rows.size());
  std::vector<cplx> entries;
  for (const auto& r : rows) {
    const CVec row = parse_cvector(r);
    if (row.size() != n) throw Error(ErrorKind::ValidationError, "matrix '" + text + "' is not square");
    entries.insert(entries.end(), row.data(), row.data() + n);
  }
  return CMat::from_row_major(n, entries);
}

// ---------------------------------------------------------------------------
// JSON encoding of results

namespace {

ojson cj(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson vj(const CVec& v) {
  ojson a = ojson::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(cj(v[k]));
  return a;
}

ojson rvj(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

ojson mj(const CMat& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.n(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.n(); ++j) row.push_back(cj(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson estimate_j(const IntegralEstimate& e) {
  ojson o;
  o["value"] = e.value();
  o["stderr"] = e.std_error();
  o["samples"] = e.samples();
  o["seed"] = e.seed();
  o["r"] = e.r();
  return o;
}

ojson witness_j(const ScanWitness& w) {
  ojson o;
  o["kind"] = w.kind;
  o["index"] = w.index;
  if (w.kind == "collision") {
    o["z1"] = vj(w.z1);
    o["z2"] = vj(w.z2);
    o["image_distance"] = w.image_distance;
    o["point_distance"] = w.point_distance;
  } else if (w.kind == "local") {
    o["z"] = vj(w.z1);
    o["det_j"] = w.det_j;
    o["dh_singular"] = w.dh_singular;
  } else {
    o["target"] = vj(w.z1);
    o["best_preimage"] = vj(w.z2);
    o["residual"] = w.residual;
    o["outside_preimage"] = w.outside_preimage ? vj(*w.outside_preimage) : ojson(nullptr);
  }
  return o;
}

ojson verdict_j(const ScanVerdict& v, bool covering = false) {
  ojson o;
  o["status"] = to_string(v.status);
  o["statement"] = v.statement();
  o["samples"] = v.samples;
  o["tol"] = v.tol;
  o["seed"] = v.seed;
  if (covering) o["reached"] = v.reached;
  o["witness"] = v.witness ? witness_j(*v.witness) : ojson(nullptr);
  return o;
}

ojson connectivity_j(const ConnectivityEstimate& c) {
  ojson o;
  o["m_hat"] = c.m_hat;
  o["epsilon"] = c.epsilon;
  o["pairs_checked"] = c.pairs_checked;
  o["points"] = c.points;
  o["k_neighbors"] = c.k_neighbors;
  o["boundary_rho"] = c.boundary_rho;
  o["path_length"] = c.path_length;
  o["chord"] = c.chord;
  ojson path = ojson::array();
  for (const auto& p : c.path_witness) path.push_back(rvj(p));
  o["path_witness"] = std::move(path);
  return o;
}

std::string csv_num(double x) { return json(x).dump(); }

// ---------------------------------------------------------------------------
// Command context

const std::set<std::string> kKnownOptions = {
    "spec",   "spec_text",  "seed",         "samples",       "tol",         "workers",     "point",
    "r",      "budget",     "radius",       "pairs",         "targets",     "domain_radius",
    "target_radius",        "starts",       "k_neighbors",   "grid_points", "rho",         "pair_budget",
    "kind",   "perturbations", "part",      "a",             "a0",          "z1",          "z2",
    "k",      "n",          "alpha",        "volume",        "omega_grid"};

class Ctx {
 public:
  explicit Ctx(const json& opts) : opts_(opts) {
    if (!opts_.is_object()) throw Error(ErrorKind::ValidationError, "options must be a JSON object");
    for (const auto& [k, _] : opts_.items())
      if (!kKnownOptions.count(k)) throw Error(ErrorKind::ValidationError, "unknown option '" + k + "'");
  }

  ojson params = ojson::object();
  ojson results = ojson::object();
  std::string csv;
  int exit_code = 0;
  std::string status = "pass";

  bool has(const char* key) const { return opts_.contains(key) && !opts_.at(key).is_null(); }

  double real(const char* key, double def) {
    double v = def;
    if (has(key)) {
      const json& j = opts_.at(key);
      if (!j.is_number()) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be a number");
      v = j.get<double>();
      if (!std::isfinite(v)) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be finite");
    }
    params[key] = v;
    return v;
  }

  double required_real(const char* key) {
    if (!has(key)) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' is required");
    return real(key, 0.0);
  }

  long integer(const char* key, long def, long min = std::numeric_limits<long>::min()) {
    long v = def;
    if (has(key)) {
      const json& j = opts_.at(key);
      if (!j.is_number_integer()) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be an integer");
      v = j.get<long>();
    }
    if (v < min)
      throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be >= " + std::to_string(min));
    params[key] = v;
    return v;
  }

  std::uint64_t seed() {
    std::uint64_t v = 42;
    if (has("seed")) {
      const json& j = opts_.at("seed");
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw Error(ErrorKind::ValidationError, "option 'seed' must be a non-negative integer");
      v = j.get<std::uint64_t>();
    }
    params["seed"] = v;
    return v;
  }

  std::string text(const char* key, const std::string& def) {
    std::string v = def;
    if (has(key)) {
      if (!opts_.at(key).is_string()) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be a string");
      v = opts_.at(key).get<std::string>();
    }
    params[key] = v;
    return v;
  }

  std::string required_text(const char* key) {
    if (!has(key)) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' is required");
    return text(key, "");
  }

  int workers() { return static_cast<int>(integer("workers", 1, 1)); }

  double tol() {
    const double t = real("tol", 1e-9);
    if (!(t > 0.0)) throw Error(ErrorKind::ValidationError, "option 'tol' must be positive");
    return t;
  }

  MapSpec spec() {
    if (has("spec_text")) {
      params["spec"] = "<inline>";
      return parse_spec(text_raw("spec_text"));
    }
    const std::string path = required_text("spec");
    return load_spec(path);
  }

  CVec point(const char* key, int n) {
    const CVec z = parse_cvector(required_text(key));
    if (z.size() != n)
      throw Error(ErrorKind::ValidationError,
                  std::string("option '") + key + "' has " + std::to_string(z.size()) + " entries, expected " + std::to_string(n));
    return z;
  }

  void violation_if(bool v) {
    if (v) {
      status = "violation";
      exit_code = 1;
    }
  }

 private:
  std::string text_raw(const char* key) {
    if (!opts_.at(key).is_string()) throw Error(ErrorKind::ValidationError, std::string("option '") + key + "' must be a string");
    return opts_.at(key).get<std::string>();
  }

  const json& opts_;
};

// ---------------------------------------------------------------------------
// Commands

void cmd_constants(Ctx& c) {
  const auto k = constants();
  c.results["psi0"] = k.psi0;
  c.results["r0"] = k.r0;
  c.results["t_star"] = k.t_star;
  c.results["nu_max"] = k.nu_max;
  c.results["psi_at_r0"] = psi(k.r0);
  c.results["nu_at_t_star"] = nu(k.t_star);
  c.results["psi_argmin_numeric"] = psi_argmin_numeric();
}

void cmd_info(Ctx& c) {
  const MapSpec s = c.spec();
  const PHMap& f = s.map;
  const CVec origin = CVec::Zero(f.n());
  c.results["n"] = f.n();
  c.results["h_terms"] = f.h().terms().size();
  c.results["g_terms"] = f.g().terms().size();
  c.results["max_exponent"] = std::max(f.h().max_exponent(), f.g().max_exponent());
  c.results["f_at_0"] = vj(eval_ph(f, origin));
  const double dg0 = op_norm(d_poly(f.g(), origin));
  c.results["dg_at_0_norm"] = dg0;
  const double dh0_gain = min_gain(d_poly(f.h(), origin));
  c.results["dh_at_0_singular"] = dh0_gain <= kSingularThreshold;
  c.results["alpha"] = dh0_gain <= kSingularThreshold ? ojson(nullptr) : ojson(std::abs(det_jacobian(f, origin)));
  c.results["spec"] = ojson::parse(serialize_spec(s));
}

void cmd_eval(Ctx& c) {
  const MapSpec s = c.spec();
  const CVec z = c.point("point", s.map.n());
  c.results["point"] = vj(z);
  c.results["f"] = vj(eval_ph(s.map, z));
  c.results["h"] = vj(eval_poly(s.map.h(), z));
  c.results["g"] = vj(eval_poly(s.map.g(), z));
}

void cmd_derivs(Ctx& c) {
  const MapSpec s = c.spec();
  const CVec z = c.point("point", s.map.n());
  const std::uint64_t seed = c.seed();
  const long samples = c.integer("samples", 100000, 1);
  const DerivPack d = derivs(s.map, z);
  c.results["point"] = vj(z);
  c.results["dh"] = mj(d.dh);
  c.results["dg"] = mj(d.dg);
  c.results["omega"] = mj(d.omega);
  c.results["omega_norm"] = op_norm(d.omega);
  c.results["lambda_big"] = d.lambda_big;
  c.results["lambda_small"] = d.lambda_small;
  c.results["det_j"] = d.det_j;
  const Eigen::MatrixXd j = real_jacobian(s.map, z);
  c.results["det_j_real"] = j.determinant();
  const auto [smax, smin] = sphere_scan_extremes(s.map, z, samples, seed);
  ojson scan;
  scan["samples"] = samples;
  scan["seed"] = seed;
  scan["max"] = smax;
  scan["min"] = smin;
  c.results["sphere_scan"] = std::move(scan);
}

void cmd_volume(Ctx& c) {
  const MapSpec s = c.spec();
  IntegrationConfig cfg;
  cfg.seed = c.seed();
  cfg.samples = c.integer("samples", 100000, 100);
  cfg.workers = c.workers();
  if (c.has("r")) {
    const double r = c.real("r", 0.5);
    const VolumeInequality v = volume_inequality_check(s.map, r, cfg);
    c.results["generalized"] = estimate_j(v.generalized);
    c.results["real"] = estimate_j(v.real);
    c.results["k_r_pow_n"] = v.k_r_pow_n;
    c.results["difference"] = v.difference;
    c.results["difference_stderr"] = v.difference_stderr;
    c.results["inequality_pass"] = v.pass;
    c.results["hard_violation"] = v.hard_violation;
    c.csv = "quantity,r,value,stderr,samples,seed\n";
    for (const auto& [name, e] : {std::pair{"generalized", v.generalized}, std::pair{"real", v.real}})
      c.csv += std::string(name) + "," + csv_num(e.r()) + "," + csv_num(e.value()) + "," + csv_num(e.std_error()) + "," +
               std::to_string(e.samples()) + "," + std::to_string(e.seed()) + "\n";
    c.violation_if(!v.pass);
    return;
  }
  const int budget = static_cast<int>(c.integer("budget", 12, 3));
  const VolumeProfile p = sup_generalized_volume(s.map, cfg, budget);
  ojson rows = ojson::array();
  c.csv = "r,value,stderr,samples,seed\n";
  for (const auto& e : p.values) {
    rows.push_back(estimate_j(e));
    c.csv += csv_num(e.r()) + "," + csv_num(e.value()) + "," + csv_num(e.std_error()) + "," + std::to_string(e.samples()) +
             "," + std::to_string(e.seed()) + "\n";
  }
  c.results["profile"] = std::move(rows);
  c.results["sup_estimate"] = p.sup_estimate;
  c.results["diverged"] = p.diverged;
  if (p.diverged) {
    c.status = "hypothesis-violated";
    c.exit_code = 2;
  }
}

ojson radii_j(const BlochRadii& r) {
  ojson o;
  o["psi0"] = r.psi0;
  o["r0"] = r.r0;
  o["t_star"] = r.t_star;
  o["nu_max"] = r.nu_max;
  o["m0"] = r.m0;
  o["rho_at_t_star"] = r.rho_at_t_star;
  o["ru"] = r.ru;
  o["rc"] = r.rc;
  return o;
}

std::string rho_csv(const BlochRadii& r) {
  std::string out = "t,rho\n";
  for (std::size_t i = 0; i < r.t_grid.size(); ++i) out += csv_num(r.t_grid[i]) + "," + csv_num(r.rho_at_t[i]) + "\n";
  return out;
}

void cmd_bloch(Ctx& c) {
  if (!c.has("spec") && !c.has("spec_text")) {
    BlochInputs in;
    in.n = static_cast<int>(c.integer("n", 1, 1));
    in.alpha = c.required_real("alpha");
    in.volume = c.required_real("volume");
    c.results["alpha"] = in.alpha;
    c.results["volume"] = in.volume;
    c.results["alpha_cap"] = in.alpha_cap();
    const BlochRadii r = landau_bloch_radii(in);
    c.results["radii"] = radii_j(r);
    c.csv = rho_csv(r);
    return;
  }
  const MapSpec s = c.spec();
  LandauBlochConfig cfg;
  cfg.volume.seed = c.seed();
  cfg.volume.samples = c.integer("samples", 200000, 100);
  cfg.volume.workers = c.workers();
  cfg.budget = static_cast<int>(c.integer("budget", 12, 3));
  cfg.pairs = c.integer("pairs", 100000, 1);
  cfg.targets = c.integer("targets", 1000, 1);
  cfg.tol = c.tol();
  const LandauBlochReport rep = landau_bloch_verify(s.map, cfg);
  c.results["alpha"] = rep.alpha;
  ojson prof = ojson::array();
  for (const auto& e : rep.profile.values) prof.push_back(estimate_j(e));
  c.results["volume_profile"] = std::move(prof);
  c.results["volume"] = rep.volume;
  c.results["volume_diverged"] = rep.profile.diverged;
  c.results["alpha_cap"] = rep.alpha_cap;
  c.results["radii"] = radii_j(rep.radii);
  c.results["univalence"] = verdict_j(rep.univalence);
  c.results["covering"] = verdict_j(rep.covering, true);
  c.results["pass"] = rep.pass;
  c.csv = rho_csv(rep.radii);
  c.violation_if(!rep.pass);
}

void cmd_verify_univalence(Ctx& c) {
  const MapSpec s = c.spec();
  UnivalenceConfig cfg;
  cfg.seed = c.seed();
  cfg.pairs = c.integer("samples", 20000, 1);
  cfg.tol = c.tol();
  cfg.workers = c.workers();
  cfg.radius = c.real("radius", 1.0);
  const ScanVerdict v = univalence_scan(s.map, cfg);
  c.results["univalence"] = verdict_j(v);
  c.violation_if(v.status == ScanStatus::Violation);
}

void cmd_verify_covering(Ctx& c) {
  const MapSpec s = c.spec();
  CoveringConfig cfg;
  cfg.seed = c.seed();
  cfg.targets = c.integer("samples", 1000, 1);
  cfg.residual_tol = c.tol();
  cfg.workers = c.workers();
  cfg.domain_radius = c.real("domain_radius", 1.0);
  cfg.target_radius = c.real("target_radius", 0.5);
  cfg.starts = static_cast<int>(c.integer("starts", 32, 1));
  const ScanVerdict v = covering_check(s.map, cfg);
  c.results["covering"] = verdict_j(v, true);
  c.violation_if(v.status == ScanStatus::Violation);
}

ConnectivityConfig connectivity_config(Ctx& c, std::uint64_t seed) {
  ConnectivityConfig cfg;
  cfg.seed = seed;
  cfg.domain_radius = c.real("radius", 1.0);
  cfg.grid_points = static_cast<int>(c.integer("grid_points", 1500, 100));
  cfg.k_neighbors = static_cast<int>(c.integer("k_neighbors", 10, 1));
  cfg.pair_budget = c.integer("pair_budget", 10000, 1);
  cfg.boundary_rho = c.real("rho", 0.95);
  return cfg;
}

void cmd_connectivity(Ctx& c) {
  const MapSpec s = c.spec();
  const ConnectivityConfig cfg = connectivity_config(c, c.seed());
  c.results["connectivity"] = connectivity_j(connectivity_estimate(s.map, cfg));
}

ojson perturbation_j(const Perturbation& a) {
  ojson o;
  o["kind"] = to_string(a.kind());
  o["matrix"] = mj(a.matrix());
  o["norm"] = op_norm(a.matrix());
  return o;
}

void cmd_stability_scan(Ctx& c) {
  const MapSpec s = c.spec();
  UnivalenceConfig cfg;
  cfg.seed = c.seed();
  cfg.pairs = c.integer("samples", 20000, 1);
  cfg.tol = c.tol();
  cfg.workers = c.workers();
  cfg.radius = c.real("radius", 1.0);
  const PerturbationKind kind = perturbation_kind_from_string(c.text("kind", "unit-norm"));
  const long count = c.integer("perturbations", 10, 1);
  const StabilityReport rep = stability_scan(s.map.h(), s.map.g(), kind, count, cfg);
  ojson entries = ojson::array();
  for (const auto& e : rep.entries) {
    ojson o;
    o["index"] = e.index;
    o["a"] = perturbation_j(e.a);
    o["conjugated"] = verdict_j(e.conjugated);
    o["holomorphic"] = verdict_j(e.holomorphic);
    entries.push_back(std::move(o));
  }
  c.results["kind"] = to_string(rep.kind);
  c.results["entries"] = std::move(entries);
  c.results["violations"] = rep.violations;
  c.results["statement"] = "finite scan over sampled perturbations; a clean result is not a proof of stability";
  c.violation_if(!rep.pass);
}

void cmd_shear_verify(Ctx& c) {
  const MapSpec s = c.spec();
  const int n = s.map.n();
  ShearConfig cfg;
  cfg.scan.seed = c.seed();
  cfg.scan.pairs = c.integer("samples", 20000, 1);
  cfg.scan.tol = c.tol();
  cfg.scan.workers = c.workers();
  cfg.connectivity = connectivity_config(c, cfg.scan.seed);
  cfg.scan.radius = cfg.connectivity.domain_radius;
  cfg.omega_grid = c.integer("omega_grid", 1000, 1);
  const std::string part_s = c.text("part", "I");
  if (part_s != "I" && part_s != "II") throw Error(ErrorKind::ValidationError, "option 'part' must be I or II");
  const PerturbationKind kind = perturbation_kind_from_string(c.text("kind", "general-contraction"));
  const CMat a_mat = c.has("a") ? parse_cmatrix(c.text("a", "")) : CMat::identity(n);
  if (a_mat.n() != n) throw Error(ErrorKind::ValidationError, "option 'a' has the wrong dimension");
  const Perturbation a(kind, a_mat);
  const ShearReport rep = shear_verify(s.map, part_s == "I" ? ShearPart::I : ShearPart::II, a, cfg);

  c.results["part"] = part_s;
  c.results["a"] = perturbation_j(a);
  c.results["base_scan"] = verdict_j(rep.base_scan);
  c.results["c"] = rep.c;
  c.results["m_hat"] = connectivity_j(rep.m_hat);
  c.results["bound"] = rep.bound;
  c.results["m_prime"] = rep.m_prime ? ojson(*rep.m_prime) : ojson(nullptr);
  c.results["perturbed_scan"] = rep.perturbed_scan ? verdict_j(*rep.perturbed_scan) : ojson(nullptr);
  c.results["m_hat_perturbed"] = rep.m_hat_perturbed ? connectivity_j(*rep.m_hat_perturbed) : ojson(nullptr);
  c.results["slack"] = cfg.slack;
  c.results["shear_status"] = to_string(rep.status);
  c.results["statement"] =
      "M_hat is a sampled lower estimate of the connectivity constant, so C < 1/(2 M_hat + 1) is necessary "
      "but not sufficient for the hypothesis";
  if (rep.status == ShearStatus::NotApplicable) {
    c.status = "not-applicable";
    c.exit_code = 2;
  }
  c.violation_if(rep.status == ShearStatus::Fail);
}

void cmd_transfer_collision(Ctx& c) {
  const MapSpec s = c.spec();
  const int n = s.map.n();
  const PerturbationKind kind = perturbation_kind_from_string(c.text("kind", "general-contraction"));
  const CMat a0_mat = c.has("a0") ? parse_cmatrix(c.text("a0", "")) : CMat::identity(n);
  if (a0_mat.n() != n) throw Error(ErrorKind::ValidationError, "option 'a0' has the wrong dimension");
  const Perturbation a0(kind, a0_mat);
  const CVec z1 = c.point("z1", n);
  const CVec z2 = c.point("z2", n);
  const TransferResult t = transfer_collision(s.map.h(), s.map.g(), a0, z1, z2);
  c.results["a0"] = perturbation_j(a0);
  c.results["a"] = perturbation_j(t.a);
  c.results["theta"] = t.theta;
  c.results["residual"] = t.residual;
  c.results["certified"] = t.residual <= 1e-9;
  c.violation_if(t.residual > 1e-9);
}

void cmd_demo_counterexample(Ctx& c) {
  const int k = static_cast<int>(c.integer("k", 10, 1));
  const int n = static_cast<int>(c.integer("n", 2, 2));
  const double r = c.real("r", 0.9);
  IntegrationConfig icfg;
  icfg.seed = c.seed();
  icfg.samples = c.integer("samples", 100000, 100);
  icfg.workers = c.workers();
  const long targets = c.integer("targets", 1000, 1);
  const double tol = c.tol();

  const PHMap f = counterexample_family(k, n);
  const CVec origin = CVec::Zero(n);
  c.results["det_j_at_0"] = det_jacobian(f, origin);
  c.results["f_at_0_norm"] = eval_ph(f, origin).norm();
  const IntegralEstimate vol = real_volume(f, r, icfg);
  c.results["real_volume"] = estimate_j(vol);
  c.results["ball_mass"] = std::pow(r, 2.0 * n);

  CoveringConfig cc;
  cc.seed = icfg.seed;
  cc.targets = targets;
  cc.residual_tol = tol;
  cc.workers = icfg.workers;
  cc.target_radius = 1.0 / (2.0 * k);
  const ScanVerdict inner = covering_check(f, cc);
  cc.target_radius = 1.0 / k + 0.05;
  const ScanVerdict outer = covering_check(f, cc);
  c.results["inner_radius"] = 1.0 / (2.0 * k);
  c.results["covering_inner"] = verdict_j(inner, true);
  c.results["outer_radius"] = 1.0 / k + 0.05;
  c.results["covering_outer"] = verdict_j(outer, true);
  const bool reproduced = std::isfinite(vol.value()) && inner.status == ScanStatus::NoViolation &&
                          outer.status == ScanStatus::Violation;
  c.results["reproduced"] = reproduced;
  c.violation_if(!reproduced);
}

using Handler = std::function<void(Ctx&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> table = {
      {"info", cmd_info},
      {"eval", cmd_eval},
      {"derivs", cmd_derivs},
      {"volume", cmd_volume},
      {"bloch", cmd_bloch},
      {"verify-univalence", cmd_verify_univalence},
      {"verify-covering", cmd_verify_covering},
      {"connectivity", cmd_connectivity},
      {"stability-scan", cmd_stability_scan},
      {"shear-verify", cmd_shear_verify},
      {"transfer-collision", cmd_transfer_collision},
      {"demo-counterexample", cmd_demo_counterexample},
      {"constants", cmd_constants},
  };
  return table;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolated:
    case ErrorKind::DhSingular:
    case ErrorKind::Case1Unsupported:
      return 2;
    default:
      return 3;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

Report run(const std::string& command, const json& options) {
  Report rep;
  ojson& out = rep.json;
  out["tool"] = kToolName;
  out["version"] = kToolVersion;
  out["command"] = command;

  const Handler* handler = nullptr;
  for (const auto& [name, h] : handlers())
    if (name == command) handler = &h;

  ojson params = ojson::object();
  ojson results = ojson::object();
  std::string status;
  try {
    if (!handler) throw Error(ErrorKind::ValidationError, "unknown command '" + command + "'");
    Ctx ctx(options);
    try {
      (*handler)(ctx);
      params = ctx.params;
      results = ctx.results;
      rep.csv = ctx.csv;
      rep.exit_code = ctx.exit_code;
      status = ctx.status;
    } catch (...) {
      params = ctx.params;
      throw;
    }
  } catch (const Error& e) {
    rep.exit_code = exit_code_for(e.kind());
    status = rep.exit_code == 2 ? "hypothesis-violated" : "usage-error";
    ojson err;
    err["kind"] = to_string(e.kind());
    err["message"] = e.what();
    err["stage"] = e.stage().empty() ? ojson(nullptr) : ojson(e.stage());
    if (e.witness()) {
      CVec w(static_cast<Eigen::Index>(e.witness()->size()));
      for (std::size_t k = 0; k < e.witness()->size(); ++k) w[static_cast<Eigen::Index>(k)] = (*e.witness())[k];
      err["witness"] = vj(w);
    } else {
      err["witness"] = nullptr;
    }
    results = ojson::object();
    results["error"] = std::move(err);
    rep.csv.clear();
  } catch (const std::exception& e) {
    rep.exit_code = 3;
    status = "usage-error";
    results = ojson::object();
    results["error"] = {{"kind", "Internal"}, {"message", e.what()}, {"stage", nullptr}, {"witness", nullptr}};
    rep.csv.clear();
  }
  out["parameters"] = std::move(params);
  out["results"] = std::move(results);
  out["status"] = status;
  out["exit_code"] = rep.exit_code;
  out["timestamp"] = utc_timestamp();
  return rep;
}

}  // namespace pluri
