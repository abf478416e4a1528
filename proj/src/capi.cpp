#include "pluri/pluri.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "pluri/bloch.hpp"
#include "pluri/commands.hpp"
#include "pluri/error.hpp"
#include "pluri/specio.hpp"
#include "pluri/stability.hpp"

struct pluri_map {
  pluri::MapSpec spec;
};

struct pluri_report {
  pluri::Report report;
};

namespace {

thread_local std::string g_last_error;

pluri_status status_for(pluri::ErrorKind k) {
  using pluri::ErrorKind;
  switch (k) {
    case ErrorKind::DimensionMismatch: return PLURI_ERR_DIMENSION_MISMATCH;
    case ErrorKind::Singular: return PLURI_ERR_SINGULAR;
    case ErrorKind::DhSingular: return PLURI_ERR_DH_SINGULAR;
    case ErrorKind::HypothesisViolated: return PLURI_ERR_HYPOTHESIS_VIOLATED;
    case ErrorKind::DomainError: return PLURI_ERR_DOMAIN;
    case ErrorKind::PreconditionViolated: return PLURI_ERR_PRECONDITION;
    case ErrorKind::NotACollision: return PLURI_ERR_NOT_A_COLLISION;
    case ErrorKind::Case1Unsupported: return PLURI_ERR_CASE1_UNSUPPORTED;
    case ErrorKind::DegenerateDenominator: return PLURI_ERR_DEGENERATE_DENOMINATOR;
    case ErrorKind::GraphDisconnected: return PLURI_ERR_GRAPH_DISCONNECTED;
    case ErrorKind::IntegrandNonFinite: return PLURI_ERR_INTEGRAND_NON_FINITE;
    case ErrorKind::ParseError: return PLURI_ERR_PARSE;
    case ErrorKind::ValidationError: return PLURI_ERR_VALIDATION;
    case ErrorKind::Internal: return PLURI_ERR_INTERNAL;
  }
  return PLURI_ERR_INTERNAL;
}

template <class Fn>
pluri_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PLURI_OK;
  } catch (const pluri::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PLURI_ERR_INTERNAL;
  }
}

pluri_status invalid(const char* msg) {
  g_last_error = msg;
  return PLURI_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pluri::CVec read_point(const pluri_map* map, const double* z) {
  const int n = map->spec.map.n();
  pluri::CVec v(n);
  for (int k = 0; k < n; ++k) v[k] = {z[2 * k], z[2 * k + 1]};
  return v;
}

}  // namespace

extern "C" {

const char* pluri_version(void) { return pluri::kToolVersion; }

const char* pluri_last_error(void) { return g_last_error.c_str(); }

const char* pluri_status_name(pluri_status status) {
  switch (status) {
    case PLURI_OK: return "ok";
    case PLURI_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case PLURI_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case PLURI_ERR_SINGULAR: return "Singular";
    case PLURI_ERR_DH_SINGULAR: return "DhSingular";
    case PLURI_ERR_HYPOTHESIS_VIOLATED: return "HypothesisViolated";
    case PLURI_ERR_DOMAIN: return "DomainError";
    case PLURI_ERR_PRECONDITION: return "PreconditionViolated";
    case PLURI_ERR_NOT_A_COLLISION: return "NotACollision";
    case PLURI_ERR_CASE1_UNSUPPORTED: return "Case1Unsupported";
    case PLURI_ERR_DEGENERATE_DENOMINATOR: return "DegenerateDenominator";
    case PLURI_ERR_GRAPH_DISCONNECTED: return "GraphDisconnected";
    case PLURI_ERR_INTEGRAND_NON_FINITE: return "IntegrandNonFinite";
    case PLURI_ERR_PARSE: return "ParseError";
    case PLURI_ERR_VALIDATION: return "ValidationError";
    case PLURI_ERR_INTERNAL: return "Internal";
  }
  return "unknown";
}

void pluri_string_free(char* s) { std::free(s); }

pluri_status pluri_map_parse(const char* spec_json, pluri_map** out) {
  if (!spec_json || !out) return invalid("null argument");
  return guarded([&] { *out = new pluri_map{pluri::parse_spec(spec_json)}; });
}

pluri_status pluri_map_load(const char* path, pluri_map** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new pluri_map{pluri::load_spec(path)}; });
}

pluri_status pluri_map_counterexample(int k, int n, pluri_map** out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = new pluri_map{{pluri::counterexample_family(k, n), std::nullopt, std::nullopt}}; });
}

void pluri_map_free(pluri_map* map) { delete map; }

int pluri_map_dim(const pluri_map* map) { return map ? map->spec.map.n() : 0; }

pluri_status pluri_map_serialize(const pluri_map* map, char** out) {
  if (!map || !out) return invalid("null argument");
  return guarded([&] { *out = dup(pluri::serialize_spec(map->spec)); });
}

pluri_status pluri_eval(const pluri_map* map, const double* z, double* out) {
  if (!map || !z || !out) return invalid("null argument");
  return guarded([&] {
    const pluri::CVec w = pluri::eval_ph(map->spec.map, read_point(map, z));
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      out[2 * k] = w[k].real();
      out[2 * k + 1] = w[k].imag();
    }
  });
}

pluri_status pluri_det_jacobian(const pluri_map* map, const double* z, double* out) {
  if (!map || !z || !out) return invalid("null argument");
  return guarded([&] { *out = pluri::det_jacobian(map->spec.map, read_point(map, z)); });
}

pluri_status pluri_lambda_extremes(const pluri_map* map, const double* z, double* big, double* small) {
  if (!map || !z || !big || !small) return invalid("null argument");
  return guarded([&] {
    const auto [b, s] = pluri::lambda_extremes(map->spec.map, read_point(map, z));
    *big = b;
    *small = s;
  });
}

pluri_status pluri_omega(const pluri_map* map, const double* z, double* out) {
  if (!map || !z || !out) return invalid("null argument");
  return guarded([&] {
    const pluri::CMat w = pluri::omega(map->spec.map, read_point(map, z));
    const int n = w.n();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out[2 * (i * n + j)] = w(i, j).real();
        out[2 * (i * n + j) + 1] = w(i, j).imag();
      }
  });
}

void pluri_constants(double* psi0, double* r0, double* t_star, double* nu_max) {
  const auto c = pluri::constants();
  if (psi0) *psi0 = c.psi0;
  if (r0) *r0 = c.r0;
  if (t_star) *t_star = c.t_star;
  if (nu_max) *nu_max = c.nu_max;
}

pluri_status pluri_bloch_radii(int n, double alpha, double volume, double* ru, double* rc) {
  if (!ru || !rc) return invalid("null argument");
  return guarded([&] {
    const auto r = pluri::landau_bloch_radii({n, alpha, volume});
    *ru = r.ru;
    *rc = r.rc;
  });
}

pluri_status pluri_mprime(double m, double c, double* out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = pluri::mprime(m, c); });
}

pluri_status pluri_run(const char* command, const char* options_json, pluri_report** out) {
  if (!command || !out) return invalid("null argument");
  return guarded([&] {
    nlohmann::json opts = nlohmann::json::object();
    if (options_json) {
      try {
        opts = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw pluri::Error(pluri::ErrorKind::ParseError, std::string("options are not valid JSON: ") + e.what());
      }
    }
    *out = new pluri_report{pluri::run(command, opts)};
  });
}

pluri_status pluri_report_json(const pluri_report* report, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] { *out = dup(report->report.dump()); });
}

pluri_status pluri_report_csv(const pluri_report* report, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] { *out = dup(report->report.csv); });
}

int pluri_report_exit_code(const pluri_report* report) { return report ? report->report.exit_code : 3; }

void pluri_report_free(pluri_report* report) { delete report; }

}  // extern "C"
