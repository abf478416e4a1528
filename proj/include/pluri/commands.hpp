#pragma once

// Command dispatch shared by the C API and the command-line tool. A command
// takes a JSON object of options and produces a JSON report plus an optional
// CSV sidecar and an exit code:
//   0 pass / no violation, 1 violation found, 2 hypothesis violated,
//   3 usage, parse or validation error.

#include <string>
#include <vector>

#include <json.hpp>

#include "pluri/cmatrix.hpp"

namespace pluri {

inline constexpr const char* kToolName = "pluri";
inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
  nlohmann::ordered_json json;
  std::string csv;  // empty when the command has no tabular output
  int exit_code = 0;

  /// Two-space indented JSON with a trailing newline.
  std::string dump() const;
};

const std::vector<std::string>& command_names();

/// Never throws for bad input: errors become reports with exit code 2 or 3.
Report run(const std::string& command, const nlohmann::json& options);

/// "0.1+0.2i", "-i", "3", "2.5e-1-1e-3i".
cplx parse_complex(const std::string& text);
/// Comma-separated complex entries.
CVec parse_cvector(const std::string& text);
/// Rows separated by ';', entries by ','.
CMat parse_cmatrix(const std::string& text);

}  // namespace pluri
