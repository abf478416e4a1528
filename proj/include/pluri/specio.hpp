#pragma once

// Mapping-spec documents: JSON files describing h and g as monomial lists.
//
//   {"schema": 1, "n": 1,
//    "h": [{"component": 0, "exponents": [1], "re": 1, "im": 0}],
//    "g": [{"component": 0, "exponents": [2], "re": 0.5, "im": 0}],
//    "metadata": {"name": "...", "description": "..."}}
//
// "schema" may be omitted (read as 1); "metadata" is optional.

#include <optional>
#include <string>

#include "pluri/pmap.hpp"

namespace pluri {

struct MapSpec {
  PHMap map;
  std::optional<std::string> name;
  std::optional<std::string> description;
};

/// ParseError (with line and column) for malformed JSON, ValidationError
/// (with the offending field path) for schema, dimension and degree violations.
MapSpec parse_spec(const std::string& text);

/// Reads and parses a file; ParseError if it cannot be read.
MapSpec load_spec(const std::string& path);

/// Canonical form: fixed key order, terms in canonical order, two-space indent,
/// trailing newline. serialize_spec(parse_spec(serialize_spec(s))) == serialize_spec(s).
std::string serialize_spec(const MapSpec& spec);

}  // namespace pluri
