#pragma once

#include <string>
#include <vector>

#include "ionlab/report.hpp"

namespace ionlab {

enum class ParamType { number, integer, boolean, number_list };

struct ParamSpec {
  std::string key;
  ParamType type;
  Json default_value;  // null: optional without default
  std::string help;
};

/// Accepted parameters of each command, in display order.
const std::vector<ParamSpec>& parameter_schema(Command c);

/// Converts the text form of a flag value ("1.5", "true", "1,2,4") to JSON.
/// ParameterError when the text does not parse.
Json parse_parameter(const ParamSpec& spec, const std::string& text);

/// Checks types and rejects unknown keys (ParameterError); returns the
/// config with every defaulted parameter filled in.
RunConfig validate_config(const RunConfig& config);

/// Validates, then dispatches to the command. Payloads depend only on the
/// validated config and its seed.
RunReport run(const RunConfig& config);

}  // namespace ionlab
