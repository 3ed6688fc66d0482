#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ionlab {

using Json = nlohmann::ordered_json;

enum class Command { tf, hartree, tfw, hf, beta, pairinf, sigal, drop, opcheck };
enum class Format { csv, json };

std::string to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);
std::string to_string(Format f);
std::optional<Format> format_from_string(std::string_view s);

const std::vector<Command>& all_commands();

struct RunConfig {
  Command command = Command::drop;
  /// Parameter name -> value; validated against the command's schema.
  Json parameters = Json::object();
  std::uint64_t seed = 1;
  std::string output_path;  // empty: stdout
  Format format = Format::json;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

Json config_to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);

/// Payload layout: scalar results at the top level; at most one table under
/// "table" as {"columns": [...], "rows": [[...], ...]}.
struct RunReport {
  RunConfig config;
  Json payload = Json::object();
  Json timings = Json::object();      // seconds, wall clock
  Json diagnostics = Json::object();  // iterations, residuals
  std::string version;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Tool version and the interface revision it implements.
std::string tool_version();
std::string interface_version();

/// JSON with floats at 17 significant digits and keys in insertion order.
/// FormatError on NaN or infinity.
std::string dump_json(const Json& j, int indent = 2);

Json report_to_json(const RunReport& r);
RunReport report_from_json(const Json& j);
RunReport parse_report(std::string_view text);

/// JSON: the whole report. CSV: the payload table with a header row
/// (FormatError when the payload has no table).
std::string emit(const RunReport& r, Format format);

/// The payload alone, in the requested format; identical configs and seeds
/// give identical bytes.
std::string emit_payload(const RunReport& r, Format format);

/// Builds a payload table from column names and rows.
Json make_table(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows);

}  // namespace ionlab
