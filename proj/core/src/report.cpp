#include "ionlab/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "ionlab/errors.hpp"

namespace ionlab {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommandNames{{
    {Command::tf, "tf"},
    {Command::hartree, "hartree"},
    {Command::tfw, "tfw"},
    {Command::hf, "hf"},
    {Command::beta, "beta"},
    {Command::pairinf, "pairinf"},
    {Command::sigal, "sigal"},
    {Command::drop, "drop"},
    {Command::opcheck, "opcheck"},
}};

std::string format_double(double v) {
  if (!std::isfinite(v)) throw FormatError("non-finite value in report");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_json(std::ostringstream& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write_json(out, value, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Rows of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << (flat ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write_json(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_primitive() && !v.is_null()) return v.dump();
  if (v.is_null()) return "";
  throw FormatError("nested value in CSV cell");
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return std::string(name);
  }
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (name == s) return cmd;
  }
  return std::nullopt;
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

std::optional<Format> format_from_string(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> cmds = [] {
    std::vector<Command> v;
    for (const auto& [cmd, name] : kCommandNames) v.push_back(cmd);
    return v;
  }();
  return cmds;
}

std::string tool_version() { return IONLAB_VERSION; }

std::string interface_version() { return "1.0"; }

Json config_to_json(const RunConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  j["parameters"] = c.parameters;
  j["seed"] = c.seed;
  j["output_path"] = c.output_path;
  j["format"] = to_string(c.format);
  return j;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  RunConfig c;
  const auto cmd = command_from_string(j.at("command").get<std::string>());
  if (!cmd) throw ParameterError("unknown command '" + j.at("command").get<std::string>() + "'");
  c.command = *cmd;
  c.parameters = j.value("parameters", Json::object());
  c.seed = j.value("seed", std::uint64_t{1});
  c.output_path = j.value("output_path", std::string{});
  const auto fmt = format_from_string(j.value("format", std::string("json")));
  if (!fmt) throw ParameterError("unknown format");
  c.format = *fmt;
  return c;
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream out;
  write_json(out, j, indent, 0);
  return out.str();
}

Json report_to_json(const RunReport& r) {
  Json j;
  j["version"] = r.version;
  j["config"] = config_to_json(r.config);
  j["payload"] = r.payload;
  j["diagnostics"] = r.diagnostics;
  j["timings"] = r.timings;
  return j;
}

RunReport report_from_json(const Json& j) {
  RunReport r;
  r.version = j.at("version").get<std::string>();
  r.config = config_from_json(j.at("config"));
  r.payload = j.at("payload");
  r.diagnostics = j.at("diagnostics");
  r.timings = j.at("timings");
  return r;
}

RunReport parse_report(std::string_view text) {
  return report_from_json(Json::parse(text.begin(), text.end()));
}

std::string emit(const RunReport& r, Format format) {
  if (format == Format::json) return dump_json(report_to_json(r)) + "\n";
  return emit_payload(r, Format::csv);
}

std::string emit_payload(const RunReport& r, Format format) {
  if (format == Format::json) return dump_json(r.payload) + "\n";
  if (r.payload.empty()) return "";
  if (!r.payload.contains("table")) {
    throw FormatError("payload of '" + to_string(r.config.command) + "' has no table for CSV");
  }
  const Json& table = r.payload["table"];
  std::string out;
  const auto line = [&out](const Json& cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out += ',';
      first = false;
      out += csv_cell(c);
    }
    out += '\n';
  };
  line(table.at("columns"));
  for (const auto& row : table.at("rows")) line(row);
  return out;
}

Json make_table(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  Json t;
  t["columns"] = columns;
  t["rows"] = Json::array();
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw FormatError("table row width mismatch");
    t["rows"].push_back(row);
  }
  return t;
}

}  // namespace ionlab
