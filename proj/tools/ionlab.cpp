#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ionlab/errors.hpp"
#include "ionlab/report.hpp"
#include "ionlab/run.hpp"

namespace {

using ionlab::Json;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitCapacity = 4;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

struct Subcommand {
  ionlab::Command command;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> text;  // parameter key -> raw flag value
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, bool> flags;
};

std::string describe(ionlab::Command c) {
  switch (c) {
    case ionlab::Command::tf: return "Thomas-Fermi ground state of an ion";
    case ionlab::Command::hartree: return "reduced Hartree scan over t = N/Z";
    case ionlab::Command::tfw: return "Thomas-Fermi-von Weizsacker neutral atom and excess charge";
    case ionlab::Command::hf: return "finite-basis Hartree-Fock and exact diagonalization";
    case ionlab::Command::beta: return "classical screening constant of n point charges";
    case ionlab::Command::pairinf: return "infimum of the two-charge functional";
    case ionlab::Command::sigal: return "Sigal lower-bound check on random configurations";
    case ionlab::Command::drop: return "liquid drop energies, splitting and cutting identities";
    case ionlab::Command::opcheck: return "operator inequality checks on the radial grid";
  }
  return {};
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ionlab::ParameterError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ionlab::ParameterError("config file " + path + ": " + e.what());
  }
}

ionlab::RunConfig build_config(const Subcommand& sub, const std::string& config_path,
                               const CLI::Option* seed_opt, std::uint64_t seed,
                               const CLI::Option* out_opt, const std::string& out) {
  ionlab::RunConfig cfg;
  cfg.command = sub.command;
  if (!config_path.empty()) {
    Json file = load_config_file(config_path);
    if (!file.is_object()) throw ionlab::ParameterError("config file must hold a JSON object");
    if (file.contains("command") &&
        file["command"] != Json(ionlab::to_string(sub.command))) {
      throw ionlab::ParameterError("config file is for command '" +
                                   file["command"].dump() + "'");
    }
    for (const auto& [key, value] : file.items()) {
      if (key != "command" && key != "parameters" && key != "seed" && key != "format" &&
          key != "output_path") {
        throw ionlab::ParameterError("unknown config file key '" + key + "'");
      }
    }
    file["command"] = ionlab::to_string(sub.command);
    cfg = ionlab::config_from_json(file);
  }
  const auto& schema = ionlab::parameter_schema(sub.command);
  for (const auto& spec : schema) {
    if (spec.type == ionlab::ParamType::boolean) {
      if (sub.flags.at(spec.key)) cfg.parameters[spec.key] = true;
    } else if (sub.options.at(spec.key)->count() > 0) {
      cfg.parameters[spec.key] = ionlab::parse_parameter(spec, sub.text.at(spec.key));
    }
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  if (out_opt->count() > 0) cfg.format = *ionlab::format_from_string(out);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for mean-field atomic models and classical Coulomb problems"};
  app.require_subcommand(0, 1);

  bool show_version = false;
  app.add_flag("--version", show_version, "print tool and interface version");

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out = "json";
  std::string output_path;
  bool payload_only = false;

  std::vector<Subcommand> subs;
  subs.reserve(ionlab::all_commands().size());
  for (auto cmd : ionlab::all_commands()) {
    Subcommand& sub = subs.emplace_back();
    sub.command = cmd;
    sub.app = app.add_subcommand(ionlab::to_string(cmd), describe(cmd));
    for (const auto& spec : ionlab::parameter_schema(cmd)) {
      std::string help = spec.help;
      if (!spec.default_value.is_null()) help += " [default " + spec.default_value.dump() + "]";
      if (spec.type == ionlab::ParamType::boolean) {
        sub.flags[spec.key] = false;
        sub.app->add_flag(flag_name(spec.key), sub.flags[spec.key], help);
      } else {
        sub.options[spec.key] =
            sub.app->add_option(flag_name(spec.key), sub.text[spec.key], help)
                ->type_name(spec.type == ionlab::ParamType::integer  ? "INT"
                            : spec.type == ionlab::ParamType::number ? "FLOAT"
                                                                     : "LIST");
      }
    }
  }
  for (auto& sub : subs) {
    sub.app->add_option("--config", config_path, "JSON run configuration; flags take precedence");
    sub.app->add_option("--seed", seed, "master seed");
    sub.app->add_option("--out", out, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub.app->add_option("-o,--output", output_path, "write to a file instead of stdout");
    sub.app->add_flag("--payload-only", payload_only, "emit only the results payload");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (show_version) {
    std::cout << "ionlab " << ionlab::tool_version() << " (interface "
              << ionlab::interface_version() << ")\n";
    return kExitOk;
  }

  const auto active = std::find_if(subs.begin(), subs.end(),
                                   [](const Subcommand& s) { return s.app->parsed(); });
  if (active == subs.end()) {
    std::cout << app.help();
    return kExitValidation;
  }

  try {
    const auto cfg = build_config(*active, config_path, active->app->get_option("--seed"), seed,
                                  active->app->get_option("--out"), out);
    auto report = ionlab::run(cfg);
    if (!output_path.empty()) report.config.output_path = output_path;
    const std::string text = payload_only ? ionlab::emit_payload(report, report.config.format)
                                          : ionlab::emit(report, report.config.format);
    const std::string& target = report.config.output_path;
    if (target.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(target, std::ios::binary);
      if (!file) throw ionlab::ParameterError("cannot write " + target);
      file << text;
    }
    return kExitOk;
  } catch (const ionlab::ParameterError& e) {
    std::cerr << "ionlab: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ionlab::DomainError& e) {
    std::cerr << "ionlab: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ionlab::FormatError& e) {
    std::cerr << "ionlab: unsupported output: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ionlab::BasisError& e) {
    std::cerr << "ionlab: invalid basis: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ionlab::ConvergenceError& e) {
    std::cerr << "ionlab: no convergence: " << e.what() << " (residual " << e.residual()
              << " after " << e.iterations() << " iterations)\n";
    return kExitConvergence;
  } catch (const ionlab::CapacityError& e) {
    std::cerr << "ionlab: capacity exceeded: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const Json::exception& e) {
    std::cerr << "ionlab: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "ionlab: error: " << e.what() << '\n';
    return kExitOther;
  }
}
