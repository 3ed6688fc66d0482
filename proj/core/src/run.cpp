#include "ionlab/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ionlab/classical.hpp"
#include "ionlab/errors.hpp"
#include "ionlab/hartree.hpp"
#include "ionlab/hf.hpp"
#include "ionlab/liquid_drop.hpp"
#include "ionlab/operator_checks.hpp"
#include "ionlab/tf.hpp"
#include "ionlab/tfw.hpp"

namespace ionlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json null() { return Json(nullptr); }

const std::vector<ParamSpec> kTf{
    {"Z", ParamType::number, 1.0, "nuclear charge"},
    {"N", ParamType::number, 1.0, "electron number (mass bound)"},
    {"grid_n", ParamType::integer, 4000, "grid points"},
    {"rmin", ParamType::number, null(), "grid start (default 1e-8 Z^{-1/3})"},
    {"rmax", ParamType::number, null(), "grid end (default 1e4 Z^{-1/3})"},
    {"tol", ParamType::number, 1e-8, "relative residual tolerance"},
};

const std::vector<ParamSpec> kHartree{
    {"t", ParamType::number_list, null(), "masses t for the e(t) curve"},
    {"tc", ParamType::boolean, false, "compute the critical mass"},
    {"tol", ParamType::number, 1e-3, "bracket width of the critical-mass bisection"},
    {"grid_n", ParamType::integer, 2000, "grid points"},
};

const std::vector<ParamSpec> kTfw{
    {"Z", ParamType::number, 1.0, "nuclear charge"},
    {"sweep", ParamType::number_list, null(), "increasing Z values for an excess-charge sweep"},
    {"ctf", ParamType::number, kTfConstant, "Thomas-Fermi constant"},
    {"cw", ParamType::number, 1.0, "von Weizsaecker constant"},
    {"grid_n", ParamType::integer, 4000, "grid points of a single solve"},
};

const std::vector<ParamSpec> kHf{
    {"z", ParamType::number, 2.0, "nuclear charge"},
    {"exponents", ParamType::number_list, Json::array({0.3, 1.2, 4.8}), "Gaussian exponents"},
    {"n", ParamType::integer, 2, "electron number"},
    {"scan", ParamType::boolean, false, "exact ground energies of every particle sector"},
};

const std::vector<ParamSpec> kBeta{
    {"n", ParamType::integer, 50, "number of points"},
    {"restarts", ParamType::integer, 20, "random restarts"},
};

const std::vector<ParamSpec> kPairinf{
    {"samples", ParamType::integer, 100000, "random samples"},
};

const std::vector<ParamSpec> kSigal{
    {"n", ParamType::integer, 10, "number of points"},
    {"eps", ParamType::number, 0.1, "epsilon of the improved inequality"},
    {"trials", ParamType::integer, 1000, "random configurations"},
    {"improved", ParamType::boolean, false, "use the charge (1 - eps) N"},
};

const std::vector<ParamSpec> kDrop{
    {"m", ParamType::number, 1.0, "volume"},
    {"split", ParamType::number, null(), "mass fraction s for the binding-gap bound"},
    {"check_identities", ParamType::boolean, false, "run the averaging identities"},
    {"z", ParamType::number_list, Json::array({0.0, 0.0, 1.0}), "vector for the cutting identity"},
    {"mc_nodes", ParamType::integer, 100000, "Monte Carlo directions for the cutting identity"},
};

const std::vector<ParamSpec> kOpcheck{
    {"grid_n", ParamType::integer, 2000, "grid points"},
    {"rmin", ParamType::number, 1e-4, "grid start"},
    {"rmax", ParamType::number, 1e2, "grid end"},
};

bool matches(const ParamSpec& spec, const Json& v) {
  switch (spec.type) {
    case ParamType::number:
      return v.is_number();
    case ParamType::integer:
      return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    case ParamType::boolean:
      return v.is_boolean();
    case ParamType::number_list:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_number()) return false;
      }
      return true;
  }
  return false;
}

Json normalize(const ParamSpec& spec, const Json& v) {
  switch (spec.type) {
    case ParamType::number:
      return v.get<double>();
    case ParamType::integer:
      return static_cast<std::int64_t>(v.get<double>());
    case ParamType::number_list: {
      Json out = Json::array();
      for (const auto& e : v) out.push_back(e.get<double>());
      return out;
    }
    case ParamType::boolean:
      break;
  }
  return v;
}

double num(const Json& p, const char* key) { return p.at(key).get<double>(); }
std::int64_t integer(const Json& p, const char* key) { return p.at(key).get<std::int64_t>(); }
std::vector<double> list(const Json& p, const char* key) {
  return p.at(key).get<std::vector<double>>();
}

std::size_t positive_count(const Json& p, const char* key) {
  const auto v = integer(p, key);
  if (v < 1) throw ParameterError(std::string(key) + " must be positive");
  return static_cast<std::size_t>(v);
}

Json vector_json(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

void run_tf(const Json& p, RunReport& rep) {
  TFParams params{num(p, "Z"), num(p, "N")};
  params.validate();
  const std::size_t n = positive_count(p, "grid_n");
  GridPtr grid = tf_grid(params.Z, n);
  if (!p["rmin"].is_null() || !p["rmax"].is_null()) {
    const double lo = p["rmin"].is_null() ? grid->r_min() : num(p, "rmin");
    const double hi = p["rmax"].is_null() ? grid->r_max() : num(p, "rmax");
    grid = make_log_grid(lo, hi, n);
  }
  TFOptions opts;
  opts.tol = num(p, "tol");
  const auto sol = solve_tf(params, grid, opts);
  rep.payload["Z"] = params.Z;
  rep.payload["N"] = params.N;
  rep.payload["mu"] = sol.mu;
  rep.payload["mass"] = sol.mass;
  rep.payload["energy"] = sol.energy;
  rep.payload["residual"] = sol.residual;
  std::vector<std::vector<double>> rows;
  rows.reserve(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    rows.push_back({grid->r(i), sol.rho[i], sol.phi[i]});
  }
  rep.payload["table"] = make_table({"r", "rho", "phi"}, rows);
  rep.diagnostics["iterations"] = sol.iterations;
  rep.diagnostics["residual"] = sol.residual;
  rep.diagnostics["grid"] = grid->describe();
}

void run_hartree(const Json& p, RunReport& rep) {
  const bool want_tc = p.at("tc").get<bool>();
  if (!want_tc && p["t"].is_null()) throw ParameterError("hartree needs t or tc");
  const auto grid = hartree_grid(positive_count(p, "grid_n"));
  if (want_tc) {
    const double tol = num(p, "tol");
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    rep.payload["tc"] = compute_tc(grid, tol);
    rep.payload["tc_tol"] = tol;
  }
  if (!p["t"].is_null()) {
    const auto ts = list(p, "t");
    if (ts.empty()) throw ParameterError("t list is empty");
    for (double t : ts) {
      if (!(t > 0.0)) throw ParameterError("t values must be positive");
    }
    const auto curve = e_curve(ts, grid);
    std::vector<std::vector<double>> rows;
    for (const auto& c : curve) rows.push_back({c.t, c.e, c.mu, c.bound_mass});
    rep.payload["table"] = make_table({"t", "e", "mu", "bound_mass"}, rows);
  }
  rep.diagnostics["grid"] = grid->describe();
}

void run_tfw(const Json& p, RunReport& rep) {
  TFWParams params;
  params.Z = num(p, "Z");
  params.c_tf = num(p, "ctf");
  params.c_w = num(p, "cw");
  params.validate();
  const std::size_t n = positive_count(p, "grid_n");
  rep.payload["ctf"] = params.c_tf;
  rep.payload["cw"] = params.c_w;
  if (!p["sweep"].is_null()) {
    const auto zs = list(p, "sweep");
    const auto rows = excess_charge_sweep(zs, params, {});
    std::vector<std::vector<double>> table;
    for (const auto& r : rows) table.push_back({r.Z, r.q, r.u_at_1, r.phi_at_1});
    const auto trend = sweep_trend(rows);
    rep.payload["contracting"] = {{"q", trend.q}, {"u_at_1", trend.u_at_1}, {"phi_at_1", trend.phi_at_1}};
    rep.payload["table"] = make_table({"Z", "q", "u_at_1", "phi_at_1"}, table);
    return;
  }
  const auto grid = tfw_grid(params.Z, n);
  const auto sol = solve_tfw(params, grid);
  const auto maj = subharmonic_majorant_check(sol);
  rep.payload["Z"] = params.Z;
  rep.payload["q"] = sol.q;
  rep.payload["n_c"] = sol.n_c;
  rep.payload["energy"] = sol.energy;
  rep.payload["u_at_1"] = sol.u.at(1.0);
  rep.payload["phi_at_1"] = sol.phi.at(1.0);
  rep.payload["majorant"] = {{"q_bound", maj.q_bound}, {"monotone", maj.monotone}, {"passed", maj.passed}};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid->size(); ++i) rows.push_back({grid->r(i), sol.u[i], sol.phi[i]});
  rep.payload["table"] = make_table({"r", "u", "phi"}, rows);
  rep.diagnostics["iterations"] = sol.iterations;
  rep.diagnostics["residual"] = sol.residual;
  rep.diagnostics["grid"] = grid->describe();
}

void run_hf(const Json& p, std::uint64_t seed, RunReport& rep) {
  const auto basis = build_sgauss_basis(num(p, "z"), list(p, "exponents"));
  const auto n = integer(p, "n");
  if (n < 1 || n > basis.dim()) throw ParameterError("n must lie in 1..number of exponents");
  HFOptions opts;
  opts.seed = seed;
  const double ed = exact_diagonalization(basis, static_cast<int>(n));
  const auto scf = solve_hf_scf(basis, static_cast<int>(n), opts);
  const auto relaxed = solve_hf_relaxed(basis, static_cast<int>(n), opts);
  rep.payload["z"] = num(p, "z");
  rep.payload["n"] = n;
  rep.payload["E_HF"] = scf.energy;
  rep.payload["E_HF_relaxed"] = relaxed.energy;
  rep.payload["E_N"] = ed;
  rep.payload["lieb_deviation"] = std::abs(relaxed.energy - scf.energy);
  rep.payload["variational"] = ed <= scf.energy + 1e-9 * (1.0 + std::abs(scf.energy));
  if (p.at("scan").get<bool>()) {
    const auto spec = spectrum_scan(basis);
    Json rows = Json::array();
    for (std::size_t k = 0; k < spec.energies.size(); ++k) {
      rows.push_back(Json::array({k, spec.energies[k]}));
    }
    rep.payload["monotonicity_violations"] = spec.monotonicity_violations;
    rep.payload["convexity_violations"] = spec.convexity_violations;
    rep.payload["table"] = {{"columns", {"N", "E_N"}}, {"rows", rows}};
  }
  rep.diagnostics["scf_iterations"] = scf.iterations;
  rep.diagnostics["scf_residual"] = scf.residual;
  rep.diagnostics["relaxed_iterations"] = relaxed.iterations;
  rep.diagnostics["relaxed_gap"] = relaxed.residual;
  rep.diagnostics["overlap_condition_limit"] = kMaxOverlapCondition;
}

void run_beta(const Json& p, std::uint64_t seed, RunReport& rep) {
  const auto n = positive_count(p, "n");
  if (n < 2) throw ParameterError("beta needs n >= 2");
  const auto restarts = positive_count(p, "restarts");
  const auto res = beta_optimize(n, static_cast<int>(restarts), seed);
  rep.payload["n"] = n;
  rep.payload["beta"] = res.best_value;
  rep.payload["floor"] = beta_floor(n);
  rep.payload["restart_values"] = res.restart_values;
  Json pts = Json::array();
  for (const auto& x : res.best_config.points) pts.push_back(vector_json(x));
  rep.payload["best_config"] = pts;
}

void run_pairinf(const Json& p, std::uint64_t seed, RunReport& rep) {
  const auto res = pair_infimum_scan(positive_count(p, "samples"), seed);
  rep.payload["min_found"] = res.min_found;
  rep.payload["x"] = vector_json(res.x);
  rep.payload["y"] = vector_json(res.y);
}

void run_sigal(const Json& p, std::uint64_t seed, RunReport& rep) {
  const auto n = positive_count(p, "n");
  if (n < 2) throw ParameterError("sigal needs n >= 2");
  const double eps = num(p, "eps");
  const bool improved = p.at("improved").get<bool>();
  const auto res = sigal_trials(n, eps, improved, positive_count(p, "trials"), seed);
  rep.payload["n"] = n;
  rep.payload["mode"] = improved ? "improved" : "basic";
  rep.payload["charge"] = improved ? (1.0 - eps) * static_cast<double>(n) : sigal_basic_charge(n);
  rep.payload["trials"] = res.trials;
  rep.payload["passed"] = res.passed;
  rep.payload["worst_margin"] = res.worst_margin;
  rep.payload["failures"] = res.failures;
}

void run_drop(const Json& p, std::uint64_t seed, RunReport& rep) {
  const double m = num(p, "m");
  const auto ball = ball_energy(m);
  rep.payload["m"] = m;
  rep.payload["perimeter"] = ball.perimeter;
  rep.payload["coulomb"] = ball.coulomb;
  rep.payload["total"] = ball.total;
  rep.payload["mstar"] = mstar();
  rep.payload["nonexistence_certificate"] = nonexistence_certificate(m);
  if (!p["split"].is_null()) {
    const double s = num(p, "split");
    rep.payload["split"] = {{"s", s},
                            {"f", f_of_s(s)},
                            {"binding_gap_lower_bound", binding_gap_lower_bound(m, s)}};
  }
  if (p.at("check_identities").get<bool>()) {
    const auto z = list(p, "z");
    if (z.size() != 3) throw ParameterError("z must have three components");
    const auto mc = static_cast<std::size_t>(std::max<std::int64_t>(0, integer(p, "mc_nodes")));
    const auto c = cutting_identities_check(Eigen::Vector3d(z[0], z[1], z[2]), mc, seed);
    rep.payload["identities"] = {{"cutting_quadrature", c.quadrature},
                                 {"cutting_exact", c.exact},
                                 {"cutting_monte_carlo", c.monte_carlo},
                                 {"cutting_mc_std_error", c.mc_std_error},
                                 {"slice_integral", c.slice_integral},
                                 {"ball_volume", c.ball_volume}};
  }
}

void run_opcheck(const Json& p, RunReport& rep) {
  const auto grid = make_log_grid(num(p, "rmin"), num(p, "rmax"), positive_count(p, "grid_n"));
  const auto ims = check_ims_x2(grid, 1e-2);
  const std::vector<InequalityReport> reports{
      check_hardy(grid, 1e-2), check_lieb_symmetrization(grid, 1e-2), ims.bound_check,
      check_double_commutator_cube(grid, 1e-1)};
  Json arr = Json::array();
  Json rows = Json::array();
  for (const auto& r : reports) {
    nlohmann::json j = r;
    arr.push_back(Json::parse(j.dump()));
    rows.push_back(Json::array({r.name, r.extremal_eigenvalue, r.bound, r.tolerance, r.passed}));
  }
  rep.payload["reports"] = arr;
  rep.payload["ims_identity_deviation"] = ims.identity_deviation;
  rep.payload["table"] = {{"columns", {"name", "extremal_eigenvalue", "bound", "tolerance", "passed"}},
                          {"rows", rows}};
  rep.diagnostics["grid"] = grid->describe();
}

}  // namespace

const std::vector<ParamSpec>& parameter_schema(Command c) {
  switch (c) {
    case Command::tf: return kTf;
    case Command::hartree: return kHartree;
    case Command::tfw: return kTfw;
    case Command::hf: return kHf;
    case Command::beta: return kBeta;
    case Command::pairinf: return kPairinf;
    case Command::sigal: return kSigal;
    case Command::drop: return kDrop;
    case Command::opcheck: return kOpcheck;
  }
  throw ParameterError("unknown command");
}

Json parse_parameter(const ParamSpec& spec, const std::string& text) {
  const auto bad = [&] { return ParameterError("invalid value '" + text + "' for " + spec.key); };
  const auto parse_number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != s.size()) throw bad();
    return v;
  };
  switch (spec.type) {
    case ParamType::number:
      return parse_number(text);
    case ParamType::integer: {
      const double v = parse_number(text);
      if (std::floor(v) != v) throw bad();
      return static_cast<std::int64_t>(v);
    }
    case ParamType::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw bad();
    case ParamType::number_list: {
      Json out = Json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
      if (out.empty()) throw bad();
      return out;
    }
  }
  throw bad();
}

RunConfig validate_config(const RunConfig& config) {
  if (!config.parameters.is_object()) throw ParameterError("parameters must be an object");
  const auto& schema = parameter_schema(config.command);
  for (const auto& [key, value] : config.parameters.items()) {
    const auto it = std::find_if(schema.begin(), schema.end(),
                                 [&](const ParamSpec& s) { return s.key == key; });
    if (it == schema.end()) {
      throw ParameterError("unknown parameter '" + key + "' for " + to_string(config.command));
    }
    if (!value.is_null() && !matches(*it, value)) {
      throw ParameterError("parameter '" + key + "' has the wrong type");
    }
  }
  RunConfig out = config;
  out.parameters = Json::object();
  for (const auto& spec : schema) {
    const auto it = config.parameters.find(spec.key);
    const Json& v = (it != config.parameters.end() && !it->is_null()) ? *it : spec.default_value;
    out.parameters[spec.key] = v.is_null() ? v : normalize(spec, v);
  }
  return out;
}

RunReport run(const RunConfig& config) {
  RunReport rep;
  rep.config = validate_config(config);
  rep.version = tool_version();
  const Json& p = rep.config.parameters;
  const auto t0 = Clock::now();
  switch (rep.config.command) {
    case Command::tf: run_tf(p, rep); break;
    case Command::hartree: run_hartree(p, rep); break;
    case Command::tfw: run_tfw(p, rep); break;
    case Command::hf: run_hf(p, rep.config.seed, rep); break;
    case Command::beta: run_beta(p, rep.config.seed, rep); break;
    case Command::pairinf: run_pairinf(p, rep.config.seed, rep); break;
    case Command::sigal: run_sigal(p, rep.config.seed, rep); break;
    case Command::drop: run_drop(p, rep.config.seed, rep); break;
    case Command::opcheck: run_opcheck(p, rep); break;
  }
  rep.timings["total"] = seconds_since(t0);
  return rep;
}

}  // namespace ionlab
