#include "nadd/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nadd::cli {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kLimsupWarning =
    "pressure of a sequence and Gibbs constants are limsup quantities; values here are "
    "finite-horizon estimates";
constexpr const char* kTailWarning =
    "certificate tail_bound is an empirical bound for the limsup defect, not a proof";
constexpr const char* kGluingWarning =
    "the Fekete enclosure assumes free cylinder gluing, which is exact on full shifts only";
constexpr const char* kGibbsFooter =
    "finite-horizon K_n evidence cannot decide whether the measure admits a potential with "
    "uniformly bounded constants";

struct Effective {
  Sft sft = Sft::full_shift(1);
  Json config;  // echo with defaults applied
  double tol = kDefaultTolerance;
  std::uint64_t cap = kDefaultWordCap;
  std::vector<std::string> warnings;
};

const Json& need(const Json& config, const char* key) {
  if (!config.contains(key))
    throw ConfigError(std::string("config.") + key + ": required for this command");
  return config[key];
}

Json params_of(const Json& config) {
  return config.contains("params") ? config["params"] : Json::object();
}

int param_int(const Json& params, const char* key, int fallback) {
  return params.contains(key) ? params[key].get<int>() : fallback;
}

// Representative potential for a command that accepts either a potential or
// a sequence; sequences go through the equivalence pipeline first.
struct ResolvedPotential {
  LocallyConstantPotential potential;
  double band = 0.0;
  std::optional<Json> certificate;
};

ResolvedPotential resolve_potential(const Effective& eff, const Json& node, const Json& params,
                                    std::vector<std::string>& warnings) {
  if (node.contains("potential"))
    return {potential_from_json(eff.sft, node["potential"]), 0.0, std::nullopt};
  if (node.contains("sequence")) {
    PotentialSequence seq = sequence_from_json(eff.sft, node["sequence"]);
    std::vector<int> k_grid =
        params.contains("k_grid") ? int_grid_from_json(params["k_grid"]) : std::vector<int>{2, 4, 8};
    const int n_max = param_int(params, "n_max", 16);
    const double tol = params.contains("tol")
                           ? params["tol"].get<double>()
                           : (seq.kind() == SequenceKind::additive ? 1e-9 : 1e-2);
    auto cert = construct_equivalent(seq, k_grid, n_max, tol, eff.cap);
    warnings.push_back(kTailWarning);
    return {cert.representative, cert.tail_bound, to_json(cert)};
  }
  throw ConfigError("config: need a potential or a sequence");
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CommandResult {
  Json results;
  int exit_code = kExitOk;
  std::vector<CsvTable> tables;
};

CommandResult run_seminorm(const Effective& eff, const Json& config, const Json& params) {
  auto f = potential_from_json(eff.sft, need(config, "potential"));
  const int horizon = param_int(params, "trace_horizon", 16);
  auto rep = seminorm_convergence_trace(f, horizon, eff.cap);
  CommandResult out;
  out.results = to_json(rep);
  auto [lo, hi] = invariant_average_range(f, eff.cap);
  out.results["invariant_average_range"] = Json{{"lo", lo}, {"hi", hi}};
  CsvTable t{"seminorm_trace", {"n", "norm_over_n"}, {}};
  for (auto [n, v] : rep.birkhoff_trace)
    t.rows.push_back({std::to_string(n), format_cell(v)});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_equivalent_potential(const Effective& eff, const Json& config,
                                       const Json& params, std::vector<std::string>& warnings) {
  PotentialSequence seq = sequence_from_json(eff.sft, need(config, "sequence"));
  std::vector<int> k_grid =
      params.contains("k_grid") ? int_grid_from_json(params["k_grid"]) : std::vector<int>{2, 4, 8};
  const int n_max = param_int(params, "n_max", 16);
  const double tol = params.contains("tol")
                         ? params["tol"].get<double>()
                         : (seq.kind() == SequenceKind::additive ? 1e-9 : 1e-2);
  auto cert = construct_equivalent(seq, k_grid, n_max, tol, eff.cap);
  warnings.push_back(kTailWarning);
  CommandResult out;
  out.results = to_json(cert);
  CsvTable ct{"cauchy_table", {"k_i", "k_j", "distance"}, {}};
  for (std::size_t i = 0; i < cert.cauchy.k_grid.size(); ++i)
    for (std::size_t j = 0; j < cert.cauchy.k_grid.size(); ++j)
      ct.rows.push_back({std::to_string(cert.cauchy.k_grid[i]),
                         std::to_string(cert.cauchy.k_grid[j]),
                         format_cell(cert.cauchy.dist[i][j])});
  out.tables.push_back(std::move(ct));
  CsvTable dt{"defect_trace", {"n", "delta", "tail_max"}, {}};
  for (std::size_t i = 0; i < cert.defect_trace.points.size(); ++i)
    dt.rows.push_back({std::to_string(cert.defect_trace.points[i].n),
                       format_cell(cert.defect_trace.points[i].delta),
                       format_cell(cert.defect_trace.tail_max[i])});
  out.tables.push_back(std::move(dt));
  return out;
}

CommandResult run_pressure(const Effective& eff, const Json& config, const Json& params,
                           std::vector<std::string>& warnings) {
  CommandResult out;
  if (config.contains("potential")) {
    auto f = potential_from_json(eff.sft, config["potential"]);
    out.results["kind"] = "additive";
    out.results["pressure"] = pressure_additive(f, eff.cap);
    return out;
  }
  PotentialSequence seq = sequence_from_json(eff.sft, need(config, "sequence"));
  const int n_max = param_int(params, "n_max", 12);
  std::optional<double> C;
  if (params.contains("almost_additivity_C")) {
    C = params["almost_additivity_C"].get<double>();
  } else if (params.value("estimate_constant", false)) {
    C = almost_additivity_constant(seq, std::min(n_max, 12), eff.cap, eff.tol).c_estimate;
  }
  auto est = pressure_sequence(seq, n_max, C, eff.cap);
  warnings.push_back(kLimsupWarning);
  if (C && !eff.sft.is_full_shift()) warnings.push_back(kGluingWarning);
  out.results = to_json(est);
  out.results["kind"] = "sequence";
  if (C) out.results["almost_additivity_C"] = *C;
  CsvTable t{"pressure", {"n", "log_Zn_over_n"}, {}};
  for (std::size_t i = 0; i < est.ns.size(); ++i)
    t.rows.push_back({std::to_string(est.ns[i]), format_cell(est.finite_n[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_variational_check(const Effective& eff, const Json& config) {
  auto f = potential_from_json(eff.sft, need(config, "potential"));
  const double residual = variational_check(f, eff.cap);
  CommandResult out;
  out.results["pressure"] = pressure_additive(f, eff.cap);
  auto mu = equilibrium_state(f, eff.cap);
  out.results["entropy"] = entropy(mu);
  out.results["mean"] = integrate(f, mu);
  out.results["residual"] = residual;
  out.results["equilibrium_state"] = to_json(mu);
  return out;
}

CommandResult run_gibbs_check(const Effective& eff, const Json& config, const Json& params,
                              std::vector<std::string>& warnings) {
  CylinderMeasure mu = measure_from_json(need(config, "measure"));
  auto resolved = resolve_potential(eff, config, params, warnings);
  const double p_target = params.contains("p_target") ? params["p_target"].get<double>() : 0.0;
  const int n_max = param_int(params, "gibbs_horizon", 14);
  GibbsThresholds th;
  if (params.contains("gibbs_growth")) th.gibbs_growth = params["gibbs_growth"].get<double>();
  if (params.contains("weak_decay")) th.weak_decay = params["weak_decay"].get<double>();
  auto rep = gibbs_constants(mu, resolved.potential, p_target, n_max, eff.cap, th);
  warnings.push_back(kLimsupWarning);
  warnings.push_back(kGibbsFooter);
  CommandResult out;
  out.results = to_json(rep);
  if (resolved.certificate) out.results["certificate"] = *resolved.certificate;
  out.exit_code = rep.verdict == GibbsVerdict::fails ? kExitFails : kExitOk;
  CsvTable t{"gibbs", {"n", "log_Kn", "trend"}, {}};
  for (std::size_t i = 0; i < rep.ns.size(); ++i)
    t.rows.push_back({std::to_string(rep.ns[i]), format_cell(rep.log_Kn[i]),
                      format_cell(rep.trend[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_quasi_bernoulli(const Effective& eff, const Json& config, const Json& params) {
  CylinderMeasure mu = measure_from_json(need(config, "measure"));
  const int N = param_int(params, "horizon", 12);
  GibbsThresholds th;
  if (params.contains("gibbs_growth")) th.gibbs_growth = params["gibbs_growth"].get<double>();
  if (params.contains("weak_decay")) th.weak_decay = params["weak_decay"].get<double>();
  auto rep = quasi_bernoulli_constants(mu, N, eff.cap, th);
  CommandResult out;
  out.results = to_json(rep);
  out.exit_code = rep.verdict == CouplingVerdict::fails ? kExitFails : kExitOk;
  CsvTable t{"quasi_bernoulli", {"n", "log_Dn"}, {}};
  for (std::size_t i = 0; i < rep.ns.size(); ++i)
    t.rows.push_back({std::to_string(rep.ns[i]), format_cell(rep.log_Dn[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_spectrum(const Effective& eff, const Json& config, const Json& params,
                           std::vector<std::string>& warnings) {
  auto resolved = resolve_potential(eff, config, params, warnings);
  const LocallyConstantPotential& f = resolved.potential;
  auto [lo, hi] = invariant_average_range(f, eff.cap);
  std::vector<double> alpha_grid;
  if (params.contains("alpha_grid")) {
    alpha_grid = grid_from_json(params["alpha_grid"]);
  } else {
    const int n = 41;
    for (int i = 0; i < n; ++i) alpha_grid.push_back(lo + (hi - lo) * i / (n - 1));
  }
  auto sp = entropy_spectrum(f, alpha_grid, resolved.band, eff.cap);
  std::vector<double> q_grid = params.contains("q_grid")
                                   ? grid_from_json(params["q_grid"])
                                   : grid_from_json(Json{{"lo", -8.0}, {"hi", 8.0}, {"count", 33}});
  auto curve = pressure_curve(f, q_grid, eff.cap);
  CommandResult out;
  out.results["spectrum"] = to_json(sp);
  out.results["pressure_curve"] = to_json(curve);
  if (resolved.certificate) out.results["certificate"] = *resolved.certificate;
  CsvTable st{"spectrum", {"alpha", "E", "band"}, {}};
  for (std::size_t i = 0; i < sp.alpha.size(); ++i)
    st.rows.push_back({format_cell(sp.alpha[i]), format_cell(sp.E[i]), format_cell(sp.band)});
  out.tables.push_back(std::move(st));
  CsvTable ct{"pressure_curve", {"q", "P", "dP"}, {}};
  for (std::size_t i = 0; i < curve.q.size(); ++i)
    ct.rows.push_back({format_cell(curve.q[i]), format_cell(curve.P[i]), format_cell(curve.dP[i])});
  out.tables.push_back(std::move(ct));
  return out;
}

CommandResult run_ldp(const Effective& eff, const Json& config, const Json& params,
                      std::vector<std::string>& warnings) {
  auto f = resolve_potential(eff, need(config, "f"), params, warnings);
  auto g = resolve_potential(eff, need(config, "g"), params, warnings);
  auto [lo, hi] = invariant_average_range(f.potential, eff.cap);
  std::vector<double> x_grid;
  if (params.contains("x_grid")) {
    x_grid = grid_from_json(params["x_grid"]);
  } else {
    const int n = 41;
    for (int i = 0; i < n; ++i) x_grid.push_back(lo + (hi - lo) * i / (n - 1));
  }
  auto rate = rate_function(f.potential, g.potential, x_grid, eff.cap);
  CommandResult out;
  out.results = to_json(rate);
  if (f.certificate) out.results["certificate_f"] = *f.certificate;
  if (g.certificate) out.results["certificate_g"] = *g.certificate;
  CsvTable t{"rate", {"x", "I"}, {}};
  for (std::size_t i = 0; i < rate.x.size(); ++i)
    t.rows.push_back({format_cell(rate.x[i]), format_cell(rate.I[i])});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_additivity(const Effective& eff, const Json& config, const Json& params) {
  PotentialSequence seq = sequence_from_json(eff.sft, need(config, "sequence"));
  const int N = param_int(params, "horizon", 10);
  auto rep = almost_additivity_constant(seq, N, eff.cap, eff.tol);
  CommandResult out;
  out.results = to_json(rep);
  CsvTable t{"additivity", {"n", "m", "defect"}, {}};
  for (auto [n, m, v] : rep.table)
    t.rows.push_back({std::to_string(n), std::to_string(m), format_cell(v)});
  out.tables.push_back(std::move(t));
  return out;
}

CommandResult run_variation(const Effective& eff, const Json& config, const Json& params) {
  PotentialSequence seq = sequence_from_json(eff.sft, need(config, "sequence"));
  const int N = param_int(params, "horizon", 10);
  auto rep = variation_profile(seq, N, eff.cap);
  CommandResult out;
  out.results = to_json(rep);
  CsvTable t{"variation", {"n", "var_n", "var_n_over_n"}, {}};
  for (int n = 1; n <= rep.horizon; ++n)
    t.rows.push_back({std::to_string(n), format_cell(rep.var_n[static_cast<std::size_t>(n) - 1]),
                      format_cell(rep.moderate_trend[static_cast<std::size_t>(n) - 1])});
  out.tables.push_back(std::move(t));
  return out;
}

Effective parse_common(const Json& config, const std::string& command, const RunOptions& options) {
  Effective eff;
  if (command != "quasi-bernoulli") {
    eff.sft = sft_from_json(need(config, "sft"));
  } else if (config.contains("sft")) {
    eff.sft = sft_from_json(config["sft"]);
  }
  Json params = params_of(config);
  if (options.tol) params["tol"] = *options.tol;
  if (options.cap) params["cap"] = *options.cap;
  if (params.contains("tol")) eff.tol = params["tol"].get<double>();
  if (params.contains("cap")) eff.cap = params["cap"].get<std::uint64_t>();
  eff.config = config;
  eff.config["params"] = params;
  return eff;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "seminorm",     "equivalent-potential", "pressure", "variational-check", "gibbs-check",
      "quasi-bernoulli", "spectrum",          "ldp",      "additivity",        "variation"};
  return names;
}

std::vector<Diagnostic> validate_config(const Json& config, const std::string& command) {
  std::vector<Diagnostic> out;
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    out.push_back({"command", "unknown command '" + command + "'"});
    return out;
  }
  auto check = [&](const char* path, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.push_back({path, e.what()});
    }
  };
  std::optional<Sft> sft;
  if (command != "quasi-bernoulli" || config.contains("sft"))
    check("config.sft", [&] { sft = sft_from_json(need(config, "sft")); });
  if (config.contains("potential") && sft)
    check("config.potential", [&] { potential_from_json(*sft, config["potential"]); });
  if (config.contains("sequence") && sft)
    check("config.sequence", [&] { sequence_from_json(*sft, config["sequence"]); });
  if (config.contains("measure"))
    check("config.measure", [&] { measure_from_json(config["measure"]); });
  for (const char* side : {"f", "g"}) {
    if (config.contains(side) && sft) {
      check(side, [&] {
        const Json& node = config[side];
        if (node.contains("potential")) potential_from_json(*sft, node["potential"]);
        else if (node.contains("sequence")) sequence_from_json(*sft, node["sequence"]);
        else throw ConfigError("need a potential or a sequence");
      });
    }
  }
  if (config.contains("params")) {
    check("config.params", [&] {
      const Json& p = config["params"];
      if (!p.is_object()) throw ConfigError("params must be an object");
      if (p.contains("k_grid")) {
        auto g = int_grid_from_json(p["k_grid"]);
        if (!std::is_sorted(g.begin(), g.end())) throw ConfigError("k_grid must be sorted");
        for (int k : g)
          if (k < 1) throw ConfigError("k_grid entries must be >= 1");
      }
      if (p.contains("tol") && !(p["tol"].get<double>() > 0))
        throw ConfigError("tol must be positive");
      if (p.contains("cap") && p["cap"].get<std::int64_t>() < 1)
        throw ConfigError("cap must be positive");
    });
  }
  // Command-specific required inputs.
  auto requires_key = [&](const char* key) {
    if (!config.contains(key))
      out.push_back({std::string("config.") + key, "required for command '" + command + "'"});
  };
  if (command == "seminorm" || command == "variational-check") requires_key("potential");
  if (command == "equivalent-potential" || command == "additivity" || command == "variation")
    requires_key("sequence");
  if (command == "gibbs-check" || command == "quasi-bernoulli") requires_key("measure");
  if (command == "pressure" && !config.contains("potential") && !config.contains("sequence"))
    out.push_back({"config", "pressure needs a potential or a sequence"});
  if (command == "gibbs-check" && !config.contains("potential") && !config.contains("sequence"))
    out.push_back({"config", "gibbs-check needs a potential or a sequence"});
  if (command == "spectrum" && !config.contains("potential") && !config.contains("sequence"))
    out.push_back({"config", "spectrum needs a potential or a sequence"});
  if (command == "ldp") {
    requires_key("f");
    requires_key("g");
  }
  return out;
}

ReportDocument run(const Json& config, const std::string& command, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto diagnostics = validate_config(config, command);
  if (!diagnostics.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& d : diagnostics) msg += "\n  " + d.path + ": " + d.message;
    throw ConfigError(msg);
  }
  Effective eff = parse_common(config, command, options);
  const Json params = eff.config["params"];

  CommandResult result;
  if (command == "seminorm") result = run_seminorm(eff, config, params);
  else if (command == "equivalent-potential")
    result = run_equivalent_potential(eff, config, params, eff.warnings);
  else if (command == "pressure") result = run_pressure(eff, config, params, eff.warnings);
  else if (command == "variational-check") result = run_variational_check(eff, config);
  else if (command == "gibbs-check") result = run_gibbs_check(eff, config, params, eff.warnings);
  else if (command == "quasi-bernoulli") result = run_quasi_bernoulli(eff, config, params);
  else if (command == "spectrum") result = run_spectrum(eff, config, params, eff.warnings);
  else if (command == "ldp") result = run_ldp(eff, config, params, eff.warnings);
  else if (command == "additivity") result = run_additivity(eff, config, params);
  else if (command == "variation") result = run_variation(eff, config, params);
  else throw ConfigError("unknown command '" + command + "'");

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

  ReportDocument doc;
  doc.exit_code = result.exit_code;
  doc.doc["command"] = command;
  doc.doc["config"] = eff.config;
  doc.doc["results"] = std::move(result.results);
  doc.doc["warnings"] = eff.warnings;
  doc.doc["provenance"] = Json{{"artifact", "nadd"},
                               {"version", kVersion},
                               {"tolerance", eff.tol},
                               {"cap", eff.cap},
                               {"wall_ms", elapsed.count()}};

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    const fs::path base(options.out_dir);
    {
      const fs::path p = base / (command + ".report.json");
      std::ofstream os(p);
      os << doc.doc.dump(2) << "\n";
      doc.files_written.push_back(p.string());
    }
    for (const CsvTable& t : result.tables) {
      const fs::path p = base / (t.name + ".csv");
      std::ofstream os(p);
      for (std::size_t i = 0; i < t.header.size(); ++i)
        os << (i ? "," : "") << t.header[i];
      os << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
      }
      doc.files_written.push_back(p.string());
    }
  }
  return doc;
}

}  // namespace nadd::cli
