#pragma once

// Declarative front end: a JSON configuration names the model by its symbols
// and selects a command; results leave as CSV or JSON envelopes. Unknown keys
// are rejected, the resolved configuration is echoed back, and identical
// configurations produce byte-identical output.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bioeco/bifurcation.hpp"
#include "bioeco/check.hpp"
#include "bioeco/equilibria.hpp"
#include "bioeco/errors.hpp"
#include "bioeco/harvest.hpp"
#include "bioeco/io.hpp"
#include "bioeco/model.hpp"
#include "bioeco/simulate.hpp"

namespace bioeco {

using json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

struct SimBlock {
  double x0 = 0.0;
  double y0 = 0.0;
  SimConfig config;
  bool operator==(const SimBlock& o) const {
    return x0 == o.x0 && y0 == o.y0 && config.t_end == o.config.t_end &&
           config.rel_tol == o.config.rel_tol && config.abs_tol == o.config.abs_tol &&
           config.max_step == o.config.max_step &&
           config.transient_fraction == o.config.transient_fraction;
  }
};

struct HopfBlock {
  double m_lo = 0.0;
  double m_hi = 0.0;
  int grid_points = 40;
  bool operator==(const HopfBlock&) const = default;
};

struct SweepBlock {
  std::vector<double> m_values;
  bool operator==(const SweepBlock&) const = default;
};

struct CheckBlock {
  unsigned seed = 20240901;
  bool operator==(const CheckBlock&) const = default;
};

struct OutputBlock {
  std::string path;  // empty means stdout
  OutputFormat format = OutputFormat::Json;
  bool operator==(const OutputBlock&) const = default;
};

struct RunConfig {
  ModelParams model{};
  std::optional<EconParams> econ;
  std::optional<SimBlock> sim;
  std::optional<HopfBlock> hopf;
  std::optional<SweepBlock> sweep;
  std::optional<CheckBlock> check;
  std::optional<OutputBlock> output;

  bool operator==(const RunConfig& o) const {
    auto eqm = [](const ModelParams& a, const ModelParams& b) {
      return a.r == b.r && a.k == b.k && a.p == b.p && a.a == b.a && a.m == b.m &&
             a.d == b.d && a.e == b.e && a.q1 == b.q1 && a.q2 == b.q2 && a.E1 == b.E1 &&
             a.E2 == b.E2;
    };
    auto eqe = [](const std::optional<EconParams>& a, const std::optional<EconParams>& b) {
      if (a.has_value() != b.has_value()) return false;
      if (!a) return true;
      return a->p1 == b->p1 && a->p2 == b->p2 && a->c1 == b->c1 && a->c2 == b->c2 &&
             a->delta == b->delta;
    };
    return eqm(model, o.model) && eqe(econ, o.econ) && sim == o.sim && hopf == o.hopf &&
           sweep == o.sweep && check == o.check && output == o.output;
  }
};

struct ResultEnvelope {
  std::string command;
  json inputs_echo;
  json results;
  std::vector<std::string> diagnostics;
};

struct RunOutcome {
  ResultEnvelope envelope;
  int exit_code = 0;  // 0 success, 3 numerical failure
};

namespace cli_detail {

inline double want_number(const json& j, const std::string& ctx, const std::string& key) {
  if (!j.contains(key)) throw MissingSymbol(ctx + " is missing required key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(ctx + "." + key + " must be a number");
  return v.get<double>();
}

inline void reject_unknown(const json& j, const std::string& ctx,
                           const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto& a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw UnknownKey("unknown key '" + key + "' in " + ctx);
  }
}

inline json model_to_json(const ModelParams& m) {
  json j;
  j["r"] = m.r;
  j["k"] = m.k;
  j["p"] = m.p;
  j["a"] = m.a;
  j["m"] = m.m;
  j["d"] = m.d;
  j["e"] = m.e;
  j["q1"] = m.q1;
  j["q2"] = m.q2;
  j["E1"] = m.E1;
  j["E2"] = m.E2;
  return j;
}

inline json config_to_json(const RunConfig& c) {
  json j;
  j["model"] = model_to_json(c.model);
  if (c.econ) {
    json e;
    e["p1"] = c.econ->p1;
    e["p2"] = c.econ->p2;
    e["c1"] = c.econ->c1;
    e["c2"] = c.econ->c2;
    e["delta"] = c.econ->delta;
    j["econ"] = e;
  }
  if (c.sim) {
    json s;
    s["x0"] = c.sim->x0;
    s["y0"] = c.sim->y0;
    s["t_end"] = c.sim->config.t_end;
    s["rel_tol"] = c.sim->config.rel_tol;
    s["abs_tol"] = c.sim->config.abs_tol;
    if (c.sim->config.max_step) s["max_step"] = *c.sim->config.max_step;
    s["transient_fraction"] = c.sim->config.transient_fraction;
    j["sim"] = s;
  }
  if (c.hopf) {
    json h;
    h["m_lo"] = c.hopf->m_lo;
    h["m_hi"] = c.hopf->m_hi;
    h["grid_points"] = c.hopf->grid_points;
    j["hopf"] = h;
  }
  if (c.sweep) {
    j["sweep"] = json{{"m_values", c.sweep->m_values}};
  }
  if (c.check) {
    j["check"] = json{{"seed", c.check->seed}};
  }
  if (c.output) {
    json o;
    o["path"] = c.output->path;
    o["format"] = c.output->format == OutputFormat::Csv ? "csv" : "json";
    j["output"] = o;
  }
  return j;
}

}  // namespace cli_detail

/// Strict parse of a configuration document. Unknown keys and malformed
/// values are rejected with line/field context where the JSON parser
/// provides it.
inline RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("configuration root must be an object");
  cli_detail::reject_unknown(doc, "config",
                             {"model", "econ", "sim", "hopf", "sweep", "check", "output"});
  if (!doc.contains("model")) throw MissingSymbol("config is missing the 'model' block");

  RunConfig cfg;
  {
    const json& m = doc.at("model");
    if (!m.is_object()) throw ParseError("model must be an object");
    cli_detail::reject_unknown(m, "model",
                               {"r", "k", "p", "a", "m", "d", "e", "q1", "q2", "E1", "E2"});
    cfg.model.r = cli_detail::want_number(m, "model", "r");
    cfg.model.k = cli_detail::want_number(m, "model", "k");
    cfg.model.p = cli_detail::want_number(m, "model", "p");
    cfg.model.a = cli_detail::want_number(m, "model", "a");
    cfg.model.m = cli_detail::want_number(m, "model", "m");
    cfg.model.d = cli_detail::want_number(m, "model", "d");
    cfg.model.e = cli_detail::want_number(m, "model", "e");
    cfg.model.q1 = cli_detail::want_number(m, "model", "q1");
    cfg.model.q2 = cli_detail::want_number(m, "model", "q2");
    cfg.model.E1 = cli_detail::want_number(m, "model", "E1");
    cfg.model.E2 = cli_detail::want_number(m, "model", "E2");
  }
  if (doc.contains("econ")) {
    const json& e = doc.at("econ");
    if (!e.is_object()) throw ParseError("econ must be an object");
    cli_detail::reject_unknown(e, "econ", {"p1", "p2", "c1", "c2", "delta"});
    EconParams ec{};
    ec.p1 = cli_detail::want_number(e, "econ", "p1");
    ec.p2 = cli_detail::want_number(e, "econ", "p2");
    ec.c1 = cli_detail::want_number(e, "econ", "c1");
    ec.c2 = cli_detail::want_number(e, "econ", "c2");
    ec.delta = cli_detail::want_number(e, "econ", "delta");
    cfg.econ = ec;
  }
  if (doc.contains("sim")) {
    const json& s = doc.at("sim");
    if (!s.is_object()) throw ParseError("sim must be an object");
    cli_detail::reject_unknown(
        s, "sim", {"x0", "y0", "t_end", "rel_tol", "abs_tol", "max_step", "transient_fraction"});
    SimBlock b;
    b.x0 = cli_detail::want_number(s, "sim", "x0");
    b.y0 = cli_detail::want_number(s, "sim", "y0");
    b.config.t_end = cli_detail::want_number(s, "sim", "t_end");
    if (s.contains("rel_tol")) b.config.rel_tol = cli_detail::want_number(s, "sim", "rel_tol");
    if (s.contains("abs_tol")) b.config.abs_tol = cli_detail::want_number(s, "sim", "abs_tol");
    if (s.contains("max_step")) b.config.max_step = cli_detail::want_number(s, "sim", "max_step");
    if (s.contains("transient_fraction")) {
      b.config.transient_fraction = cli_detail::want_number(s, "sim", "transient_fraction");
    }
    cfg.sim = b;
  }
  if (doc.contains("hopf")) {
    const json& h = doc.at("hopf");
    if (!h.is_object()) throw ParseError("hopf must be an object");
    cli_detail::reject_unknown(h, "hopf", {"m_lo", "m_hi", "grid_points"});
    HopfBlock b;
    b.m_lo = cli_detail::want_number(h, "hopf", "m_lo");
    b.m_hi = cli_detail::want_number(h, "hopf", "m_hi");
    if (h.contains("grid_points")) {
      b.grid_points = static_cast<int>(cli_detail::want_number(h, "hopf", "grid_points"));
    }
    cfg.hopf = b;
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_object()) throw ParseError("sweep must be an object");
    cli_detail::reject_unknown(s, "sweep", {"m_values"});
    if (!s.contains("m_values") || !s.at("m_values").is_array()) {
      throw MissingSymbol("sweep needs an m_values array");
    }
    SweepBlock b;
    for (const auto& v : s.at("m_values")) {
      if (!v.is_number()) throw ParseError("sweep.m_values entries must be numbers");
      b.m_values.push_back(v.get<double>());
    }
    cfg.sweep = b;
  }
  if (doc.contains("check")) {
    const json& cjs = doc.at("check");
    if (!cjs.is_object()) throw ParseError("check must be an object");
    cli_detail::reject_unknown(cjs, "check", {"seed"});
    CheckBlock b;
    if (cjs.contains("seed")) {
      b.seed = static_cast<unsigned>(cli_detail::want_number(cjs, "check", "seed"));
    }
    cfg.check = b;
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (!o.is_object()) throw ParseError("output must be an object");
    cli_detail::reject_unknown(o, "output", {"path", "format"});
    OutputBlock b;
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw ParseError("output.path must be a string");
      b.path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o.at("format").is_string() ? o.at("format").get<std::string>() : "";
      if (f == "csv") {
        b.format = OutputFormat::Csv;
      } else if (f == "json") {
        b.format = OutputFormat::Json;
      } else {
        throw ParseError("output.format must be 'csv' or 'json'");
      }
    }
    cfg.output = b;
  }
  return cfg;
}

/// `--set key=value` overrides applied to the raw document before parsing.
/// Bare model symbols address the model block; dotted paths reach any block.
inline std::string apply_overrides(const std::string& text,
                                   const std::vector<std::string>& sets) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> model_keys = {"r",  "k",  "p",  "a",  "m", "d",
                                                      "e",  "q1", "q2", "E1", "E2"};
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
    std::string path = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    if (path.find('.') == std::string::npos) {
      bool is_model = false;
      for (const auto& mk : model_keys) {
        if (path == mk) {
          is_model = true;
          break;
        }
      }
      if (!is_model) {
        throw UnknownKey("--set key '" + path + "' is not a model symbol; use a dotted path");
      }
      path = "model." + path;
    }
    json value;
    try {
      value = json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
      value = raw;  // bare strings allowed, e.g. output.format=csv
    }
    json* node = &doc;
    std::size_t pos = 0;
    while (true) {
      const auto dot = path.find('.', pos);
      const std::string part = path.substr(pos, dot - pos);
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
      node = &(*node)[part];
      pos = dot + 1;
    }
  }
  return doc.dump();
}

namespace cli_detail {

inline const char* kInteriorNullclineNote =
    "interior solve uses the predator nullcline taken directly from the governing equations: "
    "e*p*(1-m*y)*x/(1+a*x*(1-m*y)) = d + q2*E2";
inline const char* kCaseOneIdentityNote =
    "bionomic case I fixes the prey stock from the zero-rent identity x = c1/(p1*q1)";

inline json stability_json(const Equilibrium& eq, const StabilityReport& rep) {
  json j;
  j["kind"] = to_string(eq.kind);
  j["x"] = eq.point.x;
  j["y"] = eq.point.y;
  j["trace"] = rep.trace;
  j["determinant"] = rep.determinant;
  j["eigenvalues"] = json::array({json::array({rep.eig1.real(), rep.eig1.imag()}),
                                  json::array({rep.eig2.real(), rep.eig2.imag()})});
  j["classification"] = to_string(rep.classification);
  j["degenerate"] = rep.degenerate;
  if (rep.las_sufficient) {
    j["las_sufficient"] = json{{"trace_condition", rep.las_sufficient->trace_condition},
                               {"determinant_condition", rep.las_sufficient->determinant_condition}};
  }
  if (rep.las_window) j["las_window"] = *rep.las_window;
  return j;
}

}  // namespace cli_detail

/// Dispatch a parsed configuration. Module failures land in the diagnostics
/// with exit code 3; reportable non-existence stays data with exit code 0.
inline RunOutcome run(const std::string& command, const RunConfig& cfg) {
  RunOutcome out;
  ResultEnvelope& env = out.envelope;
  env.command = command;
  env.inputs_echo = cli_detail::config_to_json(cfg);

  const ModelParams& P = cfg.model;
  auto require_econ = [&]() -> const EconParams& {
    if (!cfg.econ) throw MissingSymbol("command '" + command + "' needs the econ block");
    return *cfg.econ;
  };

  try {
    P.validate();
    if (command == "equilibria") {
      env.diagnostics.push_back(cli_detail::kInteriorNullclineNote);
      json rows = json::array();
      {
        const auto [eq, rep] = trivial_equilibrium(P);
        (void)rep;
        rows.push_back(json{{"kind", "Trivial"},
                            {"x", 0.0},
                            {"y", 0.0},
                            {"feasible", true},
                            {"notes", json::object()}});
      }
      try {
        const auto [eq, rep] = axial_equilibrium(P);
        (void)rep;
        json notes;
        for (const auto& [k, v] : eq.feasibility_notes) notes[k] = v;
        rows.push_back(json{{"kind", "Axial"},
                            {"x", eq.point.x},
                            {"y", 0.0},
                            {"feasible", eq.feasible},
                            {"notes", notes}});
      } catch (const Infeasible& e) {
        env.diagnostics.push_back(std::string("axial: ") + e.what());
      }
      try {
        const Equilibrium eq = interior_equilibrium(P);
        json notes;
        for (const auto& [k, v] : eq.feasibility_notes) notes[k] = v;
        rows.push_back(json{{"kind", "Interior"},
                            {"x", eq.point.x},
                            {"y", eq.point.y},
                            {"feasible", eq.feasible},
                            {"notes", notes},
                            {"root_count", eq.root_candidates.size()}});
      } catch (const Error& e) {
        env.diagnostics.push_back(std::string("interior: ") + e.what());
      }
      env.results = json{{"equilibria", rows}};
    } else if (command == "stability") {
      env.diagnostics.push_back(cli_detail::kInteriorNullclineNote);
      json rows = json::array();
      {
        const auto [eq, rep] = trivial_equilibrium(P);
        rows.push_back(cli_detail::stability_json(eq, rep));
      }
      try {
        const auto [eq, rep] = axial_equilibrium(P);
        rows.push_back(cli_detail::stability_json(eq, rep));
      } catch (const Infeasible& e) {
        env.diagnostics.push_back(std::string("axial: ") + e.what());
      }
      try {
        const Equilibrium eq = interior_equilibrium(P);
        const StabilityReport rep = classify(P, eq);
        json j = cli_detail::stability_json(eq, rep);
        const GasCheck g = gas_condition(P, eq);
        j["gas"] = json{{"lhs", g.lhs}, {"rhs", g.rhs}, {"holds", g.holds}};
        if (rep.las_sufficient &&
            (rep.las_sufficient->trace_condition && rep.las_sufficient->determinant_condition) !=
                (rep.classification == Classification::StableNode ||
                 rep.classification == Classification::StableFocus)) {
          env.diagnostics.push_back(
              "interior: printed sufficient-condition flags disagree with the eigenvalue "
              "classification; eigenvalues are the ground truth");
        }
        rows.push_back(j);
      } catch (const Error& e) {
        env.diagnostics.push_back(std::string("interior: ") + e.what());
      }
      env.results = json{{"reports", rows}};
    } else if (command == "simulate") {
      if (!cfg.sim) throw MissingSymbol("command 'simulate' needs the sim block");
      Trajectory traj;
      try {
        traj = integrate(P, {cfg.sim->x0, cfg.sim->y0}, cfg.sim->config);
      } catch (const StepFailure& e) {
        traj = e.partial();
        env.diagnostics.push_back(std::string("integration aborted: ") + e.what());
        out.exit_code = 3;
      }
      json samples = json::array();
      bool refuge_left = false;
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        samples.push_back(json::array({traj.times[i], traj.states[i].x, traj.states[i].y,
                                       traj.validity[i].denominator_ok,
                                       traj.validity[i].refuge_ok}));
        refuge_left = refuge_left || !traj.validity[i].refuge_ok;
      }
      if (refuge_left) {
        env.diagnostics.push_back(
            "trajectory entered the region 1 - m*y < 0 where the refuge reading breaks down");
      }
      json res;
      res["columns"] = json::array({"t", "x", "y", "denominator_ok", "refuge_ok"});
      res["samples"] = samples;
      if (out.exit_code == 0) {
        try {
          const CycleReport rep = detect_limit_cycle(traj, cfg.sim->config);
          json c;
          c["verdict"] = to_string(rep.verdict);
          c["amplitude_x"] = rep.amplitude_x;
          c["amplitude_y"] = rep.amplitude_y;
          if (rep.period_estimate) c["period_estimate"] = *rep.period_estimate;
          if (rep.attractor_point) {
            c["attractor"] = json::array({rep.attractor_point->x, rep.attractor_point->y});
          }
          res["cycle"] = c;
        } catch (const TooShort& e) {
          env.diagnostics.push_back(std::string("cycle analysis skipped: ") + e.what());
        }
      }
      env.results = res;
    } else if (command == "hopf") {
      if (!cfg.hopf) throw MissingSymbol("command 'hopf' needs the hopf block");
      env.diagnostics.push_back(cli_detail::kInteriorNullclineNote);
      const HopfScanResult scan =
          hopf_scan(P, cfg.hopf->m_lo, cfg.hopf->m_hi, cfg.hopf->grid_points);
      for (const std::string& s : scan.discarded) env.diagnostics.push_back(s);
      json rows = json::array();
      for (const HopfResult& h : scan.roots) {
        rows.push_back(json{{"m_h", h.m_h},
                            {"x", h.equilibrium_at_mh.x},
                            {"y", h.equilibrium_at_mh.y},
                            {"determinant", h.det_at_mh},
                            {"transversality", h.transversality},
                            {"sigma", h.sigma},
                            {"verdict", to_string(h.verdict)}});
      }
      env.results = json{{"roots", rows}};
    } else if (command == "bionomic") {
      const EconParams& E = require_econ();
      E.validate();
      env.diagnostics.push_back(cli_detail::kCaseOneIdentityNote);
      json rows = json::array();
      for (const BionomicEquilibrium& b : bionomic_equilibrium(P, E)) {
        json j;
        j["case"] = to_string(b.case_id);
        j["exists"] = b.exists;
        if (b.x_inf) j["x_inf"] = *b.x_inf;
        if (b.y_inf) j["y_inf"] = *b.y_inf;
        j["e1_inf"] = b.e1_inf;
        j["e2_inf"] = b.e2_inf;
        json conds;
        for (const auto& [k, v] : b.conditions) conds[k] = v;
        j["conditions"] = conds;
        rows.push_back(j);
      }
      env.results = json{{"cases", rows}};
    } else if (command == "optimal") {
      const EconParams& E = require_econ();
      E.validate();
      env.diagnostics.push_back(cli_detail::kInteriorNullclineNote);
      const OptimalPolicy pol = solve_optimal(P, E);
      env.results = json{{"x_opt", pol.x_opt},       {"y_opt", pol.y_opt},
                         {"e1_opt", pol.e1_opt},     {"e2_opt", pol.e2_opt},
                         {"residual_x", pol.residual_x}, {"residual_y", pol.residual_y}};
    } else if (command == "sweep") {
      if (!cfg.sweep) throw MissingSymbol("command 'sweep' needs the sweep block");
      env.diagnostics.push_back(cli_detail::kInteriorNullclineNote);
      json rows = json::array();
      for (const SweepRow& row : sweep_refuge(P, cfg.sweep->m_values)) {
        json j;
        j["m"] = row.m;
        if (row.star) {
          j["x_star"] = row.star->x;
          j["y_star"] = row.star->y;
          j["classification"] = to_string(*row.classification);
        } else {
          j["classification"] = "absent";
        }
        rows.push_back(j);
      }
      env.results = json{{"rows", rows}};
    } else if (command == "check") {
      const unsigned seed = cfg.check ? cfg.check->seed : 20240901u;
      json rows = json::array();
      bool all_ok = true;
      for (const CheckResult& r : run_all_checks(seed)) {
        rows.push_back(json{{"suite", r.suite}, {"passed", r.passed}, {"detail", r.detail}});
        all_ok = all_ok && r.passed;
      }
      env.results = json{{"suites", rows}, {"all_passed", all_ok}};
      if (!all_ok) out.exit_code = 3;
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const ConfigError&) {
    throw;  // configuration problems surface with exit code 2 at the top level
  } catch (const Error& e) {
    env.diagnostics.push_back(e.what());
    out.exit_code = 3;
  }
  return out;
}

/// Serialize an envelope. CSV holds the command's data table only; JSON
/// carries the envelope with stable key order.
inline std::string emit(const ResultEnvelope& env, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json j;
    j["command"] = env.command;
    j["inputs_echo"] = env.inputs_echo;
    j["results"] = env.results;
    j["diagnostics"] = env.diagnostics;
    return j.dump(2) + "\n";
  }

  using io::boolean;
  using io::csv_row;
  using io::num;
  if (env.results.is_null()) return "";  // failed run: diagnostics only
  std::string out;
  auto cell = [](const json& j, const char* key) -> std::string {
    if (!j.contains(key)) return "";
    const auto& v = j.at(key);
    if (v.is_number()) return io::num(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    return "";
  };

  if (env.command == "sweep") {
    out += csv_row({"m", "x_star", "y_star", "classification"});
    for (const auto& r : env.results.at("rows")) {
      out += csv_row({cell(r, "m"), cell(r, "x_star"), cell(r, "y_star"),
                      cell(r, "classification")});
    }
  } else if (env.command == "simulate") {
    out += csv_row({"t", "x", "y", "valid"});
    for (const auto& s : env.results.at("samples")) {
      out += csv_row({num(s[0].get<double>()), num(s[1].get<double>()),
                      num(s[2].get<double>()), boolean(s[3].get<bool>())});
    }
  } else if (env.command == "equilibria") {
    out += csv_row({"kind", "x", "y", "feasible", "notes"});
    for (const auto& r : env.results.at("equilibria")) {
      std::string notes;
      if (r.contains("notes")) {
        for (const auto& [k, v] : r.at("notes").items()) {
          if (!notes.empty()) notes += ';';
          notes += k + "=" + (v.get<bool>() ? "true" : "false");
        }
      }
      out += csv_row({cell(r, "kind"), cell(r, "x"), cell(r, "y"), cell(r, "feasible"), notes});
    }
  } else if (env.command == "stability") {
    out += csv_row({"kind", "x", "y", "trace", "determinant", "eig1_re", "eig1_im", "eig2_re",
                    "eig2_im", "classification", "las_trace_condition",
                    "las_determinant_condition", "gas_holds"});
    for (const auto& r : env.results.at("reports")) {
      const auto& eig = r.at("eigenvalues");
      std::string las1, las2, gas;
      if (r.contains("las_sufficient")) {
        las1 = r.at("las_sufficient").at("trace_condition").get<bool>() ? "true" : "false";
        las2 = r.at("las_sufficient").at("determinant_condition").get<bool>() ? "true" : "false";
      }
      if (r.contains("gas")) gas = r.at("gas").at("holds").get<bool>() ? "true" : "false";
      out += csv_row({cell(r, "kind"), cell(r, "x"), cell(r, "y"), cell(r, "trace"),
                      cell(r, "determinant"), num(eig[0][0].get<double>()),
                      num(eig[0][1].get<double>()), num(eig[1][0].get<double>()),
                      num(eig[1][1].get<double>()), cell(r, "classification"), las1, las2, gas});
    }
  } else if (env.command == "hopf") {
    out += csv_row({"m_h", "x", "y", "determinant", "transversality", "sigma", "verdict"});
    for (const auto& r : env.results.at("roots")) {
      out += csv_row({cell(r, "m_h"), cell(r, "x"), cell(r, "y"), cell(r, "determinant"),
                      cell(r, "transversality"), cell(r, "sigma"), cell(r, "verdict")});
    }
  } else if (env.command == "bionomic") {
    out += csv_row({"case", "exists", "x_inf", "y_inf", "e1_inf", "e2_inf", "conditions"});
    for (const auto& r : env.results.at("cases")) {
      std::string conds;
      for (const auto& [k, v] : r.at("conditions").items()) {
        if (!conds.empty()) conds += ';';
        conds += k + "=" + (v.get<bool>() ? "true" : "false");
      }
      out += csv_row({cell(r, "case"), cell(r, "exists"), cell(r, "x_inf"), cell(r, "y_inf"),
                      cell(r, "e1_inf"), cell(r, "e2_inf"), conds});
    }
  } else if (env.command == "optimal") {
    out += csv_row({"x_opt", "y_opt", "e1_opt", "e2_opt", "residual_x", "residual_y"});
    out += csv_row({cell(env.results, "x_opt"), cell(env.results, "y_opt"),
                    cell(env.results, "e1_opt"), cell(env.results, "e2_opt"),
                    cell(env.results, "residual_x"), cell(env.results, "residual_y")});
  } else if (env.command == "check") {
    out += csv_row({"suite", "passed", "detail"});
    for (const auto& r : env.results.at("suites")) {
      out += csv_row({cell(r, "suite"), cell(r, "passed"), cell(r, "detail")});
    }
  }
  return out;
}

}  // namespace bioeco
