#include "gstar/harness.hpp"

#include "gstar/hindsight.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace gstar {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": expected numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

// JSON has no literal for non-finite numbers.
json num_to_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double num_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError(where + ": expected a number");
}

json opt_to_json(const std::optional<double>& x) { return x ? num_to_json(*x) : json(nullptr); }

std::optional<double> opt_from_json(const json& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  return num_from_json(j, where);
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

const json& required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  return j.at(key);
}

bool non_negative_integer(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config.

ExperimentConfig parse_config(const json& j) {
  reject_unknown(j, {"schema_version", "instance", "T", "dim", "set", "algorithm", "seeds", "outputs"}, "config");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version");
  ExperimentConfig cfg;

  const auto& inst = required(j, "instance", "config");
  reject_unknown(inst, {"kind", "sigma", "p", "delta", "M"}, "config.instance");
  const auto& kind = required(inst, "kind", "config.instance");
  if (!kind.is_string()) throw ConfigError("config.instance.kind: expected a string");
  cfg.instance.kind = kind.get<std::string>();
  static const std::set<std::string> kinds{"lp_regression",           "cross_entropy",
                                           "prop1_case2",             "prop1_case3",
                                           "prop1_case4",             "lower_bound",
                                           "stochastic_least_squares", "stochastic_noisy_least_squares",
                                           "stochastic_l4"};
  if (!kinds.count(cfg.instance.kind)) throw ConfigError("config.instance.kind: unknown kind '" + cfg.instance.kind + "'");
  if (cfg.instance.kind == "prop1_case2") cfg.instance.p = 1.0 / 6.0;
  if (inst.contains("sigma")) cfg.instance.sigma = number(inst["sigma"], "config.instance.sigma");
  if (inst.contains("p")) cfg.instance.p = number(inst["p"], "config.instance.p");
  if (inst.contains("delta")) cfg.instance.delta = number(inst["delta"], "config.instance.delta");
  if (inst.contains("M")) cfg.instance.M = number(inst["M"], "config.instance.M");
  if (!(cfg.instance.sigma >= 0)) throw ConfigError("config.instance.sigma: must be >= 0");
  if (!(cfg.instance.delta >= 0 && cfg.instance.delta <= 1)) throw ConfigError("config.instance.delta: must be in [0, 1]");
  if (!(cfg.instance.M > 0)) throw ConfigError("config.instance.M: must be > 0");
  if (cfg.instance.kind == "lp_regression" && !(cfg.instance.p >= 2)) throw ConfigError("config.instance.p: must be >= 2");
  if (cfg.instance.kind == "prop1_case2" && !(cfg.instance.p > 0)) throw ConfigError("config.instance.p: must be > 0");

  const auto& T = required(j, "T", "config");
  auto push_T = [&](const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError("config.T: expected positive integers");
    cfg.T.push_back(v.get<int>());
  };
  if (T.is_array()) {
    for (const auto& v : T) push_T(v);
  } else {
    push_T(T);
  }
  if (cfg.T.empty()) throw ConfigError("config.T: empty");

  const bool one_d = cfg.instance.kind.rfind("prop1_", 0) == 0;
  cfg.dim = one_d ? 1 : 2;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) throw ConfigError("config.dim: expected a positive integer");
    cfg.dim = j["dim"].get<int>();
    if (one_d && cfg.dim != 1) throw ConfigError("config.dim: prop1_* instances are one-dimensional");
  }

  if (j.contains("set")) {
    cfg.set = set_from_json(j["set"]);
    if (cfg.set->dim() != cfg.dim) throw ConfigError("config.set: dimension does not match dim");
  }

  const auto& alg = required(j, "algorithm", "config");
  reject_unknown(alg, {"name", "eta", "alpha", "lambda", "delta_mode"}, "config.algorithm");
  const auto& name = required(alg, "name", "config.algorithm");
  if (!name.is_string()) throw ConfigError("config.algorithm.name: expected a string");
  cfg.algorithm.name = name.get<std::string>();
  static const std::set<std::string> algs{"ogd", "adagrad_norm", "adaftrl", "sword"};
  if (!algs.count(cfg.algorithm.name)) throw ConfigError("config.algorithm.name: unknown algorithm '" + cfg.algorithm.name + "'");
  auto positive = [&](const char* key) -> std::optional<double> {
    if (!alg.contains(key)) return std::nullopt;
    const double v = number(alg[key], std::string("config.algorithm.") + key);
    if (!(v > 0)) throw ConfigError(std::string("config.algorithm.") + key + ": must be > 0");
    return v;
  };
  if (alg.contains("eta") && !(alg["eta"].is_string() && alg["eta"] == "tuned")) cfg.algorithm.eta = positive("eta");
  cfg.algorithm.alpha = positive("alpha");
  cfg.algorithm.lambda = positive("lambda");
  if (alg.contains("delta_mode")) {
    const auto& m = alg["delta_mode"];
    if (!m.is_string() || (m != "oracle" && m != "time_varying"))
      throw ConfigError("config.algorithm.delta_mode: expected 'oracle' or 'time_varying'");
    cfg.algorithm.delta_mode = m.get<std::string>();
  }
  if (cfg.algorithm.name == "adaftrl") {
    const ConstraintSet s = cfg.set ? *cfg.set : natural_set(cfg.instance, cfg.dim);
    const Ball* b = s.as_ball();
    if (b == nullptr || b->center.squaredNorm() != 0.0) throw ConfigError("config.set: adaftrl needs a ball centered at the origin");
    const double D = s.diameter();
    if (cfg.algorithm.lambda && *cfg.algorithm.lambda < 1.0 / (2.0 * D * D))
      throw ConfigError("config.algorithm.lambda: must be at least 1/(2 D^2)");
  }

  const auto& seeds = required(j, "seeds", "config");
  if (seeds.is_array()) {
    for (const auto& s : seeds) {
      if (!non_negative_integer(s)) throw ConfigError("config.seeds: expected non-negative integers");
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  } else if (seeds.is_object()) {
    reject_unknown(seeds, {"count", "start"}, "config.seeds");
    const auto& c = required(seeds, "count", "config.seeds");
    if (!non_negative_integer(c)) throw ConfigError("config.seeds.count: expected a non-negative integer");
    std::uint64_t start = 0;
    if (seeds.contains("start")) {
      if (!non_negative_integer(seeds["start"])) throw ConfigError("config.seeds.start: expected a non-negative integer");
      start = seeds["start"].get<std::uint64_t>();
    }
    for (std::uint64_t i = 0; i < c.get<std::uint64_t>(); ++i) cfg.seeds.push_back(start + i);
  } else {
    throw ConfigError("config.seeds: expected an array or {count, start}");
  }
  if (cfg.seeds.empty()) throw ConfigError("config.seeds: empty");

  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    reject_unknown(o, {"csv", "json", "trace_dir"}, "config.outputs");
    auto str = [&](const char* key, std::string& dst) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) throw ConfigError(std::string("config.outputs.") + key + ": expected a string");
      dst = o[key].get<std::string>();
    };
    str("csv", cfg.outputs.csv);
    str("json", cfg.outputs.json);
    str("trace_dir", cfg.outputs.trace_dir);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["instance"] = {{"kind", cfg.instance.kind},
                   {"sigma", cfg.instance.sigma},
                   {"p", cfg.instance.p},
                   {"delta", cfg.instance.delta},
                   {"M", cfg.instance.M}};
  j["T"] = cfg.T;
  j["dim"] = cfg.dim;
  if (cfg.set) j["set"] = set_to_json(*cfg.set);
  json a{{"name", cfg.algorithm.name}, {"delta_mode", cfg.algorithm.delta_mode}};
  if (cfg.algorithm.eta) a["eta"] = *cfg.algorithm.eta;
  if (cfg.algorithm.alpha) a["alpha"] = *cfg.algorithm.alpha;
  if (cfg.algorithm.lambda) a["lambda"] = *cfg.algorithm.lambda;
  j["algorithm"] = a;
  j["seeds"] = cfg.seeds;
  json o = json::object();
  if (!cfg.outputs.csv.empty()) o["csv"] = cfg.outputs.csv;
  if (!cfg.outputs.json.empty()) o["json"] = cfg.outputs.json;
  if (!cfg.outputs.trace_dir.empty()) o["trace_dir"] = cfg.outputs.trace_dir;
  j["outputs"] = o;
  return j;
}

// ---------------------------------------------------------------------------
// Reports.

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "seed,T,algorithm,rho_T,L_star,G_star,bound_gstar,bound_lstar,audit_pass,wall_ms\n";
  for (const auto& r : report.rows) {
    os << r.seed << ',' << r.T << ',' << r.algorithm << ',' << fmt17(r.rho_T) << ','
       << (r.L_star ? fmt17(*r.L_star) : "") << ',' << fmt17(r.G_star) << ',' << fmt17(r.bound_gstar) << ','
       << (r.bound_lstar ? fmt17(*r.bound_lstar) : "") << ',' << (r.audit_pass ? "true" : "false") << ','
       << fmt17(r.wall_ms) << '\n';
  }
  return os.str();
}

json report_to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"seed", r.seed},
                    {"T", r.T},
                    {"algorithm", r.algorithm},
                    {"rho_T", num_to_json(r.rho_T)},
                    {"L_star", opt_to_json(r.L_star)},
                    {"G_star", num_to_json(r.G_star)},
                    {"bound_gstar", num_to_json(r.bound_gstar)},
                    {"bound_lstar", opt_to_json(r.bound_lstar)},
                    {"audit_pass", r.audit_pass},
                    {"wall_ms", num_to_json(r.wall_ms)}});
  }
  json summary = json::array();
  for (const auto& s : report.summary) {
    summary.push_back({{"name", s.name},
                       {"measured", num_to_json(s.measured)},
                       {"bound", num_to_json(s.bound)},
                       {"lower", s.lower},
                       {"pass", s.pass}});
  }
  return {{"schema_version", kSchemaVersion}, {"rows", rows}, {"summary", summary}, {"all_pass", report.all_pass()}};
}

ExperimentReport report_from_json(const json& j) {
  if (!j.is_object() || j.value("schema_version", -1) != kSchemaVersion)
    throw ConfigError("report: missing or unsupported schema_version");
  ExperimentReport rep;
  for (const auto& r : j.at("rows")) {
    ReportRow row;
    row.seed = r.at("seed").get<std::uint64_t>();
    row.T = r.at("T").get<int>();
    row.algorithm = r.at("algorithm").get<std::string>();
    row.rho_T = num_from_json(r.at("rho_T"), "rho_T");
    row.L_star = opt_from_json(r.at("L_star"), "L_star");
    row.G_star = num_from_json(r.at("G_star"), "G_star");
    row.bound_gstar = num_from_json(r.at("bound_gstar"), "bound_gstar");
    row.bound_lstar = opt_from_json(r.at("bound_lstar"), "bound_lstar");
    row.audit_pass = r.at("audit_pass").get<bool>();
    row.wall_ms = num_from_json(r.at("wall_ms"), "wall_ms");
    rep.rows.push_back(std::move(row));
  }
  if (j.contains("summary")) {
    for (const auto& s : j.at("summary")) {
      rep.summary.push_back(SummaryAudit{s.at("name").get<std::string>(), num_from_json(s.at("measured"), "measured"),
                                         num_from_json(s.at("bound"), "bound"), s.at("lower").get<bool>(),
                                         s.at("pass").get<bool>()});
    }
  }
  return rep;
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open report for writing: " + path.string());
  if (format == ReportFormat::Csv) {
    out << report_to_csv(report);
  } else {
    out << report_to_json(report).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing report: " + path.string());
}

// ---------------------------------------------------------------------------
// Serialization of instances and traces.

json loss_to_json(const LossFn& f) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LpRegression>) return {{"kind", "lp_regression"}, {"a", vec_to_json(v.a)}, {"b", v.b}, {"p", v.p}};
        if constexpr (std::is_same_v<T, CrossEntropy>) return {{"kind", "cross_entropy"}, {"a", vec_to_json(v.a)}, {"y", v.y}};
        if constexpr (std::is_same_v<T, Exponential>) return {{"kind", "exponential"}, {"a", vec_to_json(v.a)}};
        if constexpr (std::is_same_v<T, ScaledQuadratic>) return {{"kind", "scaled_quadratic"}, {"a", v.a}};
        if constexpr (std::is_same_v<T, QuadraticResidual>) return {{"kind", "quadratic_residual"}, {"a", v.a}, {"b", v.b}};
        if constexpr (std::is_same_v<T, Linear>) return {{"kind", "linear"}, {"g", vec_to_json(v.g)}};
        if constexpr (std::is_same_v<T, SquaredDistance>) return {{"kind", "squared_distance"}, {"center", vec_to_json(v.center)}};
      },
      f.variant());
}

LossFn loss_from_json(const json& j) {
  const std::string kind = required(j, "kind", "loss").get<std::string>();
  auto num = [&](const char* k) { return number(required(j, k, "loss"), std::string("loss.") + k); };
  auto vec = [&](const char* k) { return vec_from_json(required(j, k, "loss"), std::string("loss.") + k); };
  if (kind == "lp_regression") return LossFn(LpRegression{vec("a"), num("b"), num("p")});
  if (kind == "cross_entropy") return LossFn(CrossEntropy{vec("a"), num("y")});
  if (kind == "exponential") return LossFn(Exponential{vec("a")});
  if (kind == "scaled_quadratic") return LossFn(ScaledQuadratic{num("a")});
  if (kind == "quadratic_residual") return LossFn(QuadraticResidual{num("a"), num("b")});
  if (kind == "linear") return LossFn(Linear{vec("g")});
  if (kind == "squared_distance") return LossFn(SquaredDistance{vec("center")});
  throw ConfigError("loss: unknown kind '" + kind + "'");
}

json set_to_json(const ConstraintSet& s) {
  if (const Ball* b = s.as_ball()) return {{"type", "ball"}, {"center", vec_to_json(b->center)}, {"radius", b->radius}};
  const Box* b = s.as_box();
  return {{"type", "box"}, {"lower", vec_to_json(b->lower)}, {"upper", vec_to_json(b->upper)}};
}

ConstraintSet set_from_json(const json& j) {
  const auto& type = required(j, "type", "set");
  if (type == "ball") {
    reject_unknown(j, {"type", "center", "radius", "dim"}, "set");
    const double r = number(required(j, "radius", "set"), "set.radius");
    if (!(r > 0)) throw ConfigError("set.radius: must be > 0");
    if (j.contains("center")) return ConstraintSet::ball(vec_from_json(j["center"], "set.center"), r);
    const auto& d = required(j, "dim", "set");
    if (!d.is_number_integer() || d.get<int>() < 1) throw ConfigError("set.dim: expected a positive integer");
    return ConstraintSet::ball(d.get<int>(), r);
  }
  if (type == "box") {
    reject_unknown(j, {"type", "lower", "upper"}, "set");
    Vec lo = vec_from_json(required(j, "lower", "set"), "set.lower");
    Vec hi = vec_from_json(required(j, "upper", "set"), "set.upper");
    if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) throw ConfigError("set: need lower <= upper of equal length");
    return ConstraintSet::box(std::move(lo), std::move(hi));
  }
  throw ConfigError("set.type: expected 'ball' or 'box'");
}

json trace_to_json(const Trace& t) {
  json losses = json::array();
  for (const auto& f : t.losses) losses.push_back(loss_to_json(f));
  json iterates = json::array();
  for (const auto& x : t.iterates) iterates.push_back(vec_to_json(x));
  json alg{{"name", t.algorithm.name}, {"delta_mode", t.algorithm.delta_mode}};
  if (t.algorithm.eta) alg["eta"] = *t.algorithm.eta;
  if (t.algorithm.alpha) alg["alpha"] = *t.algorithm.alpha;
  if (t.algorithm.lambda) alg["lambda"] = *t.algorithm.lambda;
  ExperimentReport one;
  one.rows.push_back(t.row);
  return {{"schema_version", kSchemaVersion},
          {"seed", t.seed},
          {"T", t.T},
          {"algorithm", alg},
          {"set", set_to_json(t.set)},
          {"constants",
           {{"eta", t.eta_used},
            {"alpha", t.alpha_used},
            {"lambda", t.lambda_used},
            {"sword_M", t.sword_M},
            {"sword_delta", opt_to_json(t.sword_delta)}}},
          {"losses", losses},
          {"iterates", iterates},
          {"row", report_to_json(one)["rows"][0]}};
}

Trace trace_from_json(const json& j) {
  if (!j.is_object() || j.value("schema_version", -1) != kSchemaVersion)
    throw ConfigError("trace: missing or unsupported schema_version");
  Trace t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.T = j.at("T").get<int>();
  const auto& a = j.at("algorithm");
  t.algorithm.name = a.at("name").get<std::string>();
  t.algorithm.delta_mode = a.value("delta_mode", std::string("oracle"));
  if (a.contains("eta")) t.algorithm.eta = a["eta"].get<double>();
  if (a.contains("alpha")) t.algorithm.alpha = a["alpha"].get<double>();
  if (a.contains("lambda")) t.algorithm.lambda = a["lambda"].get<double>();
  t.set = set_from_json(j.at("set"));
  const auto& c = j.at("constants");
  t.eta_used = c.at("eta").get<double>();
  t.alpha_used = c.at("alpha").get<double>();
  t.lambda_used = c.at("lambda").get<double>();
  t.sword_M = c.at("sword_M").get<double>();
  t.sword_delta = opt_from_json(c.at("sword_delta"), "sword_delta");
  for (const auto& f : j.at("losses")) t.losses.push_back(loss_from_json(f));
  for (const auto& x : j.at("iterates")) t.iterates.push_back(vec_from_json(x, "iterate"));
  json wrapped{{"schema_version", kSchemaVersion}, {"rows", json::array({j.at("row")})}};
  t.row = report_from_json(wrapped).rows.at(0);
  return t;
}

// ---------------------------------------------------------------------------

json fixtures_json(int case3_T, int case4_T) {
  const auto set = ConstraintSet::interval(-1.0, 1.0);
  json out;
  out["schema_version"] = kSchemaVersion;

  const auto c3 = prop1_case3(case3_T);
  const auto cf = prop1_case3_closed_form(case3_T);
  const auto h3 = solve_hindsight(c3, set);
  json l3 = json::array();
  for (const auto& f : c3) l3.push_back(loss_to_json(f));
  out["case3"] = {{"T", case3_T},
                  {"set", set_to_json(set)},
                  {"losses", l3},
                  {"closed_form", {{"x_star", cf.x_star}, {"L_star", cf.L_star}, {"G_star", cf.G_star}, {"V_T_upper", 4.0 / case3_T}}},
                  {"solver", {{"x_star", h3.x_star[0]}, {"L_star", opt_to_json(h3.L_star)}, {"G_star", h3.G_star},
                              {"V_T", gradient_variation_1d(c3, set)}}}};

  const auto c4 = prop1_case4(case4_T);
  const auto h4 = solve_hindsight(c4, set);
  json l4 = json::array();
  for (const auto& f : c4) l4.push_back(loss_to_json(f));
  out["case4"] = {{"T", case4_T},
                  {"set", set_to_json(set)},
                  {"losses", l4},
                  {"closed_form", {{"x_star", 1.0}, {"L_star", 0.0}, {"G_star", 0.0}, {"V_T", 2.25 * (case4_T - 1)}}},
                  {"solver", {{"x_star", h4.x_star[0]}, {"L_star", opt_to_json(h4.L_star)}, {"G_star", h4.G_star},
                              {"V_T", gradient_variation_1d(c4, set)}}}};
  return out;
}

}  // namespace gstar
