#ifndef GSTAR_HARNESS_HPP_
#define GSTAR_HARNESS_HPP_

#include "gstar/algorithms.hpp"
#include "gstar/constraint_set.hpp"
#include "gstar/loss.hpp"
#include "gstar/vec.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gstar {

// ---------------------------------------------------------------------------
// Instance generators. Round t of every generator draws from round_rng(seed, t),
// so the instance for T is a prefix of the instance for any larger T.

struct LpInstance {
  std::vector<LossFn> losses;
  Vec x_bar;
};

/// a_t ~ N(0, I/10), x_bar ~ N(0, I/10), b_t = <a_t, x_bar> + sigma eps_t.
LpInstance generate_lp_instance(int T, double sigma, std::uint64_t seed, int dim = 2, double p = 4.0);
/// a_t ~ U[0,1]^n, y_t = +1 with probability delta and -1 otherwise.
std::vector<LossFn> generate_ce_instance(int T, double delta, std::uint64_t seed, int dim = 2);

/// 1/2 (a_t x)^2 with a_t = t^{-p} on [1, 2].
std::vector<LossFn> prop1_case2(int T, double p = 1.0 / 6.0);
/// 1/2 (a_t x - 1)^2 with a_t = 1/2 - (t-1)/T on [-1, 1].
std::vector<LossFn> prop1_case3(int T);
/// 1/2 (a_t x - b_t)^2 with (a_t, b_t) = (1, 1) for even t and (1/2, 1/2) for odd t, on [-1, 1].
std::vector<LossFn> prop1_case4(int T);

struct ClosedForm {
  double x_star;
  double L_star;
  double G_star;
};
ClosedForm prop1_case3_closed_form(int T);

// ---------------------------------------------------------------------------
// Configuration.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct InstanceSpec {
  std::string kind;  // lp_regression | cross_entropy | prop1_case2 | prop1_case3 | prop1_case4 | lower_bound
                     // | stochastic_least_squares | stochastic_noisy_least_squares | stochastic_l4
  double sigma = 0.1;
  double p = 4.0;
  double delta = 0.95;
  double M = 1.0;
};

struct AlgorithmSpec {
  std::string name;                   // ogd | adagrad_norm | adaftrl | sword
  std::optional<double> eta;          // ogd; absent = tuned from G*
  std::optional<double> alpha;        // adagrad_norm; absent = sqrt(2) D / 2
  std::optional<double> lambda;       // adaftrl; absent = 1 / (2 D^2)
  std::string delta_mode = "oracle";  // sword: oracle | time_varying
};

struct OutputSpec {
  std::string csv;
  std::string json;
  std::string trace_dir;
};

struct ExperimentConfig {
  InstanceSpec instance;
  std::vector<int> T;
  int dim = 2;
  std::optional<ConstraintSet> set;  // absent = the instance's natural set
  AlgorithmSpec algorithm;
  std::vector<std::uint64_t> seeds;
  OutputSpec outputs;
};

inline constexpr int kSchemaVersion = 1;

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Set used when the config does not name one.
ConstraintSet natural_set(const InstanceSpec& inst, int dim);
std::vector<LossFn> build_instance(const InstanceSpec& inst, int T, int dim, const ConstraintSet& set,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reports.

struct ReportRow {
  std::uint64_t seed = 0;
  int T = 0;
  std::string algorithm;
  double rho_T = 0.0;
  std::optional<double> L_star;
  double G_star = 0.0;
  double bound_gstar = 0.0;
  std::optional<double> bound_lstar;
  bool audit_pass = false;
  double wall_ms = 0.0;

  bool operator==(const ReportRow&) const = default;
};

/// Aggregate audits over seeds (expectation bounds).
struct SummaryAudit {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool lower = false;
  bool pass = false;

  bool operator==(const SummaryAudit&) const = default;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<SummaryAudit> summary;

  bool all_pass() const;
  bool operator==(const ExperimentReport&) const = default;
};

/// Everything needed to recompute one row without trusting the runner.
struct Trace {
  std::uint64_t seed = 0;
  int T = 0;
  AlgorithmSpec algorithm;
  ConstraintSet set = ConstraintSet::interval(-1.0, 1.0);
  std::vector<LossFn> losses;
  std::vector<Vec> iterates;
  double eta_used = 0.0;     // ogd
  double alpha_used = 0.0;   // adagrad_norm
  double lambda_used = 0.0;  // adaftrl
  double sword_M = 0.0;      // sword gradient bound
  std::optional<double> sword_delta;  // sword: fixed meta step; absent = time-varying
  ReportRow row;
};

/// Thread count: GSTAR_THREADS if set and positive, else hardware concurrency.
int worker_threads();

struct RunResult {
  ExperimentReport report;
  std::vector<Trace> traces;
};

/// Runs every (seed, T) cell; rows are ordered by (T, seed) regardless of scheduling.
RunResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

/// Recompute a row's statistics and audit from its trace.
ReportRow recompute_row(const Trace& trace);

enum class ReportFormat { Csv, Json };

std::string report_to_csv(const ExperimentReport& report);
nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path);

nlohmann::json loss_to_json(const LossFn& f);
LossFn loss_from_json(const nlohmann::json& j);
nlohmann::json set_to_json(const ConstraintSet& s);
ConstraintSet set_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);

/// 1-D fixtures (case 3, case 4) with their closed-form values.
nlohmann::json fixtures_json(int case3_T = 7, int case4_T = 8);

}  // namespace gstar

#endif  // GSTAR_HARNESS_HPP_
