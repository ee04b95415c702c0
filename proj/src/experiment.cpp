#include "gstar/harness.hpp"

#include "gstar/bounds.hpp"
#include "gstar/hindsight.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace gstar {

bool ExperimentReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.audit_pass; }) &&
         std::all_of(summary.begin(), summary.end(), [](const SummaryAudit& s) { return s.pass; });
}

int worker_threads() {
  if (const char* env = std::getenv("GSTAR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double regularizer_range(double lambda, const ConstraintSet& set) {
  const double B = set.diameter() / 2.0;
  return 0.5 * lambda * B * B + 1.0;
}

SwordConfig sword_config(const Trace& tr, double L) {
  SwordConfig c{tr.T, tr.sword_M, L, tr.set.diameter()};
  if (tr.sword_delta) c.delta_mode = FixedDelta{*tr.sword_delta};
  return c;
}

Learner make_learner(const Trace& tr, double L) {
  const auto& name = tr.algorithm.name;
  if (name == "ogd") return Learner::ogd(tr.set, tr.set.center(), tr.eta_used);
  if (name == "adagrad_norm") return Learner::adagrad_norm(tr.set, tr.set.center(), tr.alpha_used);
  if (name == "adaftrl") return Learner::adaftrl(tr.set, tr.lambda_used);
  if (name == "sword") return Learner::sword(tr.set, tr.set.center(), sword_config(tr, L));
  throw ConfigError("unknown algorithm: " + name);
}

/// Upper bound for the row's algorithm with G_T(x*) = G and L_T(x*) = LT.
double algorithm_bound(const Trace& tr, double L, double G, std::optional<double> LT) {
  const double D = tr.set.diameter();
  BoundInputs in;
  in.G = G;
  in.L_T = LT;
  in.L = L;
  in.D = D;
  const auto& name = tr.algorithm.name;
  if (name == "ogd") {
    if (!tr.algorithm.eta) return bound_value(BoundKind::OgdTuned, in);
    in.eta = tr.eta_used;
    in.x1_dist_sq = 0.0;
    const double c = tr.eta_used * L;
    if (c < 1.0) return bound_value(BoundKind::OgdGeneral, in);
    if (c < 2.0 && LT) {
      // |x1 - x*|^2 <= D^2.
      in.x1_dist_sq = D * D;
      return bound_value(BoundKind::OgdLargeStep, in);
    }
    return kInf;
  }
  if (name == "adagrad_norm") return bound_value(BoundKind::AdaGradNorm, in);
  if (name == "adaftrl") {
    in.R = regularizer_range(tr.lambda_used, tr.set);
    return bound_value(BoundKind::AdaFtrl, in);
  }
  // Static comparator as a constant path: P = 0, G_hat = G.
  in.path_length = 0.0;
  in.G_hat = G;
  in.N = sword_config(tr, L).grid_size();
  return bound_value(BoundKind::Sword, in);
}

bool within(double measured, double bound) {
  return measured <= bound + 1e-12 * std::max(1.0, std::abs(bound));
}

/// Statistics and audit of a finished run. Shared by the runner and the trace auditor.
ReportRow evaluate(const Trace& tr, const HindsightReport& hs, double L) {
  ReportRow row;
  row.seed = tr.seed;
  row.T = tr.T;
  row.algorithm = tr.algorithm.name;
  row.L_star = hs.L_star;
  row.G_star = hs.G_star;

  const auto ledger = RegretLedger::record(tr.losses, tr.iterates);
  row.rho_T = ledger.regret(tr.losses, hs.x_star);

  row.bound_gstar = algorithm_bound(tr, L, hs.G_star, hs.L_star);
  if (hs.L_star) row.bound_lstar = algorithm_bound(tr, L, 2.0 * L * *hs.L_star, hs.L_star);

  bool ok = hs.converged && within(row.rho_T, row.bound_gstar);
  if (hs.L_star) ok = ok && within(hs.G_star, 2.0 * L * *hs.L_star);
  for (const auto& x : tr.iterates) ok = ok && tr.set.contains(x, 1e-9);
  row.audit_pass = ok;
  return row;
}

Trace run_cell(const ExperimentConfig& cfg, const ConstraintSet& set, int T, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  Trace tr;
  tr.seed = seed;
  tr.T = T;
  tr.algorithm = cfg.algorithm;
  tr.set = set;
  tr.losses = build_instance(cfg.instance, T, cfg.dim, set, seed);

  const double L = common_smoothness(tr.losses, set);
  const double D = set.diameter();
  const auto hs = solve_hindsight(tr.losses, set);

  const auto& alg = cfg.algorithm;
  if (alg.name == "ogd") {
    tr.eta_used = alg.eta ? *alg.eta : ogd_tuned_step(L, D, hs.G_star);
  } else if (alg.name == "adagrad_norm") {
    tr.alpha_used = alg.alpha ? *alg.alpha : std::sqrt(2.0) * D / 2.0;
  } else if (alg.name == "adaftrl") {
    tr.lambda_used = alg.lambda ? *alg.lambda : 1.0 / (2.0 * D * D);
  } else if (alg.name == "sword") {
    if (!(L > 0)) throw ConfigError("sword requires strictly smooth losses (L > 0)");
    const Vec c = set.center();
    double m = 0.0;
    for (const auto& f : tr.losses) m = std::max(m, f.grad(c).norm());
    tr.sword_M = m + L * D;
    // The meta step uses the realized sum of squared gradients.
    if (alg.delta_mode == "oracle") tr.sword_delta = sword_oracle_delta(tr.losses, set, c, sword_config(tr, L));
  }

  Learner learner = make_learner(tr, L);
  tr.iterates = play_online(tr.losses, learner);
  tr.row = evaluate(tr, hs, L);
  tr.row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return tr;
}

std::vector<SummaryAudit> summarize(const ExperimentConfig& cfg, const ConstraintSet& set,
                                    const std::vector<ReportRow>& rows) {
  std::vector<SummaryAudit> out;
  if (cfg.instance.kind != "lower_bound") return out;
  const double D = set.diameter();
  std::map<int, std::pair<double, double>> by_T;  // T -> (sum rho, sum bound)
  std::map<int, int> count;
  for (const auto& r : rows) {
    by_T[r.T].first += r.rho_T;
    by_T[r.T].second += 0.25 * D * std::sqrt(r.G_star);
    ++count[r.T];
  }
  for (const auto& [T, sums] : by_T) {
    SummaryAudit s;
    s.name = "lower_bound_mean_T" + std::to_string(T);
    s.measured = sums.first / count[T];
    s.bound = sums.second / count[T];
    s.lower = true;
    s.pass = s.measured >= s.bound;
    out.push_back(s);
  }
  return out;
}

}  // namespace

ReportRow recompute_row(const Trace& tr) {
  if (tr.iterates.size() != tr.losses.size() || static_cast<int>(tr.losses.size()) != tr.T)
    throw std::invalid_argument("trace: horizon mismatch");
  const double L = common_smoothness(tr.losses, tr.set);
  const auto hs = solve_hindsight(tr.losses, tr.set);
  ReportRow row = evaluate(tr, hs, L);
  // Replay the algorithm from the stored constants; a divergent trace fails the audit.
  Learner learner = make_learner(tr, L);
  const auto replay = play_online(tr.losses, learner);
  for (std::size_t t = 0; t < replay.size(); ++t)
    if ((replay[t] - tr.iterates[t]).norm() > 1e-12 * std::max(1.0, replay[t].norm())) row.audit_pass = false;
  row.wall_ms = tr.row.wall_ms;
  return row;
}

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
  if (cfg.T.empty() || cfg.seeds.empty()) throw ConfigError("config needs at least one T and one seed");
  const ConstraintSet set = cfg.set ? *cfg.set : natural_set(cfg.instance, cfg.dim);
  if (set.dim() != cfg.dim) throw ConfigError("set dimension does not match dim");

  std::vector<std::pair<int, std::uint64_t>> cells;
  for (int T : cfg.T)
    for (auto s : cfg.seeds) cells.emplace_back(T, s);

  std::vector<Trace> traces(cells.size());
  const int workers = std::max(1, std::min<int>(threads > 0 ? threads : worker_threads(), int(cells.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        traces[i] = run_cell(cfg, set, cells[i].first, cells[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  RunResult result;
  for (const auto& tr : traces) result.report.rows.push_back(tr.row);
  result.report.summary = summarize(cfg, set, result.report.rows);
  result.traces = std::move(traces);
  return result;
}

}  // namespace gstar
