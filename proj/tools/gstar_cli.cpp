#include "gstar/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace gstar;

namespace {

int finish_run(const ExperimentConfig& cfg, int threads, const std::string& csv_override,
               const std::string& json_override) {
  const auto result = run_experiment(cfg, threads);
  const auto& rep = result.report;

  const std::string csv = csv_override.empty() ? cfg.outputs.csv : csv_override;
  const std::string js = json_override.empty() ? cfg.outputs.json : json_override;
  if (!csv.empty()) emit_report(rep, ReportFormat::Csv, csv);
  if (!js.empty()) emit_report(rep, ReportFormat::Json, js);
  if (csv.empty() && js.empty()) std::cout << report_to_csv(rep);

  if (!cfg.outputs.trace_dir.empty()) {
    fs::create_directories(cfg.outputs.trace_dir);
    for (const auto& tr : result.traces) {
      const fs::path p = fs::path(cfg.outputs.trace_dir) /
                         ("trace_T" + std::to_string(tr.T) + "_seed" + std::to_string(tr.seed) + ".json");
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot write trace: " + p.string());
      out << trace_to_json(tr).dump() << '\n';
    }
  }

  int failed = 0;
  for (const auto& r : rep.rows) failed += !r.audit_pass;
  for (const auto& s : rep.summary) {
    std::cerr << (s.pass ? "PASS " : "FAIL ") << s.name << ": measured " << s.measured << (s.lower ? " >= " : " <= ")
              << s.bound << '\n';
    failed += !s.pass;
  }
  std::cerr << rep.rows.size() << " rows, " << failed << " failed audit(s)\n";
  return rep.all_pass() ? 0 : 1;
}

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size() || v < 1 || v != std::floor(v)) throw ConfigError("--T-grid: bad entry '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("--T-grid: empty");
  return out;
}

bool close(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool close(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || close(*a, *b));
}

int audit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  nlohmann::json j;
  in >> j;
  const Trace tr = trace_from_json(j);
  const ReportRow got = recompute_row(tr);
  const ReportRow& want = tr.row;
  bool consistent = true;
  auto cmp = [&](const char* name, bool ok) {
    if (!ok) {
      std::cerr << "mismatch in " << name << '\n';
      consistent = false;
    }
  };
  cmp("rho_T", close(got.rho_T, want.rho_T));
  cmp("L_star", close(got.L_star, want.L_star));
  cmp("G_star", close(got.G_star, want.G_star));
  cmp("bound_gstar", close(got.bound_gstar, want.bound_gstar));
  cmp("bound_lstar", close(got.bound_lstar, want.bound_lstar));
  cmp("audit_pass", got.audit_pass == want.audit_pass);
  const bool ok = consistent && got.audit_pass;
  std::cout << (ok ? "PASS" : "FAIL") << " seed=" << tr.seed << " T=" << tr.T << " algorithm=" << tr.algorithm.name
            << " rho_T=" << got.rho_T << " bound_gstar=" << got.bound_gstar << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-bound audits for online convex optimization"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: GSTAR_THREADS or all cores)");

  std::string config_path, csv, js;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--csv", csv, "Write the CSV report here");
  run->add_option("--json", js, "Write the JSON report here");

  std::string grid;
  auto* sweep = app.add_subcommand("sweep", "Run a config over a grid of horizons");
  sweep->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--T-grid", grid, "Comma-separated horizons, e.g. 100,500,5000,10000")->required();
  sweep->add_option("--csv", csv, "Write the CSV report here");
  sweep->add_option("--json", js, "Write the JSON report here");

  int case3_T = 7, case4_T = 8;
  std::string fixtures_out;
  auto* fixtures = app.add_subcommand("fixtures", "Emit the 1-D fixture instances and their closed-form values");
  fixtures->add_option("--case3-T", case3_T, "Horizon for the Case 3 instance");
  fixtures->add_option("--case4-T", case4_T, "Horizon for the Case 4 instance");
  fixtures->add_option("-o,--out", fixtures_out, "Output file (default stdout)");

  std::string trace_path;
  auto* audit = app.add_subcommand("audit", "Recompute and check a stored run trace");
  audit->add_option("trace-file", trace_path, "Trace file written by run/sweep")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return finish_run(load_config(config_path), threads, csv, js);
    if (*sweep) {
      auto cfg = load_config(config_path);
      cfg.T = parse_grid(grid);
      return finish_run(cfg, threads, csv, js);
    }
    if (*fixtures) {
      const auto j = fixtures_json(case3_T, case4_T).dump(2);
      if (fixtures_out.empty()) {
        std::cout << j << '\n';
      } else {
        std::ofstream out(fixtures_out);
        if (!out) throw std::runtime_error("cannot write " + fixtures_out);
        out << j << '\n';
      }
      return 0;
    }
    if (*audit) return audit_file(trace_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
