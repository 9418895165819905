#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rpwalk/experiment_config.hpp"

namespace rpwalk {

// One verdict line. `counted` checks decide the report verdict; the others
// are informational (e.g. outside the theorem's hypotheses).
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  // How value relates to tolerance when passing: "<=", ">=", "==", "in".
  std::string relation = "<=";
  bool pass = false;
  bool counted = true;
  std::string note;
};

// Plot-ready table; cells are numbers, strings or booleans.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  // A "# "-prefixed comma-separated header line, then one line per row.
  std::string to_csv() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  // Experiment-specific results; deterministic given (config, seed).
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  nlohmann::ordered_json hypotheses = nlohmann::ordered_json::object();
  std::vector<std::string> flags;
  std::vector<Check> checks;
  std::vector<Table> tables;
  double wall_clock_seconds = 0.0;
  std::string timestamp;

  bool passed() const;
  // Everything except wall clock and timestamp.
  nlohmann::ordered_json body() const;
  // {"body": ..., "meta": {"wall_clock_seconds", "timestamp"}}.
  nlohmann::ordered_json to_json() const;
};

ExperimentReport run_fdd_clt(const ExperimentConfig& cfg);
ExperimentReport run_levy_area(const ExperimentConfig& cfg);
ExperimentReport run_moment_scaling(const ExperimentConfig& cfg);
ExperimentReport run_holder_threshold(const ExperimentConfig& cfg);
ExperimentReport run_wong_zakai(const ExperimentConfig& cfg);
ExperimentReport run_stochastic_integral(const ExperimentConfig& cfg);
ExperimentReport run_symbolic_audit(const ExperimentConfig& cfg);

// Validates, dispatches on cfg.kind and stamps wall clock and timestamp.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// report.json plus <table>.csv for every table; creates the directory.
void write_report(const ExperimentReport& report, const std::string& dir);

// E[cos(lambda A)] and friends for the Levy area of standard planar Brownian
// motion at t = 1, from `replicas` fine-mesh simulations with `steps` steps.
// The area of each piecewise-linear sample path is accumulated exactly.
std::vector<double> brownian_levy_area_samples(std::int64_t replicas, std::int64_t steps, std::uint64_t seed,
                                               int threads);

}  // namespace rpwalk
