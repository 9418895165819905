#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rpwalk/walk_gen.hpp"

namespace rpwalk {

enum class ExperimentKind {
  fdd_clt,
  levy_area,
  moment_scaling,
  holder_threshold,
  wong_zakai,
  stochastic_integral,
  symbolic_audit,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

// Every experiment reads the same flat record; defaults depend on the kind.
// See docs/report_schema.md for the key list.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::fdd_clt;
  std::uint64_t seed = 20240601;
  std::int64_t replicas = 10000;
  int threads = 1;
  std::string output_dir;

  // Walk.
  IncrementDistribution distribution;
  int depth = 2;
  Interpolation interpolation = Interpolation::linear_lift;
  // Level-2 kicks eta * s * [e_1, e_2] on every increment (group-valued walk).
  double area_eta = 0.0;

  std::vector<std::int64_t> n_schedule;
  std::vector<double> alpha_schedule;
  std::vector<double> lambda_grid;
  // Moment exponent for the predicted Hoelder transition; 0 derives it from
  // the distribution (nu/2 for student-t, unbounded otherwise).
  double p = 0.0;

  int batches = 32;

  // Tolerances.
  double tol_se = 3.0;
  double tol_monotone_se = 2.0;
  double tol_slope = 0.2;
  double tol_algebraic = 1e-10;
  double tol_stability = 0.10;
  double ks_level = 0.01;

  // fdd-clt, levy-area, stochastic-integral, wong-zakai oracles.
  std::int64_t oracle_replicas = 100000;
  std::int64_t oracle_steps = 4096;

  // moment-scaling.
  int moment_order = 4;
  std::vector<std::int64_t> exact_k;

  // holder-threshold.
  double quantile_level = 0.95;
  int holder_refinement = 0;

  // wong-zakai.
  std::string fields = "planar-rotation";
  std::vector<double> y0;
  int substeps = 1;

  // stochastic-integral.
  std::string integrand = "identity";

  // symbolic-audit.
  std::vector<std::string> battery;
  std::vector<std::string> laws;
  int audit_k_max = 6;
  std::vector<double> p_table;
};

// Defaults for `kind`, then the JSON document (a flat object) on top.
// Unknown keys, wrong types and invariant violations raise ConfigError.
ExperimentConfig default_config(ExperimentKind kind);
ExperimentConfig parse_config(ExperimentKind kind, std::string_view json_text);
void validate(const ExperimentConfig& cfg);

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

// FNV-1a 64 of the canonical JSON echo (output_dir and threads excluded).
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace rpwalk
