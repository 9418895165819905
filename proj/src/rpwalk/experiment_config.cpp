#include "rpwalk/experiment_config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace rpwalk {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<std::pair<ExperimentKind, std::string_view>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string_view>> names = {
      {ExperimentKind::fdd_clt, "fdd-clt"},
      {ExperimentKind::levy_area, "levy-area"},
      {ExperimentKind::moment_scaling, "moment-scaling"},
      {ExperimentKind::holder_threshold, "holder-threshold"},
      {ExperimentKind::wong_zakai, "wong-zakai"},
      {ExperimentKind::stochastic_integral, "stochastic-integral"},
      {ExperimentKind::symbolic_audit, "symbolic-audit"},
  };
  return names;
}

std::vector<std::int64_t> powers_of_two(int lo, int hi) {
  std::vector<std::int64_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::int64_t{1} << k);
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double get_double(const json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(key, "must be finite");
  return x;
}

std::int64_t get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_u64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

int get_small_int(const json& v, const std::string& key) {
  const auto x = get_int(v, key);
  if (x < -1000000 || x > 1000000) bad(key, "out of range");
  return static_cast<int>(x);
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

template <class F>
auto get_list(const json& v, const std::string& key, F item) {
  if (!v.is_array()) bad(key, "expected a list");
  std::vector<decltype(item(v, key))> out;
  for (const auto& x : v) out.push_back(item(x, key));
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kind_names())
    if (k == kind) return name;
  return "?";
}

ExperimentKind experiment_from_string(std::string_view name) {
  for (const auto& [k, n] : kind_names())
    if (n == name) return k;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& [k, n] : kind_names()) v.push_back(k);
    return v;
  }();
  return kinds;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.lambda_grid = {0.5, 1.0, 2.0};
  c.alpha_schedule = {0.45, 0.75};
  c.distribution.kind = DistributionKind::rademacher;
  c.distribution.dim = 1;
  switch (kind) {
    case ExperimentKind::fdd_clt:
      c.n_schedule = {4, 16, 64, 256};
      break;
    case ExperimentKind::levy_area:
      c.distribution.dim = 2;
      c.n_schedule = {1024};
      break;
    case ExperimentKind::moment_scaling:
      c.n_schedule = powers_of_two(4, 8);
      c.exact_k = {1, 2, 3, 4, 5, 6};
      break;
    case ExperimentKind::holder_threshold:
      c.distribution.kind = DistributionKind::gaussian;
      c.distribution.dim = 2;
      c.n_schedule = powers_of_two(6, 12);
      c.replicas = 1000;
      break;
    case ExperimentKind::wong_zakai:
      c.distribution.dim = 2;
      c.n_schedule = {64, 256, 1024};
      c.y0 = {1.0, 0.0, 0.0};
      c.oracle_steps = 8192;
      break;
    case ExperimentKind::stochastic_integral:
      c.n_schedule = {64, 256, 1024};
      break;
    case ExperimentKind::symbolic_audit:
      c.n_schedule = {1};
      c.replicas = 20000;
      c.battery = {"quartic", "level-polynomials", "area-powers", "mixed"};
      c.laws = {"rademacher", "rademacher-area", "two-point", "gaussian"};
      c.p_table = {4.0, 4.5, 5.0, 6.0, 8.0};
      break;
  }
  return c;
}

ExperimentConfig parse_config(ExperimentKind kind, std::string_view json_text) {
  ExperimentConfig c = default_config(kind);
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& [key, v] : doc.items()) {
    if (key == "kind") {
      if (get_string(v, key) != to_string(kind))
        bad(key, "names '" + v.get<std::string>() + "' but the run is '" + std::string(to_string(kind)) + "'");
    } else if (key == "seed") {
      c.seed = get_u64(v, key);
    } else if (key == "replicas") {
      c.replicas = get_int(v, key);
    } else if (key == "threads") {
      c.threads = get_small_int(v, key);
    } else if (key == "output_dir") {
      c.output_dir = get_string(v, key);
    } else if (key == "distribution") {
      c.distribution.kind = distribution_from_string(get_string(v, key));
    } else if (key == "dim") {
      c.distribution.dim = get_small_int(v, key);
    } else if (key == "normalize") {
      c.distribution.normalize = get_bool(v, key);
    } else if (key == "center_offset") {
      c.distribution.center_offset = get_double(v, key);
    } else if (key == "nu") {
      c.distribution.nu = get_double(v, key);
    } else if (key == "asym_prob") {
      c.distribution.asym_prob = get_double(v, key);
    } else if (key == "depth") {
      c.depth = get_small_int(v, key);
    } else if (key == "interpolation") {
      try {
        c.interpolation = interpolation_from_string(get_string(v, key));
      } catch (const Error& e) {
        bad(key, e.what());
      }
    } else if (key == "area_eta") {
      c.area_eta = get_double(v, key);
    } else if (key == "n_schedule") {
      c.n_schedule = get_list(v, key, get_int);
    } else if (key == "alpha_schedule") {
      c.alpha_schedule = get_list(v, key, get_double);
    } else if (key == "lambda_grid") {
      c.lambda_grid = get_list(v, key, get_double);
    } else if (key == "p") {
      c.p = get_double(v, key);
    } else if (key == "batches") {
      c.batches = get_small_int(v, key);
    } else if (key == "tol_se") {
      c.tol_se = get_double(v, key);
    } else if (key == "tol_monotone_se") {
      c.tol_monotone_se = get_double(v, key);
    } else if (key == "tol_slope") {
      c.tol_slope = get_double(v, key);
    } else if (key == "tol_algebraic") {
      c.tol_algebraic = get_double(v, key);
    } else if (key == "tol_stability") {
      c.tol_stability = get_double(v, key);
    } else if (key == "ks_level") {
      c.ks_level = get_double(v, key);
    } else if (key == "oracle_replicas") {
      c.oracle_replicas = get_int(v, key);
    } else if (key == "oracle_steps") {
      c.oracle_steps = get_int(v, key);
    } else if (key == "moment_order") {
      c.moment_order = get_small_int(v, key);
    } else if (key == "exact_k") {
      c.exact_k = get_list(v, key, get_int);
    } else if (key == "quantile") {
      c.quantile_level = get_double(v, key);
    } else if (key == "holder_refinement") {
      c.holder_refinement = get_small_int(v, key);
    } else if (key == "fields") {
      c.fields = get_string(v, key);
    } else if (key == "y0") {
      c.y0 = get_list(v, key, get_double);
    } else if (key == "substeps") {
      c.substeps = get_small_int(v, key);
    } else if (key == "integrand") {
      c.integrand = get_string(v, key);
    } else if (key == "battery") {
      c.battery = get_list(v, key, get_string);
    } else if (key == "laws") {
      c.laws = get_list(v, key, get_string);
    } else if (key == "k_max") {
      c.audit_k_max = get_small_int(v, key);
    } else if (key == "p_table") {
      c.p_table = get_list(v, key, get_double);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) bad(key, why);
  };
  try {
    c.distribution.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  }
  require(c.replicas >= 1, "replicas", "must be >= 1");
  require(c.threads >= 1 && c.threads <= 256, "threads", "must lie in [1, 256]");
  require(c.depth >= 1 && c.depth <= kMaxDepth, "depth", "must lie in [1, " + std::to_string(kMaxDepth) + "]");
  require(!c.n_schedule.empty(), "n_schedule", "must be non-empty");
  for (auto n : c.n_schedule) require(n >= 1 && n <= (std::int64_t{1} << 24), "n_schedule", "entries must lie in [1, 2^24]");
  require(!c.alpha_schedule.empty(), "alpha_schedule", "must be non-empty");
  for (double a : c.alpha_schedule) require(a > 0.0 && a < 1.0, "alpha_schedule", "entries must lie in (0, 1)");
  require(!c.lambda_grid.empty(), "lambda_grid", "must be non-empty");
  require(c.p == 0.0 || c.p > 1.0, "p", "must be 0 (derive from the distribution) or > 1");
  require(c.batches >= 30, "batches", "standard errors use at least 30 batches");
  for (auto [v, k] : {std::pair{c.tol_se, "tol_se"}, {c.tol_monotone_se, "tol_monotone_se"}, {c.tol_slope, "tol_slope"},
                      {c.tol_algebraic, "tol_algebraic"}, {c.tol_stability, "tol_stability"}})
    require(v > 0.0, k, "must be positive");
  require(c.ks_level > 0.0 && c.ks_level < 1.0, "ks_level", "must lie in (0, 1)");
  require(c.oracle_replicas >= 2, "oracle_replicas", "must be >= 2");
  require(c.oracle_steps >= 1 && c.oracle_steps <= (std::int64_t{1} << 20), "oracle_steps", "must lie in [1, 2^20]");
  require(c.moment_order >= 2 && c.moment_order % 2 == 0 && c.moment_order <= 16, "moment_order",
          "must be even and in [2, 16]");
  for (auto k : c.exact_k) require(k >= 0 && k <= 12, "exact_k", "entries must lie in [0, 12]");
  require(c.quantile_level > 0.0 && c.quantile_level < 1.0, "quantile", "must lie in (0, 1)");
  require(c.holder_refinement >= 0 && c.holder_refinement <= 12, "holder_refinement", "must lie in [0, 12]");
  require(c.substeps >= 1, "substeps", "must be >= 1");
  require(c.audit_k_max >= 0 && c.audit_k_max <= 8, "k_max", "must lie in [0, 8]");
  for (double p : c.p_table) require(p > 1.0, "p_table", "entries must exceed 1");
  if (c.area_eta != 0.0) {
    require(c.distribution.dim >= 2, "area_eta", "needs dim >= 2");
    require(c.depth >= 2, "area_eta", "needs depth >= 2");
  }

  const int d = c.distribution.dim;
  switch (c.kind) {
    case ExperimentKind::levy_area:
      require(d == 2, "dim", "the Levy area experiment runs in d = 2");
      require(c.depth >= 2, "depth", "the Levy area lives at level 2");
      break;
    case ExperimentKind::wong_zakai:
      require(c.depth >= 2, "depth", "RDE drivers need depth >= 2");
      if (c.fields == "planar-rotation") {
        require(d == 2, "dim", "planar-rotation fields take a 2-dimensional driver");
        require(c.y0.size() == 3, "y0", "planar-rotation fields act on R^3");
      } else if (c.fields == "linear-scalar") {
        require(c.y0.size() == 1, "y0", "linear-scalar fields act on R^1");
      } else {
        bad("fields", "expected 'planar-rotation' or 'linear-scalar'");
      }
      break;
    case ExperimentKind::stochastic_integral:
      if (c.integrand == "identity")
        require(d == 1, "integrand", "'identity' integrates W dW in d = 1");
      else if (c.integrand == "levy-area")
        require(d == 2, "integrand", "'levy-area' needs d = 2");
      else if (c.integrand != "constant")
        bad("integrand", "expected 'identity', 'levy-area' or 'constant'");
      break;
    case ExperimentKind::symbolic_audit: {
      static const std::set<std::string> batteries = {"quartic", "level-polynomials", "area-powers", "mixed"};
      static const std::set<std::string> laws = {"rademacher", "rademacher-area", "two-point", "gaussian"};
      for (const auto& b : c.battery) require(batteries.count(b) > 0, "battery", "unknown family '" + b + "'");
      for (const auto& l : c.laws) require(laws.count(l) > 0, "laws", "unknown law '" + l + "'");
      break;
    }
    default:
      break;
  }
}

ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["kind"] = std::string(to_string(c.kind));
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["distribution"] = std::string(to_string(c.distribution.kind));
  j["dim"] = c.distribution.dim;
  j["normalize"] = c.distribution.normalize;
  j["center_offset"] = c.distribution.center_offset;
  j["nu"] = c.distribution.nu;
  j["asym_prob"] = c.distribution.asym_prob;
  j["depth"] = c.depth;
  j["interpolation"] = std::string(to_string(c.interpolation));
  j["area_eta"] = c.area_eta;
  j["n_schedule"] = c.n_schedule;
  j["alpha_schedule"] = c.alpha_schedule;
  j["lambda_grid"] = c.lambda_grid;
  j["p"] = c.p;
  j["batches"] = c.batches;
  j["tol_se"] = c.tol_se;
  j["tol_monotone_se"] = c.tol_monotone_se;
  j["tol_slope"] = c.tol_slope;
  j["tol_algebraic"] = c.tol_algebraic;
  j["tol_stability"] = c.tol_stability;
  j["ks_level"] = c.ks_level;
  j["oracle_replicas"] = c.oracle_replicas;
  j["oracle_steps"] = c.oracle_steps;
  j["moment_order"] = c.moment_order;
  j["exact_k"] = c.exact_k;
  j["quantile"] = c.quantile_level;
  j["holder_refinement"] = c.holder_refinement;
  j["fields"] = c.fields;
  j["y0"] = c.y0;
  j["substeps"] = c.substeps;
  j["integrand"] = c.integrand;
  j["battery"] = c.battery;
  j["laws"] = c.laws;
  j["k_max"] = c.audit_k_max;
  j["p_table"] = c.p_table;
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rpwalk
