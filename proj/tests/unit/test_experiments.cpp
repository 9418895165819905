#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rpwalk/experiment.hpp"

using namespace rpwalk;

namespace {

ExperimentConfig small(ExperimentKind k) {
  auto c = default_config(k);
  c.replicas = 320;
  c.oracle_replicas = 640;
  c.oracle_steps = 256;
  return c;
}

const Check* find_check(const ExperimentReport& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

bool has_flag(const ExperimentReport& r, const std::string& needle) {
  for (const auto& f : r.flags)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Experiments, BodyIsDeterministicAcrossThreadCounts) {
  for (auto k : {ExperimentKind::fdd_clt, ExperimentKind::levy_area, ExperimentKind::moment_scaling,
                 ExperimentKind::stochastic_integral}) {
    auto c = small(k);
    if (k == ExperimentKind::levy_area) c.n_schedule = {64};
    const auto a = run_experiment(c);
    c.threads = 3;
    const auto b = run_experiment(c);
    EXPECT_EQ(a.body().dump(), b.body().dump()) << to_string(k);
    EXPECT_EQ(a.body()["seed"], c.seed);
  }
}

TEST(Experiments, ZeroVarianceIsFlagged) {
  auto c = small(ExperimentKind::fdd_clt);
  c.distribution.kind = DistributionKind::constant;
  const auto r = run_experiment(c);
  EXPECT_TRUE(has_flag(r, "zero variance"));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.results["zero_variance"], true);
}

TEST(Experiments, GaussianKsInsideNullBand) {
  auto c = small(ExperimentKind::fdd_clt);
  c.distribution.kind = DistributionKind::gaussian;
  c.replicas = 2000;
  const auto r = run_experiment(c);
  EXPECT_NE(find_check(r, "KS within the null band"), nullptr);
}

TEST(Experiments, LevyAreaAtZeroIsOne) {
  auto c = small(ExperimentKind::levy_area);
  c.n_schedule = {16};
  c.lambda_grid = {0.0, 1.0};
  const auto r = run_experiment(c);
  const auto* z = find_check(r, "characteristic function is 1");
  ASSERT_NE(z, nullptr);
  EXPECT_TRUE(z->pass);
  c.distribution.dim = 1;
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiments, HeavyTailsAreOutOfHypothesis) {
  auto c = small(ExperimentKind::moment_scaling);
  c.distribution.kind = DistributionKind::student_t;
  c.distribution.nu = 5;
  c.moment_order = 8;
  c.exact_k = {};
  const auto r = run_experiment(c);
  EXPECT_TRUE(has_flag(r, "out-of-hypothesis"));
  EXPECT_EQ(r.hypotheses["moment_finite"], false);
  const auto* s = find_check(r, "log-log slope");
  ASSERT_NE(s, nullptr);
  EXPECT_FALSE(s->counted);
}

TEST(Experiments, MomentScalingSmallCellsAreExact) {
  auto c = small(ExperimentKind::moment_scaling);
  const auto r = run_experiment(c);
  const auto& cells = r.results["exact_cells"];
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[1]["exact"], "8");
  EXPECT_EQ(cells[0]["mc"]["mean"], 1.0);  // k = 1: |xi|^4 = 1 for Rademacher
}

TEST(Experiments, HolderPredictionUsesMomentOrder) {
  auto c = small(ExperimentKind::holder_threshold);
  c.replicas = 64;
  c.batches = 32;
  c.n_schedule = {16, 32};
  c.distribution.kind = DistributionKind::student_t;
  c.distribution.nu = 8.5;
  c.alpha_schedule = {0.3, 0.45};
  const auto r = run_experiment(c);
  EXPECT_EQ(r.results["prediction"]["p"], 4.25);
  EXPECT_EQ(r.results["prediction"]["alpha_star_exact"], "3/8");
  EXPECT_TRUE(has_flag(r, "heavy-tailed"));
}

TEST(Experiments, WongZakaiScalarCase) {
  auto c = small(ExperimentKind::wong_zakai);
  c.distribution.dim = 1;
  c.fields = "linear-scalar";
  c.y0 = {1.0};
  c.n_schedule = {16, 64};
  const auto r = run_experiment(c);
  EXPECT_EQ(r.results["cells"].size(), 2u);
}

TEST(Experiments, SymbolicAuditEmptyBattery) {
  auto c = default_config(ExperimentKind::symbolic_audit);
  c.battery = {};
  c.replicas = 100;
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.results["cases"].empty());
}

TEST(Experiments, ReportFilesWritten) {
  auto c = small(ExperimentKind::stochastic_integral);
  c.n_schedule = {8};
  const auto r = run_experiment(c);
  const auto dir = std::filesystem::temp_directory_path() / "rpwalk_report_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  std::ifstream f(dir / "stochastic_integral.csv");
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header.rfind("# n,statistic", 0), 0u);
  const auto j = r.to_json();
  EXPECT_TRUE(j.contains("body"));
  EXPECT_TRUE(j["meta"].contains("wall_clock_seconds"));
}
