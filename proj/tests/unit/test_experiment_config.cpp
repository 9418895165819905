#include <gtest/gtest.h>

#include "rpwalk/experiment_config.hpp"

using namespace rpwalk;

TEST(ExperimentConfig, KindNamesRoundTrip) {
  for (auto k : all_experiments()) EXPECT_EQ(experiment_from_string(to_string(k)), k);
  EXPECT_THROW(experiment_from_string("nope"), ConfigError);
  EXPECT_EQ(all_experiments().size(), 7u);
}

TEST(ExperimentConfig, DefaultsValidate) {
  for (auto k : all_experiments()) EXPECT_NO_THROW(validate(default_config(k))) << to_string(k);
  EXPECT_EQ(default_config(ExperimentKind::levy_area).distribution.dim, 2);
  EXPECT_EQ(default_config(ExperimentKind::fdd_clt).batches, 32);
}

TEST(ExperimentConfig, ParsesFlatDocument) {
  const auto c = parse_config(ExperimentKind::fdd_clt,
                              R"({"seed": 7, "replicas": 500, "distribution": "gaussian", "n_schedule": [2, 8],
                                  "tol_se": 2.5, "kind": "fdd-clt"})");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.replicas, 500);
  EXPECT_EQ(c.distribution.kind, DistributionKind::gaussian);
  EXPECT_EQ(c.n_schedule, (std::vector<std::int64_t>{2, 8}));
  EXPECT_DOUBLE_EQ(c.tol_se, 2.5);
}

TEST(ExperimentConfig, RejectsBadInput) {
  const auto k = ExperimentKind::fdd_clt;
  EXPECT_THROW(parse_config(k, R"({"replica": 5})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"replicas": "5"})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"replicas": 0})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"n_schedule": []})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"batches": 10})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"kind": "levy-area"})"), ConfigError);
  EXPECT_THROW(parse_config(k, "[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config(k, "{"), ConfigError);
  EXPECT_THROW(parse_config(ExperimentKind::levy_area, R"({"dim": 3})"), ConfigError);
  EXPECT_THROW(parse_config(ExperimentKind::wong_zakai, R"({"y0": [1, 0]})"), ConfigError);
  EXPECT_THROW(parse_config(ExperimentKind::symbolic_audit, R"({"laws": ["cauchy"]})"), ConfigError);
  EXPECT_THROW(parse_config(k, R"({"distribution": "student-t", "nu": 1.5})"), ConfigError);
}

TEST(ExperimentConfig, HashTracksContentNotThreads) {
  auto a = default_config(ExperimentKind::moment_scaling);
  auto b = a;
  b.threads = 4;
  b.output_dir = "/tmp/x";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}
