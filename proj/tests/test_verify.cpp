#include <gtest/gtest.h>

#include "qoe/verify.hpp"

using namespace qoe;

TEST(Verify, RejectsBadConfig) {
  VerifyConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(verify(cfg), InvalidParameters);
  cfg.trials = 1;
  cfg.dims = {{0, 2}};
  EXPECT_THROW(verify(cfg), InvalidParameters);
}

TEST(Verify, SeedFortyTwoPasses) {
  VerifyConfig cfg;
  cfg.seed = 42;
  cfg.trials = 50;
  cfg.dims = {{3, 2}, {4, 4}};
  auto s = verify(cfg);
  EXPECT_EQ(s.failures(), 0);
  ASSERT_TRUE(s.properties.count("choi_relation"));
  EXPECT_LE(s.properties.at("choi_relation").max_residual, 1e-9);
  EXPECT_EQ(summary_to_json(s)["status"], "pass");
}

TEST(Verify, FullyClassicalReductions) {
  VerifyConfig cfg;
  cfg.trials = 30;
  cfg.regimes = {Regime::fully_classical};
  auto s = verify(cfg);
  EXPECT_EQ(s.failures(), 0);
  for (const char* p : {"clax_reduction", "s2_clax_reduction", "block_prior_invariance", "petz_recoverable_instance"}) {
    ASSERT_TRUE(s.properties.count(p)) << p;
    EXPECT_GT(s.properties.at(p).checked, 0) << p;
    EXPECT_EQ(s.properties.at(p).failed, 0) << p;
  }
}

TEST(Verify, Deterministic) {
  VerifyConfig cfg;
  cfg.trials = 5;
  EXPECT_EQ(summary_to_json(verify(cfg)).dump(), summary_to_json(verify(cfg)).dump());
  VerifyConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(summary_to_json(verify(cfg)).dump(), summary_to_json(verify(other)).dump());
}

TEST(Verify, S2DiagnosticDoesNotGate) {
  VerifyConfig cfg;
  cfg.trials = 20;
  auto s = verify(cfg);
  EXPECT_GT(s.s2_monotonicity_checked, 0);
  EXPECT_FALSE(s.properties.count("monotonicity_s2"));
}
