#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qoe/oentropy.hpp"
#include "qoe/scenario.hpp"

using namespace qoe;

namespace {

// -Tr[rho ln gamma] - D(p||g) for commuting rho, gamma, all spelled out.
double clax_oracle(const RealVector& r, const RealVector& g, const RealVector& p, const RealVector& gy) {
  double cross = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (r(i) > 0) cross -= r(i) * std::log(g(i));
  return cross - oracle::kl(p, gy);
}

double gibbs_s3(double d, double b) {
  return std::log((1 - std::exp(b * d)) / (1 - std::exp(b))) - b * (d - 1) / 2;
}

}  // namespace

TEST(OriginalOe, BoltzmannForm) {
  RealVector r(4);
  r << 0.5, 0.3, 0.2, 0.0;
  auto rho = DensityOperator::diagonal(r);
  Povm m({oracle::diag({1, 1, 1, 0}), oracle::diag({0, 0, 0, 1})});
  EXPECT_NEAR(original_oe(rho, m), std::log(3.0), 1e-14);
}

TEST(OriginalOe, ShannonForm) {
  Rng rng(1);
  Matrix basis = random_unitary(rng, 4);
  RealVector spec = random_spectrum(rng, 4);
  auto rho = state_in_basis(basis, spec);
  EXPECT_NEAR(original_oe(rho, Povm::projective(basis)), oracle::shannon(spec), 1e-12);
}

TEST(OriginalOe, GibbsExample) {
  auto s = gibbs_example(6, 1.0, 1.0);
  EXPECT_NEAR(original_oe(s.rho, s.povm), std::log(6.0), 1e-13);
}

TEST(ClaxOe, UniformPriorGivesOriginal) {
  Rng rng(2);
  auto s = random_scenario(rng, 3, 4, Regime::general);
  auto u = DensityOperator::maximally_mixed(3);
  EXPECT_NEAR(clax_oe(s.rho, s.povm, u).value(), original_oe(s.rho, s.povm), 1e-12);
}

TEST(ClaxOe, BlockWeightsDoNotMatter) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto inst = fully_classical_instance(rng, 5, 3, ClassicalPrior::block_uniform);
    auto& s = inst.scenario;
    EXPECT_NEAR(clax_oe(s.rho, s.povm, s.gamma).value(), original_oe(s.rho, s.povm), 1e-12);
  }
}

TEST(ClaxOe, PriorEqualsStateGivesVonNeumann) {
  RealVector r(3);
  r << 0.6, 0.3, 0.1;
  auto rho = DensityOperator::diagonal(r);
  EXPECT_NEAR(clax_oe(rho, Povm::computational(3), rho).value(), oracle::shannon(r), 1e-14);
}

TEST(ClaxOe, MatchesScalarOracle) {
  Rng rng(4);
  RealVector r = random_spectrum(rng, 4), g = random_spectrum(rng, 4);
  Povm m({oracle::diag({1, 0, 1, 0}), oracle::diag({0, 1, 0, 0}), oracle::diag({0, 0, 0, 1})});
  RealVector p(3), gy(3);
  p << r(0) + r(2), r(1), r(3);
  gy << g(0) + g(2), g(1), g(3);
  EXPECT_NEAR(clax_oe(DensityOperator::diagonal(r), m, DensityOperator::diagonal(g)).value(),
              clax_oracle(r, g, p, gy), 1e-13);
}

TEST(ClaxOe, RejectsNonCommutingPrior) {
  auto s = gibbs_example(3, 1.0, 1.0);
  EXPECT_THROW(clax_oe(s.rho, s.povm, s.gamma), NonCommutingPrior);
}

TEST(S1, GibbsExample) {
  for (Eigen::Index d : {2, 3, 5}) {
    auto s = gibbs_example(d, 1.5, 1.0);
    EXPECT_NEAR(s1(s.rho, s.povm, s.gamma).value(), std::log(static_cast<double>(d)), 1e-9);
  }
}

TEST(S1, CommutingPriorReducesToClax) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    auto s = random_scenario(rng, 4, 3, Regime::commuting);
    EXPECT_NEAR(s1(s.rho, s.povm, s.gamma).value(), clax_oe(s.rho, s.povm, s.gamma).value(), 1e-9);
  }
}

TEST(S1, ThreeQubitClosedForm) {
  const double a = 1 / std::sqrt(2.0);
  auto s = three_qubit_example(a, a, 0.3, 0.5);
  // |a+b|^2 ln|a+b| + |a-b|^2 ln|a-b| with a-b = 0
  double d_cl = 2.0 * std::log(std::sqrt(2.0));
  double expect = 0.5 * std::log(1 / 0.3) + 0.5 * std::log(1 / 0.5) - d_cl;
  EXPECT_NEAR(s1(s.rho, s.povm, s.gamma).value(), expect, 1e-9);
}

TEST(S2, InfiniteOnExamples) {
  auto g = gibbs_example(4, 1.0, 1.0);
  EXPECT_TRUE(s2(g.rho, g.povm, g.gamma).is_infinite());
  auto t = three_qubit_example(0.6, 0.8, 0.3, 0.5);
  EXPECT_TRUE(s2(t.rho, t.povm, t.gamma).is_infinite());
}

TEST(S2, FullyClassicalReducesToClax) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    auto s = fully_classical_instance(rng, 4, 3).scenario;
    EXPECT_NEAR(s2(s.rho, s.povm, s.gamma).value(), clax_oe(s.rho, s.povm, s.gamma).value(), 1e-9);
  }
}

TEST(S3, GibbsClosedForms) {
  for (Eigen::Index d : {2, 4}) {
    for (double b : {0.5, 2.0}) {
      auto s = gibbs_example(d, b, 1.0);
      double v = s3(s.rho, s.povm, s.gamma).value();
      EXPECT_NEAR(v, gibbs_s3(static_cast<double>(d), b), 1e-9);
      Matrix g = s.gamma.matrix();
      double general = std::log(g.inverse().trace().real()) + g.diagonal().real().array().log().sum() / d;
      EXPECT_NEAR(v, general, 1e-9);
    }
  }
  EXPECT_NEAR(gibbs_s3(2, 1), std::log(1 + std::exp(1.0)) - 0.5, 1e-14);
  EXPECT_NEAR(gibbs_s3(2, 1), 0.813261, 1e-6);
}

TEST(S3, ThreeQubitUniformPrior) {
  const double a = 1 / std::sqrt(2.0);
  auto s = three_qubit_example(a, a, 0.125, 0.125);
  double sm = original_oe(s.rho, s.povm);
  EXPECT_NEAR(s3(s.rho, s.povm, s.gamma).value(), sm, 1e-9);
  EXPECT_NEAR(s1(s.rho, s.povm, s.gamma).value(), sm, 1e-9);
}

TEST(S3ViaProcess, FullRankIdentity) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    auto s = random_scenario(rng, 3, 4, Regime::full_rank);
    EXPECT_NEAR(s3_via_process(s.rho, s.povm, s.gamma).value(), s3(s.rho, s.povm, s.gamma).value(), 1e-8);
  }
}

TEST(S3ViaProcess, CommutingDiagonalEqualsClax) {
  RealVector r(3), g(3);
  r << 0.5, 0.3, 0.2;
  g << 0.2, 0.2, 0.6;
  auto rho = DensityOperator::diagonal(r), gamma = DensityOperator::diagonal(g);
  Povm m({oracle::diag({1, 1, 0}), oracle::diag({0, 0, 1})});
  EXPECT_NEAR(s3_via_process(rho, m, gamma).value(), clax_oe(rho, m, gamma).value(), 1e-12);
}

// Rank-one projective effects make C_M, hence tQ_R, rank deficient, and the
// process form no longer equals S^(3): here tQ_F = tQ_R exactly.
TEST(S3ViaProcess, UniformRankOneProjective) {
  Rng rng(8);
  auto rho = random_state(rng, 3);
  auto m = Povm::projective(random_unitary(rng, 3));
  auto u = DensityOperator::maximally_mixed(3);
  // S(rho) + D_BS(rho||u) - D(p||uniform) = S + (ln 3 - S) - (ln 3 - H(p)) = H(p)
  double h = oracle::shannon(measure(rho, m).probs());
  EXPECT_NEAR(s3(rho, m, u).value(), h, 1e-9);
  EXPECT_LE((tq_forward(rho, m).matrix() - tq_reverse(rho, m, u).matrix()).norm(), 1e-12);
  EXPECT_NEAR(s3_via_process(rho, m, u).value(), von_neumann(rho), 1e-9);
  auto report = compute_report(rho, m, u);
  EXPECT_FALSE(report.full_rank);
  EXPECT_FALSE(report.s3_identity_residual.has_value());
}

TEST(ClassicalIdentity, Residuals) {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    Eigen::Index d = rng.integer(2, 5), k = rng.integer(2, 5);
    auto s = random_scenario(rng, d, k, Regime::general);
    EXPECT_LE(classical_sigma_identity_check(s.rho, s.povm, DensityOperator::maximally_mixed(d)), 1e-9);
  }
  auto fc = fully_classical_instance(rng, 4, 2).scenario;
  EXPECT_LE(classical_sigma_identity_check(fc.rho, fc.povm, fc.gamma), 1e-12);

  auto gibbs = gibbs_prior({0.0, 1.0, 2.0}, 0.7);
  auto rho = DensityOperator::diagonal(random_spectrum(rng, 3));
  EXPECT_LE(classical_sigma_identity_check(rho, random_povm(rng, 3, 3), gibbs), 1e-9);
}

TEST(PetzCriterion, PriorEqualsState) {
  Rng rng(10);
  auto s = random_scenario(rng, 3, 2, Regime::general);
  auto pc = petz_criterion_check(s.gamma, s.povm, s.gamma);
  EXPECT_TRUE(pc.recovered);
  EXPECT_NEAR(pc.sigma1.value(), 0.0, 1e-9);
  EXPECT_NEAR(pc.sigma2.value(), 0.0, 1e-9);
  EXPECT_NEAR(pc.sigma3.value(), 0.0, 1e-9);
}

TEST(PetzCriterion, RecoverableBlocks) {
  Rng rng(11);
  auto s = recoverable_instance(rng, 5, 2);
  auto pc = petz_criterion_check(s.rho, s.povm, s.gamma);
  EXPECT_TRUE(pc.recovered);
  EXPECT_LE(pc.commutator_norm, 1e-7);
}

TEST(PetzCriterion, GibbsNotRecovered) {
  auto s = gibbs_example(3, 1.0, 1.0);
  auto pc = petz_criterion_check(s.rho, s.povm, s.gamma);
  EXPECT_FALSE(pc.recovered);
  EXPECT_TRUE(pc.sigma2.is_infinite());
  EXPECT_GT(pc.sigma1.value(), 0.0);
}

TEST(Monotonicity, IdentityAndMergeAll) {
  Rng rng(12);
  auto s = random_scenario(rng, 3, 3, Regime::full_rank);
  auto same = monotonicity_check(s.rho, s.povm, s.gamma, StochasticMatrix::identity(3));
  EXPECT_NEAR(*same.delta1, 0.0, 1e-12);
  EXPECT_NEAR(*same.delta3, 0.0, 1e-12);

  auto merged = post_process(s.povm, StochasticMatrix::merge_all(3));
  double cross = -trace_product_real(s.rho.matrix(), log_on_support(s.gamma.matrix()));
  EXPECT_NEAR(s1(s.rho, merged, s.gamma).value(), cross, 1e-12);
}

TEST(Monotonicity, RandomCoarseGrainings) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    auto s = random_scenario(rng, 3, 4, Regime::general);
    auto w = random_stochastic(rng, rng.integer(1, 4), 4);
    auto r = monotonicity_check(s.rho, s.povm, s.gamma, w);
    if (r.delta1) EXPECT_GE(*r.delta1, -1e-9);
    if (r.delta3) EXPECT_GE(*r.delta3, -1e-9);
  }
}

TEST(Ordering, Examples) {
  RealVector r(3), g(3);
  r << 0.5, 0.3, 0.2;
  g << 0.1, 0.6, 0.3;
  auto c = ordering_check(DensityOperator::diagonal(r), Povm::computational(3), DensityOperator::diagonal(g));
  EXPECT_NEAR(c.gap12->value(), 0.0, 1e-12);
  EXPECT_NEAR(c.gap13->value(), 0.0, 1e-12);

  auto s = gibbs_example(4, 1.0, 1.0);
  auto gg = ordering_check(s.rho, s.povm, s.gamma);
  EXPECT_TRUE(gg.gap12->is_infinite());
  EXPECT_NEAR(gg.gap13->value(), gibbs_s3(4, 1) - std::log(4.0), 1e-9);
}

TEST(Ordering, RandomFullRank) {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    auto s = random_scenario(rng, rng.integer(2, 5), rng.integer(2, 5), Regime::full_rank);
    auto c = ordering_check(s.rho, s.povm, s.gamma);
    EXPECT_TRUE(leq(0.0, *c.gap12, 1e-9));
    EXPECT_TRUE(leq(0.0, *c.gap13, 1e-9));
  }
}

TEST(JointEigenbasis, DiagonalizesBoth) {
  Rng rng(15);
  Matrix u = random_unitary(rng, 4);
  RealVector a(4), b(4);
  a << 0.4, 0.4, 0.1, 0.1;
  b << 0.1, 0.2, 0.3, 0.4;
  Matrix ma = u * a.cast<Complex>().asDiagonal() * u.adjoint();
  Matrix mb = u * b.cast<Complex>().asDiagonal() * u.adjoint();
  Matrix v = joint_eigenbasis(ma, mb);
  Matrix da = v.adjoint() * ma * v, db = v.adjoint() * mb * v;
  da.diagonal().setZero();
  db.diagonal().setZero();
  EXPECT_LE(da.norm(), 1e-10);
  EXPECT_LE(db.norm(), 1e-10);
}

TEST(Report, RegimeFlags) {
  auto s = gibbs_example(3, 1.0, 1.0);
  auto r = compute_report(s.rho, s.povm, s.gamma);
  EXPECT_EQ(r.regime, "general");
  EXPECT_TRUE(r.flags.gamma_povm);
  EXPECT_FALSE(r.s_clax.has_value());
  EXPECT_TRUE(r.s2.is_infinite());
  EXPECT_FALSE(r.s3_identity_residual.has_value());
}
