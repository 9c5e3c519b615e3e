#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qoe/qstate.hpp"
#include "qoe/scenario.hpp"

using namespace qoe;

TEST(DensityOperator, RejectsInvalid) {
  EXPECT_THROW(DensityOperator(oracle::diag({0.6, 0.6})), ValidationError);
  EXPECT_THROW(DensityOperator(oracle::diag({1.2, -0.2})), ValidationError);
}

TEST(DensityOperator, NonHermitianNamesInvariant) {
  Matrix a(2, 2);
  a << 0.5, 0.3, 0.0, 0.5;
  try {
    DensityOperator{a};
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "hermitian");
    EXPECT_NEAR(e.residual(), 0.3, 1e-15);
  }
}

TEST(DensityOperator, TraceErrorNamesResidual) {
  try {
    DensityOperator(oracle::diag({0.5, 0.6}));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NEAR(e.residual(), 0.1, 1e-12);
  }
}

TEST(Povm, ClosureViolationReportsResidual) {
  try {
    Povm({0.45 * Matrix::Identity(2, 2), 0.45 * Matrix::Identity(2, 2)});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "closure");
    EXPECT_NEAR(e.residual(), 0.1, 1e-12);
    EXPECT_NE(std::string(e.what()).find("0.1"), std::string::npos);
  }
}

TEST(Povm, RejectsNegativeEffect) {
  EXPECT_THROW(Povm({oracle::diag({1.5, 1}), oracle::diag({-0.5, 0})}), ValidationError);
}

TEST(Measure, MaximallyMixedGivesVolumes) {
  Rng rng(21);
  auto m = random_povm(rng, 4, std::vector<Eigen::Index>{1, 2, 4});
  auto p = measure(DensityOperator::maximally_mixed(4), m);
  RealVector v = m.volumes();
  for (Eigen::Index y = 0; y < 3; ++y) EXPECT_NEAR(p[y], v(y) / 4.0, 1e-12);
}

TEST(Measure, UnbiasedStateInEnergyBasis) {
  const Eigen::Index d = 5;
  Vector psi = Vector::Constant(d, 1.0 / std::sqrt(5.0));
  auto p = measure(DensityOperator::pure(psi), Povm::computational(d));
  for (Eigen::Index y = 0; y < d; ++y) EXPECT_NEAR(p[y], 0.2, 1e-14);
}

TEST(Measure, ThreeQubitParityStatistics) {
  const double a = 0.6, b = 0.8;
  auto s = three_qubit_example(a, b, 0.3, 0.5);
  auto p = measure(s.rho, s.povm);
  // brute-force inner products: <s1 s2 s3|psi> with |+-> signs
  for (int y = 0; y < 8; ++y) {
    int minus = __builtin_popcount(static_cast<unsigned>(y));
    double amp = (a + (minus % 2 ? -b : b)) / std::sqrt(8.0);
    EXPECT_NEAR(p[y], amp * amp, 1e-13) << "outcome " << y;
  }
}

TEST(MeasurementChannel, Examples) {
  Rng rng(2);
  auto rho = random_state(rng, 3);
  auto one = measurement_channel_output(rho, Povm::trivial(3));
  EXPECT_EQ(one.dim(), 1);
  EXPECT_NEAR(one.matrix()(0, 0).real(), 1.0, 1e-14);

  auto diag = DensityOperator::diagonal(RealVector::Map(std::vector<double>{0.2, 0.5, 0.3}.data(), 3));
  auto out = measurement_channel_output(diag, Povm::computational(3));
  EXPECT_LE((out.matrix() - diag.matrix()).norm(), 1e-15);

  auto g = gibbs_example(4, 1.0, 1.0);
  EXPECT_LE((measurement_channel_output(g.rho, g.povm).matrix() - 0.25 * Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(GibbsPrior, ScalarOracle) {
  auto g = gibbs_prior({0.0, 1.0}, 1.0);
  double z = 1.0 + std::exp(-1.0);
  EXPECT_NEAR(g.matrix()(0, 0).real(), 1.0 / z, 1e-15);
  EXPECT_NEAR(g.matrix()(1, 1).real(), std::exp(-1.0) / z, 1e-15);
}

TEST(GibbsPrior, HighTemperatureAndDegenerate) {
  auto hot = gibbs_prior({0.0, 3.0, 7.0}, 1e-12);
  EXPECT_LE((hot.matrix() - Matrix::Identity(3, 3) / 3.0).norm(), 1e-9);
  auto flat = gibbs_prior({2.5, 2.5, 2.5, 2.5}, 4.0);
  EXPECT_EQ(flat.matrix(), Matrix(Matrix::Identity(4, 4) / 4.0));
}

TEST(GibbsPrior, RejectsNonPositiveBeta) {
  EXPECT_THROW(gibbs_prior({0.0, 1.0}, 0.0), NonPositiveBeta);
  EXPECT_THROW(gibbs_prior({0.0, 1.0}, -1.0), NonPositiveBeta);
}

TEST(PostProcess, IdentityAndMergeAll) {
  Rng rng(4);
  auto m = random_povm(rng, 3, 4);
  auto same = post_process(m, StochasticMatrix::identity(4));
  for (std::size_t y = 0; y < 4; ++y) EXPECT_LE((same[y] - m[y]).norm(), 1e-15);
  auto merged = post_process(m, StochasticMatrix::merge_all(4));
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_LE((merged[0] - Matrix::Identity(3, 3)).norm(), 1e-9);
}

TEST(PostProcess, RandomClosure) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    auto m = random_povm(rng, 4, 3);
    auto w = random_stochastic(rng, 5, 3);
    auto out = post_process(m, w);
    Matrix sum = Matrix::Zero(4, 4);
    for (std::size_t z = 0; z < out.size(); ++z) sum += out[z];
    EXPECT_LE((sum - Matrix::Identity(4, 4)).norm(), 1e-9);
  }
}

TEST(PostProcess, RejectsWrongWidth) {
  Rng rng(8);
  EXPECT_THROW(post_process(Povm::computational(3), random_stochastic(rng, 2, 4)), DimensionMismatch);
}

TEST(StochasticMatrix, RejectsBadColumns) {
  RealMatrix w(2, 2);
  w << 0.5, 0.2, 0.4, 0.8;
  EXPECT_THROW(StochasticMatrix{w}, ValidationError);
}
