#pragma once

// States, priors, POVMs, the measurement channel and classical
// post-processing of measurement outcomes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qoe/linop.hpp"

namespace qoe {

namespace detail {
inline std::string fmt_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r);
  return buf;
}
}  // namespace detail

// Hermitian PSD unit-trace operator.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m, const Tolerance& tol = {}) {
    require_square(m, "DensityOperator");
    double herm = anti_hermitian_residual(m);
    if (herm > tol.herm_tol * std::max(1.0, max_abs(m))) {
      throw ValidationError("hermitian", herm,
                            "density operator: anti-Hermitian residual " + detail::fmt_residual(herm));
    }
    mat_ = hermitian_part(m);
    double min_eig = eig_hermitian(mat_, tol).eigenvalues.minCoeff();
    if (min_eig < -tol.eig_cut) {
      throw ValidationError("positive", -min_eig,
                            "density operator: negative eigenvalue " + detail::fmt_residual(min_eig));
    }
    double trace_dev = std::abs(mat_.trace().real() - 1.0);
    if (trace_dev > 1e-10) {
      throw ValidationError("unit-trace", trace_dev,
                            "density operator: trace deviates from 1 by " + detail::fmt_residual(trace_dev));
    }
  }

  static DensityOperator maximally_mixed(Eigen::Index d) {
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  static DensityOperator pure(const Vector& psi) {
    Vector v = psi / psi.norm();
    return DensityOperator(v * v.adjoint());
  }

  static DensityOperator diagonal(const RealVector& probs) {
    return DensityOperator(probs.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
};

// Ordered list of PSD effects summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<Matrix> effects, const Tolerance& tol = {}) : effects_(std::move(effects)) {
    if (effects_.empty()) throw ValidationError("non-empty", 0.0, "POVM has no effects");
    const Eigen::Index d = effects_.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t y = 0; y < effects_.size(); ++y) {
      Matrix& e = effects_[y];
      if (e.rows() != d || e.cols() != d) {
        throw DimensionMismatch("POVM effect " + std::to_string(y) + " has wrong dimension");
      }
      double herm = anti_hermitian_residual(e);
      if (herm > tol.herm_tol * std::max(1.0, max_abs(e))) {
        throw ValidationError("hermitian", herm,
                              "POVM effect " + std::to_string(y) + ": anti-Hermitian residual " +
                                  detail::fmt_residual(herm));
      }
      e = hermitian_part(e);
      double min_eig = eig_hermitian(e, tol).eigenvalues.minCoeff();
      if (min_eig < -tol.eig_cut * std::max(1.0, max_abs(e))) {
        throw ValidationError("positive", -min_eig,
                              "POVM effect " + std::to_string(y) + ": negative eigenvalue " +
                                  detail::fmt_residual(min_eig));
      }
      sum += e;
    }
    Matrix gap = sum - Matrix::Identity(d, d);
    double closure = gap.norm();
    if (closure > 1e-9) {
      // Report the operator-norm residual; the check itself is Frobenius.
      double op_norm = eig_hermitian(gap, tol).eigenvalues.cwiseAbs().maxCoeff();
      throw ValidationError("closure", op_norm,
                            "POVM closure residual " + detail::fmt_residual(op_norm) +
                                " (Frobenius " + detail::fmt_residual(closure) + "): effects must sum to identity");
    }
  }

  // Rank-1 projective measurement onto the columns of an orthonormal basis.
  static Povm projective(const Matrix& basis_columns) {
    std::vector<Matrix> effects;
    effects.reserve(basis_columns.cols());
    for (Eigen::Index k = 0; k < basis_columns.cols(); ++k) {
      effects.emplace_back(basis_columns.col(k) * basis_columns.col(k).adjoint());
    }
    return Povm(std::move(effects));
  }

  static Povm computational(Eigen::Index d) { return projective(Matrix::Identity(d, d)); }

  static Povm trivial(Eigen::Index d) { return Povm({Matrix::Identity(d, d)}); }

  const std::vector<Matrix>& effects() const { return effects_; }
  const Matrix& operator[](std::size_t y) const { return effects_[y]; }
  std::size_t size() const { return effects_.size(); }
  Eigen::Index dim() const { return effects_.front().rows(); }

  // V_y = Tr[Pi_y]
  RealVector volumes() const {
    RealVector v(size());
    for (std::size_t y = 0; y < size(); ++y) v(y) = effects_[y].trace().real();
    return v;
  }

 private:
  std::vector<Matrix> effects_;
};

// Probability vector (outcome statistics, or a distribution over
// preparation indices).
class OutcomeDistribution {
 public:
  explicit OutcomeDistribution(RealVector probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw ValidationError("non-empty", 0.0, "empty distribution");
    double min_p = probs_.minCoeff();
    if (min_p < 0.0) {
      throw ValidationError("nonnegative", -min_p, "distribution has negative entry " + detail::fmt_residual(min_p));
    }
    double dev = std::abs(probs_.sum() - 1.0);
    if (dev > 1e-10) {
      throw ValidationError("normalized", dev, "distribution sum deviates from 1 by " + detail::fmt_residual(dev));
    }
  }

  static OutcomeDistribution uniform(Eigen::Index n) {
    return OutcomeDistribution(RealVector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  const RealVector& probs() const { return probs_; }
  double operator[](Eigen::Index i) const { return probs_(i); }
  Eigen::Index size() const { return probs_.size(); }

 private:
  struct Unchecked {};
  OutcomeDistribution(RealVector probs, Unchecked) : probs_(std::move(probs)) {}

  friend OutcomeDistribution measure(const DensityOperator&, const Povm&);

  RealVector probs_;
};

// Column-stochastic matrix w(z, y): column y is the distribution of the new
// label z given the old outcome y.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(RealMatrix w) : w_(std::move(w)) {
    if (w_.size() == 0) throw ValidationError("non-empty", 0.0, "empty stochastic matrix");
    double min_w = w_.minCoeff();
    if (min_w < 0.0) {
      throw ValidationError("nonnegative", -min_w, "stochastic matrix has negative entry");
    }
    double dev = (w_.colwise().sum().array() - 1.0).abs().maxCoeff();
    if (dev > 1e-10) {
      throw ValidationError("column-stochastic", dev,
                            "stochastic matrix column sum deviates from 1 by " + detail::fmt_residual(dev));
    }
  }

  static StochasticMatrix identity(Eigen::Index m) { return StochasticMatrix(RealMatrix::Identity(m, m)); }
  static StochasticMatrix merge_all(Eigen::Index m) { return StochasticMatrix(RealMatrix::Ones(1, m)); }

  const RealMatrix& matrix() const { return w_; }
  Eigen::Index outputs() const { return w_.rows(); }
  Eigen::Index inputs() const { return w_.cols(); }

 private:
  RealMatrix w_;
};

// p_y = Re Tr[Pi_y rho]. Roundoff negatives above -1e-12 are clipped; the
// vector is renormalized only when it is already within 1e-10 of unit sum.
inline OutcomeDistribution measure(const DensityOperator& rho, const Povm& m) {
  if (rho.dim() != m.dim()) {
    throw DimensionMismatch("measure: state dimension " + std::to_string(rho.dim()) +
                            " vs POVM dimension " + std::to_string(m.dim()));
  }
  RealVector p(m.size());
  for (std::size_t y = 0; y < m.size(); ++y) {
    double v = trace_product_real(m[y], rho.matrix());
    if (v < -1e-12) {
      throw ValidationError("nonnegative", -v, "measure: outcome probability " + detail::fmt_residual(v));
    }
    p(y) = std::max(v, 0.0);
  }
  double total = p.sum();
  if (std::abs(total - 1.0) < 1e-10) p /= total;
  return OutcomeDistribution(std::move(p), OutcomeDistribution::Unchecked{});
}

// M(rho) = sum_y Tr[Pi_y rho] |y><y| on the m-dimensional outcome register.
inline DensityOperator measurement_channel_output(const DensityOperator& rho, const Povm& m) {
  return DensityOperator::diagonal(measure(rho, m).probs());
}

// gamma = exp(-beta H) / Z for H = diag(energies).
inline DensityOperator gibbs_prior(const std::vector<double>& energies, double beta) {
  if (!(beta > 0.0)) throw NonPositiveBeta("gibbs_prior: beta must be positive");
  if (energies.empty()) throw InvalidParameters("gibbs_prior: empty spectrum");
  const double e_min = *std::min_element(energies.begin(), energies.end());
  RealVector w(static_cast<Eigen::Index>(energies.size()));
  for (std::size_t n = 0; n < energies.size(); ++n) w(n) = std::exp(-beta * (energies[n] - e_min));
  w /= w.sum();
  return DensityOperator::diagonal(w);
}

// Pi'_z = sum_y w(z, y) Pi_y
inline Povm post_process(const Povm& m, const StochasticMatrix& w) {
  if (static_cast<std::size_t>(w.inputs()) != m.size()) {
    throw DimensionMismatch("post_process: stochastic matrix has " + std::to_string(w.inputs()) +
                            " columns for a " + std::to_string(m.size()) + "-outcome POVM");
  }
  std::vector<Matrix> out;
  out.reserve(w.outputs());
  for (Eigen::Index z = 0; z < w.outputs(); ++z) {
    Matrix e = Matrix::Zero(m.dim(), m.dim());
    for (std::size_t y = 0; y < m.size(); ++y) e += w.matrix()(z, y) * m[y];
    out.push_back(std::move(e));
  }
  return Povm(std::move(out));
}

}  // namespace qoe
