#pragma once

// Retrodiction for measurement channels: the Petz recovery map, forward and
// reverse Choi operators, the input-output process operators Q_F, Q_R and
// their spectrum-preserving variants, and the classical prepare-and-measure
// joint tables.
//
// Composite operators live on (B, A) = (outcome register, system) with the
// outcome register first; see linop.hpp for the index convention.

#include <string>
#include <vector>

#include "qoe/divergence.hpp"
#include "qoe/linop.hpp"
#include "qoe/qstate.hpp"

namespace qoe {

enum class ChoiDirection { forward, reverse };

struct ChoiOperator {
  Matrix mat;
  Eigen::Index dim_outcomes;  // B
  Eigen::Index dim_system;    // A
  ChoiDirection direction;
};

enum class ProcessKind { QF, QR, tQF, tQR };

inline const char* to_string(ProcessKind k) {
  switch (k) {
    case ProcessKind::QF: return "Q_F";
    case ProcessKind::QR: return "Q_R";
    case ProcessKind::tQF: return "tQ_F";
    case ProcessKind::tQR: return "tQ_R";
  }
  return "?";
}

// Hermitian PSD unit-trace operator on (B, A) representing a process.
class ProcessOperator {
 public:
  ProcessOperator(Matrix m, Eigen::Index dim_outcomes, Eigen::Index dim_system, ProcessKind kind,
                  const Tolerance& tol = {})
      : mat_(hermitian_part(m)), dim_outcomes_(dim_outcomes), dim_system_(dim_system), kind_(kind) {
    if (mat_.rows() != dim_outcomes * dim_system) {
      throw DimensionMismatch(std::string(to_string(kind)) + ": wrong composite dimension");
    }
    double herm = anti_hermitian_residual(m);
    if (herm > 1e-9 * std::max(1.0, max_abs(m))) {
      throw ValidationError("hermitian", herm, std::string(to_string(kind)) + " is not Hermitian");
    }
    double min_eig = eig_hermitian(mat_, tol).eigenvalues.minCoeff();
    if (min_eig < -1e-9) {
      throw ValidationError("positive", -min_eig, std::string(to_string(kind)) + " is not PSD");
    }
    double dev = std::abs(mat_.trace().real() - 1.0);
    if (dev > 1e-9) {
      throw ValidationError("unit-trace", dev, std::string(to_string(kind)) + " does not have unit trace");
    }
  }

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim_outcomes() const { return dim_outcomes_; }
  Eigen::Index dim_system() const { return dim_system_; }
  ProcessKind kind() const { return kind_; }

  // Tr_A: marginal on the outcome register.
  Matrix outcome_marginal() const { return partial_trace(mat_, dim_outcomes_, dim_system_, Factor::second); }
  // Tr_B: marginal on the system.
  Matrix system_marginal() const { return partial_trace(mat_, dim_outcomes_, dim_system_, Factor::first); }

 private:
  Matrix mat_;
  Eigen::Index dim_outcomes_;
  Eigen::Index dim_system_;
  ProcessKind kind_;
};

// Row x = preparation index, column y = outcome.
class JointTable {
 public:
  explicit JointTable(RealMatrix table) : table_(std::move(table)) {
    if (table_.size() == 0) throw ValidationError("non-empty", 0.0, "empty joint table");
    double min_p = table_.minCoeff();
    if (min_p < 0.0) throw ValidationError("nonnegative", -min_p, "joint table has a negative entry");
    double dev = std::abs(table_.sum() - 1.0);
    if (dev > 1e-10) throw ValidationError("normalized", dev, "joint table does not sum to 1");
  }

  const RealMatrix& table() const { return table_; }
  double operator()(Eigen::Index x, Eigen::Index y) const { return table_(x, y); }
  RealVector preparation_marginal() const { return table_.rowwise().sum(); }
  RealVector outcome_marginal() const { return table_.colwise().sum().transpose(); }
  RealVector flattened() const { return table_.reshaped(); }

 private:
  RealMatrix table_;
};

inline ExtendedReal kl(const JointTable& p, const JointTable& q, const Tolerance& tol = {}) {
  if (p.table().rows() != q.table().rows() || p.table().cols() != q.table().cols()) {
    throw DimensionMismatch("kl: joint tables differ in shape");
  }
  return kl(p.flattened(), q.flattened(), tol);
}

namespace detail {

// Tr[Pi_y gamma] per outcome.
inline RealVector prior_outcome_weights(const Povm& m, const Matrix& gamma) {
  RealVector g(m.size());
  for (std::size_t y = 0; y < m.size(); ++y) g(y) = trace_product_real(m[y], gamma);
  return g;
}

// Per-outcome reweighting t_y / g_y with the convention that outcomes the
// prior rules out are dropped, unless the evidence insists on them.
inline RealVector evidence_ratios(const RealVector& evidence, const RealVector& g, const Tolerance& tol,
                                  const char* who) {
  RealVector r(g.size());
  for (Eigen::Index y = 0; y < g.size(); ++y) {
    if (g(y) <= tol.eig_cut) {
      if (evidence(y) > tol.support_tol) {
        throw FalsifyingEvidence(std::string(who) + ": outcome " + std::to_string(y) +
                                 " has weight " + std::to_string(evidence(y)) +
                                 " but the prior assigns it probability " + std::to_string(g(y)));
      }
      r(y) = 0.0;
    } else {
      r(y) = evidence(y) / g(y);
    }
  }
  return r;
}

// The Petz map of the measurement channel is linear; this evaluates it on an
// arbitrary operator on the outcome register (only the diagonal matters).
inline Matrix petz_map_linear(const Povm& m, const Matrix& sqrt_gamma, const RealVector& g,
                              const Matrix& tau, const Tolerance& tol) {
  RealVector diag = tau.diagonal().real();
  RealVector r(g.size());
  for (Eigen::Index y = 0; y < g.size(); ++y) r(y) = g(y) <= tol.eig_cut ? 0.0 : diag(y) / g(y);
  const Eigen::Index d = m.dim();
  Matrix inner = Matrix::Zero(d, d);
  for (std::size_t y = 0; y < m.size(); ++y) {
    if (r(y) != 0.0) inner += r(y) * m[y];
  }
  return sqrt_gamma * inner * sqrt_gamma;
}

inline Matrix diag_matrix(const RealVector& v) { return v.cast<Complex>().asDiagonal().toDenseMatrix(); }

inline void require_dims(const DensityOperator& a, const Povm& m, const char* who) {
  if (a.dim() != m.dim()) {
    throw DimensionMismatch(std::string(who) + ": operator dimension " + std::to_string(a.dim()) +
                            " vs POVM dimension " + std::to_string(m.dim()));
  }
}

}  // namespace detail

// Petz recovery map of the measurement channel with prior gamma, applied to
// a state tau of the outcome register:
//   sum_y <y|tau|y> / Tr[Pi_y gamma] * sqrt(gamma) Pi_y sqrt(gamma).
inline DensityOperator petz_map_apply(const Povm& m, const DensityOperator& gamma, const DensityOperator& tau,
                                      const Tolerance& tol = {}) {
  detail::require_dims(gamma, m, "petz_map_apply");
  if (static_cast<std::size_t>(tau.dim()) != m.size()) {
    throw DimensionMismatch("petz_map_apply: evidence lives on a " + std::to_string(tau.dim()) +
                            "-dimensional register, POVM has " + std::to_string(m.size()) + " outcomes");
  }
  RealVector g = detail::prior_outcome_weights(m, gamma.matrix());
  RealVector t = tau.matrix().diagonal().real();
  detail::evidence_ratios(t, g, tol, "petz_map_apply");
  Matrix out = detail::petz_map_linear(m, sqrt_psd(gamma.matrix(), tol), g, tau.matrix(), tol);
  return DensityOperator(out, tol);
}

// C_M = sum_y |y><y| (x) Pi_y^T
inline ChoiOperator choi_forward(const Povm& m) {
  const Eigen::Index d = m.dim();
  const Eigen::Index k = static_cast<Eigen::Index>(m.size());
  Matrix c = Matrix::Zero(k * d, k * d);
  for (Eigen::Index y = 0; y < k; ++y) c.block(y * d, y * d, d, d) = m[y].transpose();
  return {c, k, d, ChoiDirection::forward};
}

// sum_{k,l} |k><l| (x) Petz(|k><l|), built by applying the map to every
// matrix unit of the outcome register.
inline ChoiOperator choi_reverse(const Povm& m, const DensityOperator& gamma, const Tolerance& tol = {}) {
  detail::require_dims(gamma, m, "choi_reverse");
  RealVector g = detail::prior_outcome_weights(m, gamma.matrix());
  for (Eigen::Index y = 0; y < g.size(); ++y) {
    if (g(y) <= tol.eig_cut) {
      throw FalsifyingEvidence("choi_reverse: prior gives outcome " + std::to_string(y) + " probability " +
                               std::to_string(g(y)));
    }
  }
  const Eigen::Index d = m.dim();
  const Eigen::Index k = static_cast<Eigen::Index>(m.size());
  Matrix sqrt_gamma = sqrt_psd(gamma.matrix(), tol);
  Matrix c = Matrix::Zero(k * d, k * d);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      Matrix unit = Matrix::Zero(k, k);
      unit(i, j) = 1.0;
      c.block(i * d, j * d, d, d) = detail::petz_map_linear(m, sqrt_gamma, g, unit, tol);
    }
  }
  return {c, k, d, ChoiDirection::reverse};
}

// Frobenius distance between the transposed reverse Choi operator and
// (M(gamma)^-1/2 (x) sqrt(gamma^T)) C_M (M(gamma)^-1/2 (x) sqrt(gamma^T)).
inline double choi_relation_residual(const Povm& m, const DensityOperator& gamma, const Tolerance& tol = {}) {
  Matrix lhs = transpose(choi_reverse(m, gamma, tol).mat);
  RealVector g = detail::prior_outcome_weights(m, gamma.matrix());
  Matrix left = kron(detail::diag_matrix(g.cwiseSqrt().cwiseInverse()), transpose(sqrt_psd(gamma.matrix(), tol)));
  Matrix rhs = left * choi_forward(m).mat * left;
  return (lhs - rhs).norm();
}

// Q_F = (1 (x) sqrt(rho^T)) C_M (1 (x) sqrt(rho^T))
inline ProcessOperator q_forward(const DensityOperator& rho, const Povm& m, const Tolerance& tol = {}) {
  detail::require_dims(rho, m, "q_forward");
  const auto k = static_cast<Eigen::Index>(m.size());
  Matrix side = kron(Matrix::Identity(k, k), transpose(sqrt_psd(rho.matrix(), tol)));
  return ProcessOperator(side * choi_forward(m).mat * side, k, m.dim(), ProcessKind::QF, tol);
}

// Q_R = (sqrt(tau) M(gamma)^-1/2 (x) sqrt(gamma^T)) C_M (M(gamma)^-1/2 sqrt(tau) (x) sqrt(gamma^T))
// with tau = M(rho). Outcomes with p_y = Tr[Pi_y gamma] = 0 contribute nothing.
inline ProcessOperator q_reverse(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                 const Tolerance& tol = {}) {
  detail::require_dims(rho, m, "q_reverse");
  detail::require_dims(gamma, m, "q_reverse");
  const auto k = static_cast<Eigen::Index>(m.size());
  RealVector p = measure(rho, m).probs();
  RealVector g = detail::prior_outcome_weights(m, gamma.matrix());
  RealVector ratio = detail::evidence_ratios(p, g, tol, "q_reverse");
  Matrix left = kron(detail::diag_matrix(ratio.cwiseSqrt()), transpose(sqrt_psd(gamma.matrix(), tol)));
  return ProcessOperator(left * choi_forward(m).mat * left.adjoint(), k, m.dim(), ProcessKind::QR, tol);
}

// sqrt(C_M), computed block by block from sqrt(Pi_y^T).
inline Matrix sqrt_choi_forward(const Povm& m, const Tolerance& tol = {}) {
  const Eigen::Index d = m.dim();
  const auto k = static_cast<Eigen::Index>(m.size());
  Matrix s = Matrix::Zero(k * d, k * d);
  for (Eigen::Index y = 0; y < k; ++y) s.block(y * d, y * d, d, d) = sqrt_psd(m[y].transpose(), tol);
  return s;
}

// tQ_F = sqrt(C_M) (1 (x) rho^T) sqrt(C_M)
inline ProcessOperator tq_forward(const DensityOperator& rho, const Povm& m, const Tolerance& tol = {}) {
  detail::require_dims(rho, m, "tq_forward");
  const auto k = static_cast<Eigen::Index>(m.size());
  Matrix root = sqrt_choi_forward(m, tol);
  Matrix mid = kron(Matrix::Identity(k, k), transpose(rho.matrix()));
  return ProcessOperator(root * mid * root, k, m.dim(), ProcessKind::tQF, tol);
}

// tQ_R = sqrt(C_M) (M(gamma)^-1/2 tau M(gamma)^-1/2 (x) gamma^T) sqrt(C_M), tau = M(rho)
inline ProcessOperator tq_reverse(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                  const Tolerance& tol = {}) {
  detail::require_dims(rho, m, "tq_reverse");
  detail::require_dims(gamma, m, "tq_reverse");
  const auto k = static_cast<Eigen::Index>(m.size());
  RealVector p = measure(rho, m).probs();
  RealVector g = detail::prior_outcome_weights(m, gamma.matrix());
  RealVector ratio = detail::evidence_ratios(p, g, tol, "tq_reverse");
  Matrix root = sqrt_choi_forward(m, tol);
  Matrix mid = kron(detail::diag_matrix(ratio), transpose(gamma.matrix()));
  return ProcessOperator(root * mid * root, k, m.dim(), ProcessKind::tQR, tol);
}

// P_F(x, y) = lambda_x <psi_x|Pi_y|psi_x>, with psi_x the columns of eigvecs.
inline JointTable classical_forward(const OutcomeDistribution& lambdas, const Matrix& eigvecs, const Povm& m) {
  if (eigvecs.rows() != m.dim() || eigvecs.cols() != lambdas.size()) {
    throw DimensionMismatch("classical_forward: decomposition does not match POVM dimension");
  }
  RealMatrix t(lambdas.size(), m.size());
  for (Eigen::Index x = 0; x < lambdas.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      double lik = std::max((eigvecs.col(x).adjoint() * m[y] * eigvecs.col(x))(0, 0).real(), 0.0);
      t(x, y) = lambdas[x] * lik;
    }
  }
  double s = t.sum();
  if (s > 0.0 && std::abs(s - 1.0) < 1e-8) t /= s;
  return JointTable(std::move(t));
}

// Jeffrey update: P_R(x, y) = q_y gamma_x P_F(y|x) / sum_x' gamma_x' P_F(y|x').
inline JointTable classical_reverse(const OutcomeDistribution& prior, const Matrix& eigvecs, const Povm& m,
                                    const OutcomeDistribution& q, const Tolerance& tol = {}) {
  if (eigvecs.rows() != m.dim() || eigvecs.cols() != prior.size() ||
      static_cast<std::size_t>(q.size()) != m.size()) {
    throw DimensionMismatch("classical_reverse: inputs do not match POVM");
  }
  RealMatrix joint(prior.size(), m.size());
  for (Eigen::Index x = 0; x < prior.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      double lik = std::max((eigvecs.col(x).adjoint() * m[y] * eigvecs.col(x))(0, 0).real(), 0.0);
      joint(x, y) = prior[x] * lik;
    }
  }
  RealVector norm = joint.colwise().sum().transpose();
  RealVector ratio = detail::evidence_ratios(q.probs(), norm, tol, "classical_reverse");
  RealMatrix t = joint * ratio.asDiagonal();
  double s = t.sum();
  if (s > 0.0 && std::abs(s - 1.0) < 1e-8) t /= s;
  return JointTable(std::move(t));
}

}  // namespace qoe
