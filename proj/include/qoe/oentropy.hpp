#pragma once

// Observational entropy with a reference prior gamma.
//
//   S_M        original definition, implicit uniform prior
//   S_clax     commuting-prior generalization, requires [rho, gamma] = 0
//   S^(1)      S(rho) + D(rho||gamma) - D(M(rho)||M(gamma))          (Umegaki)
//   S^(2)      S(rho) + D(Q_F||Q_R)                                  (Umegaki on processes)
//   S^(3)      S(rho) + D_BS(rho||gamma) - D(M(rho)||M(gamma))       (Belavkin-Staszewski)
//
// together with checkers for the structural properties these quantities are
// expected to satisfy. All values are in nats.

#include <optional>
#include <string>
#include <vector>

#include "qoe/divergence.hpp"
#include "qoe/extended_real.hpp"
#include "qoe/qstate.hpp"
#include "qoe/retro.hpp"

namespace qoe {

// Relative commutator threshold used to classify regimes.
inline constexpr double kCommutingTol = 1e-9;

// -sum_y p_y ln(p_y / V_y)
inline double original_oe(const DensityOperator& rho, const Povm& m) {
  RealVector p = measure(rho, m).probs();
  RealVector v = m.volumes();
  double s = 0.0;
  for (Eigen::Index y = 0; y < p.size(); ++y) {
    if (p(y) > 0.0) s -= p(y) * std::log(p(y) / v(y));
  }
  return s;
}

namespace detail {

inline void require_commuting_prior(const DensityOperator& rho, const DensityOperator& gamma, const char* who) {
  double c = commutator(rho.matrix(), gamma.matrix()).norm();
  double bound = kCommutingTol * rho.matrix().norm() * gamma.matrix().norm();
  if (c > bound) {
    throw NonCommutingPrior(std::string(who) + ": ||[rho, gamma]||_F = " + std::to_string(c) +
                            " exceeds the commuting threshold");
  }
}

// Input-side divergence minus the (classical) output-side divergence. The
// output term cannot be infinite when the input term is finite.
inline ExtendedReal deficiency(ExtendedReal input, ExtendedReal output, const char* who) {
  if (input.is_infinite()) return ExtendedReal::infinity();
  auto d = difference(input, output);
  if (!d) {
    throw NumericalError(std::string(who) + ": output divergence infinite while input divergence is finite");
  }
  return *d;
}

inline ExtendedReal output_divergence(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                      const Tolerance& tol) {
  return kl(measure(rho, m), measure(gamma, m), tol);
}

}  // namespace detail

// -Tr[rho ln gamma] - D(M(rho)||M(gamma)), only for commuting rho and gamma.
inline ExtendedReal clax_oe(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                            const Tolerance& tol = {}) {
  detail::require_commuting_prior(rho, gamma, "clax_oe");
  if (!support_leq(rho.matrix(), gamma.matrix(), tol)) return ExtendedReal::infinity();
  Matrix log_gamma = log_on_support(gamma.matrix(), tol);
  double cross = -trace_product_real(rho.matrix(), log_gamma);
  return detail::deficiency(cross, detail::output_divergence(rho, m, gamma, tol), "clax_oe");
}

inline ExtendedReal sigma1(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                           const Tolerance& tol = {}) {
  return detail::deficiency(umegaki(rho, gamma, tol), detail::output_divergence(rho, m, gamma, tol), "sigma1");
}

inline ExtendedReal s1(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                       const Tolerance& tol = {}) {
  return von_neumann(rho, tol) + sigma1(rho, m, gamma, tol);
}

// D(Q_F||Q_R). The support test inside umegaki runs before any logarithm.
inline ExtendedReal sigma2(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                           const Tolerance& tol = {}) {
  return umegaki(q_forward(rho, m, tol).matrix(), q_reverse(rho, m, gamma, tol).matrix(), tol);
}

inline ExtendedReal s2(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                       const Tolerance& tol = {}) {
  return von_neumann(rho, tol) + sigma2(rho, m, gamma, tol);
}

inline ExtendedReal sigma3(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                           const Tolerance& tol = {}) {
  return detail::deficiency(belavkin_staszewski(rho, gamma, tol), detail::output_divergence(rho, m, gamma, tol),
                            "sigma3");
}

inline ExtendedReal s3(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                       const Tolerance& tol = {}) {
  return von_neumann(rho, tol) + sigma3(rho, m, gamma, tol);
}

// S(rho) + D_BS(tQ_F||tQ_R): the irretrodictability form of S^(3).
inline ExtendedReal s3_via_process(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                   const Tolerance& tol = {}) {
  auto forward = tq_forward(rho, m, tol);
  auto reverse = tq_reverse(rho, m, gamma, tol);
  return von_neumann(rho, tol) + belavkin_staszewski(forward.matrix(), reverse.matrix(), tol);
}

// Orthonormal basis diagonalizing two commuting Hermitian operators: the
// eigenbasis of a, rotated inside each (near-)degenerate eigenspace of a so
// that b is diagonal there too.
inline Matrix joint_eigenbasis(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
  auto e = eig_hermitian(a, tol);
  Matrix v = e.eigenvectors;
  const Eigen::Index n = a.rows();
  const double gap = 1e-8 * std::max(1.0, e.eigenvalues.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && e.eigenvalues(end - 1) - e.eigenvalues(end) <= gap) ++end;
    if (end - start > 1) {
      Matrix block = v.middleCols(start, end - start);
      Matrix restricted = block.adjoint() * b * block;
      auto inner = eig_hermitian(hermitian_part(restricted), tol);
      v.middleCols(start, end - start) = block * inner.eigenvectors;
    }
    start = end;
  }
  return v;
}

namespace detail {

inline OutcomeDistribution diagonal_weights(const Matrix& basis, const Matrix& op) {
  RealVector w = (basis.adjoint() * op * basis).diagonal().real().cwiseMax(0.0);
  w /= w.sum();
  return OutcomeDistribution(std::move(w));
}

}  // namespace detail

// |D(P_F||P_R) - (D(rho||gamma) - D(M(rho)||M(gamma)))| for commuting rho and
// gamma, with the classical processes built in a joint eigenbasis and the
// retrodictor fed the actual outcome statistics. Agreeing infinities give 0.
inline double classical_sigma_identity_check(const DensityOperator& rho, const Povm& m,
                                             const DensityOperator& gamma, const Tolerance& tol = {}) {
  detail::require_commuting_prior(rho, gamma, "classical_sigma_identity_check");
  Matrix basis = joint_eigenbasis(rho.matrix(), gamma.matrix(), tol);
  auto lambdas = detail::diagonal_weights(basis, rho.matrix());
  auto prior = detail::diagonal_weights(basis, gamma.matrix());
  auto forward = classical_forward(lambdas, basis, m);
  auto reverse = classical_reverse(prior, basis, m, measure(rho, m), tol);
  ExtendedReal lhs = kl(forward, reverse, tol);
  ExtendedReal rhs = sigma1(rho, m, gamma, tol);
  if (lhs.is_infinite() && rhs.is_infinite()) return 0.0;
  if (lhs.is_infinite() || rhs.is_infinite()) return std::numeric_limits<double>::infinity();
  return std::abs(lhs.value() - rhs.value());
}

struct PetzCriterion {
  bool recovered = false;
  double recovery_residual = 0.0;  // ||Petz(M(rho)) - rho||_F
  ExtendedReal sigma1, sigma2, sigma3;
  double commutator_norm = 0.0;    // ||[rho, gamma]||_F
};

inline constexpr double kRecoveryTol = 1e-8;

inline PetzCriterion petz_criterion_check(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                          const Tolerance& tol = {}) {
  PetzCriterion out;
  auto recovered = petz_map_apply(m, gamma, measurement_channel_output(rho, m), tol);
  out.recovery_residual = (recovered.matrix() - rho.matrix()).norm();
  out.recovered = out.recovery_residual <= kRecoveryTol;
  out.sigma1 = sigma1(rho, m, gamma, tol);
  out.sigma2 = sigma2(rho, m, gamma, tol);
  out.sigma3 = sigma3(rho, m, gamma, tol);
  out.commutator_norm = commutator(rho.matrix(), gamma.matrix()).norm();
  return out;
}

// Change of S^(j) when the measurement is coarse-grained by w. A delta is
// absent when either side is infinite.
struct MonotonicityDeltas {
  std::optional<double> delta1, delta2, delta3;
};

inline MonotonicityDeltas monotonicity_check(const DensityOperator& rho, const Povm& m,
                                             const DensityOperator& gamma, const StochasticMatrix& w,
                                             const Tolerance& tol = {}) {
  Povm coarse = post_process(m, w);
  auto delta = [](ExtendedReal after, ExtendedReal before) -> std::optional<double> {
    if (after.is_infinite() || before.is_infinite()) return std::nullopt;
    return after.value() - before.value();
  };
  MonotonicityDeltas out;
  out.delta1 = delta(s1(rho, coarse, gamma, tol), s1(rho, m, gamma, tol));
  out.delta3 = delta(s3(rho, coarse, gamma, tol), s3(rho, m, gamma, tol));
  try {
    out.delta2 = delta(s2(rho, coarse, gamma, tol), s2(rho, m, gamma, tol));
  } catch (const FalsifyingEvidence&) {
    out.delta2 = std::nullopt;
  }
  return out;
}

// S^(2) - S^(1) and S^(3) - S^(1); absent when S^(1) is infinite.
struct OrderingGaps {
  std::optional<ExtendedReal> gap12, gap13;
};

inline OrderingGaps ordering_check(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                   const Tolerance& tol = {}) {
  ExtendedReal one = s1(rho, m, gamma, tol);
  return {difference(s2(rho, m, gamma, tol), one), difference(s3(rho, m, gamma, tol), one)};
}

struct CommutingFlags {
  bool rho_gamma = false;
  bool rho_povm = false;    // [rho, Pi_y] = 0 for every y
  bool gamma_povm = false;  // [gamma, Pi_y] = 0 for every y
};

inline CommutingFlags commuting_flags(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma) {
  CommutingFlags f;
  f.rho_gamma = commutes(rho.matrix(), gamma.matrix(), kCommutingTol);
  f.rho_povm = true;
  f.gamma_povm = true;
  for (const auto& e : m.effects()) {
    f.rho_povm = f.rho_povm && commutes(rho.matrix(), e, kCommutingTol);
    f.gamma_povm = f.gamma_povm && commutes(gamma.matrix(), e, kCommutingTol);
  }
  return f;
}

inline std::string regime_name(const CommutingFlags& f) {
  if (f.rho_gamma && f.rho_povm && f.gamma_povm) return "fully-classical";
  if (f.rho_gamma) return "commuting";
  return "general";
}

struct EntropyReport {
  double s_vn = 0.0;
  double s_original = 0.0;
  std::optional<ExtendedReal> s_clax;
  ExtendedReal s1, s2, s3;
  ExtendedReal sigma1, sigma2, sigma3;
  bool s2_falsified = false;  // Q_R undefined: evidence on an outcome the prior forbids
  CommutingFlags flags;
  std::string regime;
  bool full_rank = false;                   // gamma and tQ_R full rank
  std::optional<double> s3_identity_residual;  // |S^(3) - s3_via_process|, full rank only
  bool petz_recovered = false;
  double petz_residual = 0.0;
};

inline EntropyReport compute_report(const DensityOperator& rho, const Povm& m, const DensityOperator& gamma,
                                    const Tolerance& tol = {}) {
  EntropyReport r;
  r.s_vn = von_neumann(rho, tol);
  r.s_original = original_oe(rho, m);
  r.flags = commuting_flags(rho, m, gamma);
  r.regime = regime_name(r.flags);
  if (r.flags.rho_gamma) r.s_clax = clax_oe(rho, m, gamma, tol);

  r.sigma1 = sigma1(rho, m, gamma, tol);
  r.sigma3 = sigma3(rho, m, gamma, tol);
  try {
    r.sigma2 = sigma2(rho, m, gamma, tol);
  } catch (const FalsifyingEvidence&) {
    r.sigma2 = ExtendedReal::infinity();
    r.s2_falsified = true;
  }
  r.s1 = r.s_vn + r.sigma1;
  r.s2 = r.s_vn + r.sigma2;
  r.s3 = r.s_vn + r.sigma3;

  try {
    auto reverse = tq_reverse(rho, m, gamma, tol);
    r.full_rank = rank_psd(gamma.matrix(), tol) == gamma.dim() &&
                  rank_psd(reverse.matrix(), tol) == reverse.matrix().rows();
    if (r.full_rank) {
      ExtendedReal via = s3_via_process(rho, m, gamma, tol);
      if (via.is_finite() && r.s3.is_finite()) r.s3_identity_residual = std::abs(via.value() - r.s3.value());
    }
  } catch (const FalsifyingEvidence&) {
  }

  try {
    auto recovered = petz_map_apply(m, gamma, measurement_channel_output(rho, m), tol);
    r.petz_residual = (recovered.matrix() - rho.matrix()).norm();
    r.petz_recovered = r.petz_residual <= kRecoveryTol;
  } catch (const FalsifyingEvidence&) {
    r.petz_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace qoe
