#pragma once

// Entropies and relative entropies in nats. Quantum divergences accept any
// Hermitian PSD operators (states or process operators) and return +inf
// exactly when the first support is not contained in the second.

#include <cmath>

#include "qoe/extended_real.hpp"
#include "qoe/linop.hpp"
#include "qoe/qstate.hpp"

namespace qoe {

inline double shannon(const RealVector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

inline double shannon(const OutcomeDistribution& p) { return shannon(p.probs()); }

inline double von_neumann(const Matrix& rho, const Tolerance& tol = {}) {
  auto e = eig_hermitian(rho, tol);
  const double cut = e.cut(tol);
  double h = 0.0;
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    double l = e.eigenvalues(i);
    if (l > cut) h -= l * std::log(l);
  }
  return h;
}

inline double von_neumann(const DensityOperator& rho, const Tolerance& tol = {}) {
  return von_neumann(rho.matrix(), tol);
}

// sum_i p_i ln(p_i / q_i). Entries with p_i above support_tol facing
// q_i <= eig_cut make the divergence infinite; smaller p_i there are dropped.
inline ExtendedReal kl(const RealVector& p, const RealVector& q, const Tolerance& tol = {}) {
  if (p.size() != q.size()) throw DimensionMismatch("kl: distributions differ in length");
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    if (q(i) <= tol.eig_cut) {
      if (p(i) > tol.support_tol) return ExtendedReal::infinity();
      continue;
    }
    d += p(i) * std::log(p(i) / q(i));
  }
  return d;
}

inline ExtendedReal kl(const OutcomeDistribution& p, const OutcomeDistribution& q, const Tolerance& tol = {}) {
  return kl(p.probs(), q.probs(), tol);
}

// Tr[rho (ln rho - ln sigma)], evaluated on supp(sigma).
inline ExtendedReal umegaki(const Matrix& rho, const Matrix& sigma, const Tolerance& tol = {}) {
  require_same_dim(rho, sigma, "umegaki");
  auto es = eig_hermitian(sigma, tol);
  const Eigen::Index n = rho.rows();
  Matrix p = support_projector(es, tol);
  Matrix outside = Matrix::Identity(n, n) - p;
  if ((outside * rho * outside).norm() > tol.support_tol * rho.norm()) return ExtendedReal::infinity();

  Matrix rho_s = hermitian_part(p * rho * p);
  double neg_entropy = -von_neumann(rho_s, tol);
  Matrix log_sigma = fn_hermitian(es, [](double x) { return std::log(x); }, Support::retained, tol);
  return neg_entropy - trace_product_real(rho_s, log_sigma);
}

inline ExtendedReal umegaki(const DensityOperator& rho, const DensityOperator& sigma, const Tolerance& tol = {}) {
  return umegaki(rho.matrix(), sigma.matrix(), tol);
}

// Tr[rho ln(rho sigma^-1)], evaluated through the Hermitian surrogate
// X = sigma^-1/2 rho sigma^-1/2 on supp(sigma): D_BS = Tr[sigma X ln X].
inline ExtendedReal belavkin_staszewski(const Matrix& rho, const Matrix& sigma, const Tolerance& tol = {}) {
  require_same_dim(rho, sigma, "belavkin_staszewski");
  auto es = eig_hermitian(sigma, tol);
  const Eigen::Index n = rho.rows();
  Matrix outside = Matrix::Identity(n, n) - support_projector(es, tol);
  if ((outside * rho * outside).norm() > tol.support_tol * rho.norm()) return ExtendedReal::infinity();

  Matrix s_inv_half = fn_hermitian(es, [](double x) { return 1.0 / std::sqrt(x); }, Support::retained, tol);
  Matrix x = hermitian_part(s_inv_half * rho * s_inv_half);
  Matrix x_log_x = fn_hermitian(x, [](double v) { return v * std::log(v); }, Support::retained, tol);
  return trace_product_real(sigma, x_log_x);
}

inline ExtendedReal belavkin_staszewski(const DensityOperator& rho, const DensityOperator& sigma,
                                        const Tolerance& tol = {}) {
  return belavkin_staszewski(rho.matrix(), sigma.matrix(), tol);
}

}  // namespace qoe
