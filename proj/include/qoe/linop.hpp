#pragma once

// Dense complex linear-operator kernel: Hermitian spectral calculus, tensor
// products, partial traces and basis-fixed transposition.
//
// Tensor ordering convention used throughout the library: for a composite
// system (B, A) with dimensions (dB, dA), the basis vector |b>|a> has index
// b * dA + a. B is always the first (outer) factor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qoe/errors.hpp"

namespace qoe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

struct Tolerance {
  double eig_cut = 1e-12;      // eigenvalues <= eig_cut * max|lambda| count as zero
  double herm_tol = 1e-10;     // allowed anti-Hermitian part, relative
  double support_tol = 1e-9;   // support-containment threshold

  void validate() const {
    if (!(eig_cut > 0 && herm_tol > 0 && support_tol > 0)) {
      throw InvalidParameters("tolerances must be strictly positive");
    }
    if (!(eig_cut < support_tol && support_tol < 1)) {
      throw InvalidParameters("tolerances must satisfy eig_cut < support_tol < 1");
    }
  }
};

struct EigenDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, unitary

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }

  // Threshold below which an eigenvalue is treated as zero.
  double cut(const Tolerance& tol) const {
    double scale = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
    return tol.eig_cut * scale;
  }
};

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double frobenius(const Matrix& a) { return a.norm(); }

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.rows()) +
                            " and " + std::to_string(b.rows()) + " differ");
  }
}

// ||a - a^dagger||_max
inline double anti_hermitian_residual(const Matrix& a) { return max_abs(a - a.adjoint()); }

inline Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

inline bool is_hermitian(const Matrix& a, const Tolerance& tol = {}) {
  return a.rows() == a.cols() &&
         anti_hermitian_residual(a) <= tol.herm_tol * std::max(1.0, max_abs(a));
}

inline EigenDecomposition eig_hermitian(const Matrix& a, const Tolerance& tol = {}) {
  require_square(a, "eig_hermitian");
  double residual = anti_hermitian_residual(a);
  if (residual > tol.herm_tol * std::max(1.0, max_abs(a))) {
    throw NotHermitian("eig_hermitian: anti-Hermitian residual " + std::to_string(residual) +
                       " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  }
  // Eigen sorts ascending; we expose descending order.
  const Eigen::Index n = a.rows();
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

enum class Support {
  full,      // apply f to every eigenvalue; non-finite results are errors
  retained,  // eigenvalues below the cut map to 0 (pseudo-function on the support)
};

template <class F>
Matrix fn_hermitian(const EigenDecomposition& e, F&& f, Support support, const Tolerance& tol = {}) {
  const double cut = e.cut(tol);
  RealVector fl(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) {
    double lambda = e.eigenvalues(i);
    if (support == Support::retained && lambda <= cut) {
      fl(i) = 0.0;
      continue;
    }
    fl(i) = f(lambda);
    if (!std::isfinite(fl(i))) {
      throw SingularInput("fn_hermitian: function undefined at eigenvalue " + std::to_string(lambda));
    }
  }
  return e.eigenvectors * fl.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
}

template <class F>
Matrix fn_hermitian(const Matrix& a, F&& f, Support support, const Tolerance& tol = {}) {
  return fn_hermitian(eig_hermitian(a, tol), std::forward<F>(f), support, tol);
}

// Square root of a PSD matrix. Eigenvalues at or below the cut (including
// roundoff negatives) map to zero, so numerical noise is not amplified.
inline Matrix sqrt_psd(const Matrix& a, const Tolerance& tol = {}) {
  return fn_hermitian(a, [](double x) { return std::sqrt(x); }, Support::retained, tol);
}

// a^(-1/2) on supp(a), zero on the kernel.
inline Matrix inv_sqrt_on_support(const Matrix& a, const Tolerance& tol = {}) {
  return fn_hermitian(a, [](double x) { return 1.0 / std::sqrt(x); }, Support::retained, tol);
}

inline Matrix log_on_support(const Matrix& a, const Tolerance& tol = {}) {
  return fn_hermitian(a, [](double x) { return std::log(x); }, Support::retained, tol);
}

inline Matrix support_projector(const EigenDecomposition& e, const Tolerance& tol = {}) {
  // Only positive eigenvalues above the relative cut span the support.
  const double cut = tol.eig_cut * std::max(e.eigenvalues.size() ? e.eigenvalues(0) : 0.0, 0.0);
  const Eigen::Index n = e.eigenvectors.rows();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    if (e.eigenvalues(i) > cut) p += e.eigenvectors.col(i) * e.eigenvectors.col(i).adjoint();
  }
  return p;
}

inline Matrix support_projector(const Matrix& a, const Tolerance& tol = {}) {
  return support_projector(eig_hermitian(a, tol), tol);
}

inline Eigen::Index rank_psd(const Matrix& a, const Tolerance& tol = {}) {
  auto e = eig_hermitian(a, tol);
  const double cut = tol.eig_cut * std::max(e.eigenvalues(0), 0.0);
  return (e.eigenvalues.array() > cut).count();
}

// supp(a) is contained in supp(b): the weight of a outside supp(b) is below
// support_tol relative to ||a||_F.
inline bool support_leq(const Matrix& a, const Matrix& b, const Tolerance& tol = {}) {
  require_same_dim(a, b, "support_leq");
  const Eigen::Index n = a.rows();
  Matrix outside = Matrix::Identity(n, n) - support_projector(b, tol);
  return (outside * a * outside).norm() <= tol.support_tol * a.norm();
}

// Kronecker product, first factor outer.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Factor { first, second };

// Trace out one factor of a (dB * dA)-dimensional operator with B first.
inline Matrix partial_trace(const Matrix& a, Eigen::Index dim_first, Eigen::Index dim_second,
                            Factor traced) {
  require_square(a, "partial_trace");
  if (dim_first < 1 || dim_second < 1 || a.rows() != dim_first * dim_second) {
    throw DimensionMismatch("partial_trace: operator of dimension " + std::to_string(a.rows()) +
                            " is not " + std::to_string(dim_first) + "x" +
                            std::to_string(dim_second));
  }
  if (traced == Factor::first) {
    Matrix out = Matrix::Zero(dim_second, dim_second);
    for (Eigen::Index b = 0; b < dim_first; ++b) {
      out += a.block(b * dim_second, b * dim_second, dim_second, dim_second);
    }
    return out;
  }
  Matrix out(dim_first, dim_first);
  for (Eigen::Index i = 0; i < dim_first; ++i) {
    for (Eigen::Index j = 0; j < dim_first; ++j) {
      out(i, j) = a.block(i * dim_second, j * dim_second, dim_second, dim_second).trace();
    }
  }
  return out;
}

// Entry-wise transpose in the computational basis (no conjugation).
inline Matrix transpose(const Matrix& a) { return a.transpose(); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// ||[a,b]||_F relative to ||a||_F ||b||_F.
inline double relative_commutator_norm(const Matrix& a, const Matrix& b) {
  double scale = a.norm() * b.norm();
  return scale == 0.0 ? 0.0 : commutator(a, b).norm() / scale;
}

inline bool commutes(const Matrix& a, const Matrix& b, double rel_tol = 1e-9) {
  return relative_commutator_norm(a, b) <= rel_tol;
}

// Real part of Tr[a b] without forming the product.
inline double trace_product_real(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace qoe
