#pragma once

// Seeded random instances.
//
//   states        G G^dagger / Tr with complex Gaussian G (Wishart-style)
//   POVMs         m random PSD blocks A_y, normalized as S^-1/2 A_y S^-1/2, S = sum A_y
//   stochastic    column-normalized nonnegative uniforms
//   unitaries     QR of a complex Gaussian matrix with the phase ambiguity fixed
//
// Every draw goes through one std::mt19937_64, so a run is reproducible from
// its seed alone.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "qoe/linop.hpp"
#include "qoe/qstate.hpp"

namespace qoe {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  // Uniform integer in [lo, hi].
  Eigen::Index integer(Eigen::Index lo, Eigen::Index hi) {
    return std::uniform_int_distribution<Eigen::Index>(lo, hi)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// SplitMix64 finalizer, used to derive per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Matrix random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = rng.normal();
      double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

inline Matrix random_unitary(Rng& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(random_ginibre(rng, d, d));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    Complex diag = r(i, i);
    double a = std::abs(diag);
    if (a > 0.0) q.col(i) *= diag / a;
  }
  return q;
}

inline DensityOperator random_state(Rng& rng, Eigen::Index d, Eigen::Index rank) {
  Matrix g = random_ginibre(rng, d, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(hermitian_part(rho));
}

inline DensityOperator random_state(Rng& rng, Eigen::Index d) { return random_state(rng, d, d); }

// Random probability vector with |gaussian|^2 weights.
inline RealVector random_spectrum(Rng& rng, Eigen::Index n) {
  RealVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double a = rng.normal();
    double b = rng.normal();
    w(i) = a * a + b * b + 1e-3;
  }
  return w / w.sum();
}

// State diagonal in the given basis columns with the given spectrum.
inline DensityOperator state_in_basis(const Matrix& basis, const RealVector& spectrum) {
  Matrix rho = basis * spectrum.cast<Complex>().asDiagonal() * basis.adjoint();
  return DensityOperator(hermitian_part(rho));
}

// m effects; the y-th block has rank ranks[y] before normalization.
inline Povm random_povm(Rng& rng, Eigen::Index d, const std::vector<Eigen::Index>& ranks) {
  std::vector<Matrix> blocks;
  Matrix sum = Matrix::Zero(d, d);
  for (Eigen::Index r : ranks) {
    Matrix g = random_ginibre(rng, d, r);
    blocks.push_back(g * g.adjoint());
    sum += blocks.back();
  }
  Matrix s = inv_sqrt_on_support(sum);
  for (auto& b : blocks) b = hermitian_part(s * b * s);
  return Povm(std::move(blocks));
}

inline Povm random_povm(Rng& rng, Eigen::Index d, Eigen::Index m) {
  return random_povm(rng, d, std::vector<Eigen::Index>(m, d));
}

inline StochasticMatrix random_stochastic(Rng& rng, Eigen::Index outputs, Eigen::Index inputs) {
  RealMatrix w(outputs, inputs);
  for (Eigen::Index y = 0; y < inputs; ++y) {
    for (Eigen::Index z = 0; z < outputs; ++z) w(z, y) = rng.uniform() + 1e-3;
    w.col(y) /= w.col(y).sum();
  }
  return StochasticMatrix(std::move(w));
}

// Random partition of {0..d-1} into m non-empty blocks (requires m <= d).
inline std::vector<std::vector<Eigen::Index>> random_blocks(Rng& rng, Eigen::Index d, Eigen::Index m) {
  std::vector<Eigen::Index> perm(d);
  for (Eigen::Index i = 0; i < d; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  std::vector<std::vector<Eigen::Index>> blocks(m);
  for (Eigen::Index y = 0; y < m; ++y) blocks[y].push_back(perm[y]);
  for (Eigen::Index i = m; i < d; ++i) blocks[rng.integer(0, m - 1)].push_back(perm[i]);
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

// Projective POVM whose y-th effect projects onto the basis columns in blocks[y].
inline Povm block_povm(const Matrix& basis, const std::vector<std::vector<Eigen::Index>>& blocks) {
  std::vector<Matrix> effects;
  for (const auto& b : blocks) {
    Matrix p = Matrix::Zero(basis.rows(), basis.rows());
    for (Eigen::Index k : b) p += basis.col(k) * basis.col(k).adjoint();
    effects.push_back(std::move(p));
  }
  return Povm(std::move(effects));
}

}  // namespace qoe
