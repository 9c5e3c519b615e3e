#pragma once

// Scenarios (state, prior, POVM), their JSON file format, and the named
// example generators.
//
// File format:
//   {
//     "name": "...",
//     "rho":   [[[re, im], ...], ...],        // rows of [re, im] pairs
//     "gamma": [[[re, im], ...], ...],
//     "povm":  [ <matrix>, <matrix>, ... ],
//     "tolerance": {"eig_cut": .., "herm_tol": .., "support_tol": ..}   // optional
//   }

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qoe/linop.hpp"
#include "qoe/qstate.hpp"
#include "qoe/random.hpp"

namespace qoe {

struct Scenario {
  std::string name;
  DensityOperator rho;
  DensityOperator gamma;
  Povm povm;
  std::optional<Tolerance> tolerance;

  Tolerance tol() const { return tolerance.value_or(Tolerance{}); }
};

inline void validate_dims(const Scenario& s) {
  if (s.rho.dim() != s.gamma.dim() || s.rho.dim() != s.povm.dim()) {
    throw ValidationError("dimensions", 0.0,
                          "scenario '" + s.name + "': rho, gamma and POVM dimensions disagree (" +
                              std::to_string(s.rho.dim()) + ", " + std::to_string(s.gamma.dim()) + ", " +
                              std::to_string(s.povm.dim()) + ")");
  }
}

namespace detail {

using json = nlohmann::ordered_json;

inline json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ParseError("field '" + field + "': expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("field '" + field + "': row " + std::to_string(i) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("field '" + field + "': entry (" + std::to_string(i) + "," + std::to_string(k) +
                         ") must be a [re, im] pair");
      }
      a(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

template <class F>
auto with_field(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw ValidationError(e.invariant(), e.residual(), "field '" + field + "': " + e.what());
  }
}

}  // namespace detail

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  detail::json j;
  j["name"] = s.name;
  j["rho"] = detail::matrix_to_json(s.rho.matrix());
  j["gamma"] = detail::matrix_to_json(s.gamma.matrix());
  detail::json effects = detail::json::array();
  for (const auto& e : s.povm.effects()) effects.push_back(detail::matrix_to_json(e));
  j["povm"] = std::move(effects);
  if (s.tolerance) {
    j["tolerance"] = {{"eig_cut", s.tolerance->eig_cut},
                      {"herm_tol", s.tolerance->herm_tol},
                      {"support_tol", s.tolerance->support_tol}};
  }
  return j;
}

inline Scenario scenario_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  for (const char* key : {"rho", "gamma", "povm"}) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  }
  std::optional<Tolerance> tol;
  if (j.contains("tolerance")) {
    Tolerance t;
    const auto& jt = j["tolerance"];
    if (!jt.is_object()) throw ParseError("field 'tolerance': expected an object");
    t.eig_cut = jt.value("eig_cut", t.eig_cut);
    t.herm_tol = jt.value("herm_tol", t.herm_tol);
    t.support_tol = jt.value("support_tol", t.support_tol);
    t.validate();
    tol = t;
  }
  const Tolerance t = tol.value_or(Tolerance{});
  std::string name = j.value("name", std::string("unnamed"));
  Matrix rho_m = detail::matrix_from_json(j["rho"], "rho");
  Matrix gamma_m = detail::matrix_from_json(j["gamma"], "gamma");
  if (!j["povm"].is_array() || j["povm"].empty()) throw ParseError("field 'povm': expected a non-empty array");
  std::vector<Matrix> effects;
  for (std::size_t y = 0; y < j["povm"].size(); ++y) {
    effects.push_back(detail::matrix_from_json(j["povm"][y], "povm[" + std::to_string(y) + "]"));
  }
  Scenario s{name,
             detail::with_field("rho", [&] { return DensityOperator(rho_m, t); }),
             detail::with_field("gamma", [&] { return DensityOperator(gamma_m, t); }),
             detail::with_field("povm", [&] { return Povm(std::move(effects), t); }),
             tol};
  validate_dims(s);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file '" + path + "'");
  out << scenario_to_json(s).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Named examples

// Energies n * omega, Gibbs prior, energy-basis projectors, and the pure state
// with equal amplitudes on every energy level.
inline Scenario gibbs_example(Eigen::Index d, double beta, double omega) {
  if (d < 1) throw InvalidParameters("gibbs example: d must be >= 1");
  if (!(beta > 0.0)) throw InvalidParameters("gibbs example: beta must be positive");
  std::vector<double> energies(d);
  for (Eigen::Index n = 0; n < d; ++n) energies[n] = static_cast<double>(n) * omega;
  Vector psi = Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
  std::ostringstream name;
  name << "gibbs(d=" << d << ",beta=" << beta << ",omega=" << omega << ")";
  return {name.str(), DensityOperator::pure(psi), gibbs_prior(energies, beta), Povm::computational(d), std::nullopt};
}

// Three-qubit repetition encoding alpha|000> + beta|111>, measured qubit-wise
// in the {|+>,|->} basis, with a prior concentrated on the code space.
// Basis index = 4 q1 + 2 q2 + q3; outcomes ordered +++, ++-, +-+, ..., ---.
inline Scenario three_qubit_example(Complex alpha, Complex beta, double p0, double p1) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
    throw InvalidParameters("three-qubit example: |alpha|^2 + |beta|^2 must be 1");
  }
  if (!(p0 > 0.0 && p1 > 0.0 && p0 + p1 < 1.0)) {
    throw InvalidParameters("three-qubit example: need p0, p1 > 0 and p0 + p1 < 1");
  }
  Vector psi = Vector::Zero(8);
  psi(0) = alpha;
  psi(7) = beta;
  const double rest = (1.0 - p0 - p1) / 6.0;
  RealVector g = RealVector::Constant(8, rest);
  g(0) = p0;
  g(7) = p1;

  const double h = 1.0 / std::sqrt(2.0);
  Matrix plus_minus(2, 2);
  plus_minus << h, h, h, -h;  // columns |+>, |->
  Matrix basis = kron(kron(plus_minus, plus_minus), plus_minus);

  std::ostringstream name;
  name << "three-qubit(alpha=" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i,beta="
       << beta.real() << (beta.imag() < 0 ? "" : "+") << beta.imag() << "i,p0=" << p0 << ",p1=" << p1 << ")";
  // The amplitudes are validated above; renormalize away the residual.
  return {name.str(), DensityOperator::pure(psi), DensityOperator::diagonal(g), Povm::projective(basis),
          std::nullopt};
}

enum class Regime { general, commuting, fully_classical, full_rank };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::general: return "general";
    case Regime::commuting: return "commuting";
    case Regime::fully_classical: return "fully-classical";
    case Regime::full_rank: return "full-rank";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "general") return Regime::general;
  if (s == "commuting") return Regime::commuting;
  if (s == "fully-classical") return Regime::fully_classical;
  if (s == "full-rank") return Regime::full_rank;
  throw InvalidParameters("unknown regime '" + s + "' (expected general, commuting, fully-classical, full-rank)");
}

// How the prior of a fully classical instance is drawn.
enum class ClassicalPrior {
  random,         // arbitrary diagonal spectrum
  block_uniform,  // gamma = sum_y G_y Pi_y / |K(y)|
};

struct ClassicalInstance {
  Scenario scenario;
  Matrix basis;
  std::vector<std::vector<Eigen::Index>> blocks;
};

// rho, gamma and all effects diagonal in one random basis; effects are
// projectors onto blocks K(y). Uses min(m, d) outcomes so no block is empty.
inline ClassicalInstance fully_classical_instance(Rng& rng, Eigen::Index d, Eigen::Index m,
                                                  ClassicalPrior prior = ClassicalPrior::random) {
  const Eigen::Index outcomes = std::min(m, d);
  Matrix basis = random_unitary(rng, d);
  auto blocks = random_blocks(rng, d, outcomes);
  RealVector r = random_spectrum(rng, d);
  RealVector g;
  if (prior == ClassicalPrior::block_uniform) {
    RealVector weights = random_spectrum(rng, outcomes);
    g = RealVector(d);
    for (Eigen::Index y = 0; y < outcomes; ++y) {
      for (Eigen::Index k : blocks[y]) g(k) = weights(y) / static_cast<double>(blocks[y].size());
    }
  } else {
    g = random_spectrum(rng, d);
  }
  Scenario s{"fully-classical", state_in_basis(basis, r), state_in_basis(basis, g), block_povm(basis, blocks),
             std::nullopt};
  return {std::move(s), std::move(basis), std::move(blocks)};
}

// Fully classical instance with rho proportional to gamma inside every block,
// so the Petz map recovers rho from its statistics.
inline Scenario recoverable_instance(Rng& rng, Eigen::Index d, Eigen::Index m) {
  auto inst = fully_classical_instance(rng, d, m);
  const auto outcomes = static_cast<Eigen::Index>(inst.blocks.size());
  RealVector g = (inst.basis.adjoint() * inst.scenario.gamma.matrix() * inst.basis).diagonal().real();
  RealVector p = random_spectrum(rng, outcomes);
  RealVector r(d);
  for (Eigen::Index y = 0; y < outcomes; ++y) {
    double block_mass = 0.0;
    for (Eigen::Index k : inst.blocks[y]) block_mass += g(k);
    for (Eigen::Index k : inst.blocks[y]) r(k) = p(y) * g(k) / block_mass;
  }
  r /= r.sum();
  inst.scenario.rho = state_in_basis(inst.basis, r);
  inst.scenario.name = "recoverable";
  return std::move(inst.scenario);
}

inline Scenario random_scenario(Rng& rng, Eigen::Index d, Eigen::Index m, Regime regime) {
  if (d < 1 || m < 1) throw InvalidParameters("random scenario: d and m must be >= 1");
  std::ostringstream name;
  name << "random(d=" << d << ",m=" << m << ",regime=" << to_string(regime) << ")";
  switch (regime) {
    case Regime::general: {
      auto rho = random_state(rng, d, rng.integer(1, d));
      auto gamma = random_state(rng, d);
      const Eigen::Index min_rank = (d + m - 1) / m;
      std::vector<Eigen::Index> ranks(m);
      for (auto& r : ranks) r = rng.integer(min_rank, d);
      auto povm = random_povm(rng, d, ranks);
      return {name.str(), std::move(rho), std::move(gamma), std::move(povm), std::nullopt};
    }
    case Regime::full_rank: {
      auto rho = random_state(rng, d);
      auto gamma = random_state(rng, d);
      auto povm = random_povm(rng, d, m);
      return {name.str(), std::move(rho), std::move(gamma), std::move(povm), std::nullopt};
    }
    case Regime::commuting: {
      Matrix basis = random_unitary(rng, d);
      auto rho = state_in_basis(basis, random_spectrum(rng, d));
      auto gamma = state_in_basis(basis, random_spectrum(rng, d));
      auto povm = random_povm(rng, d, m);
      return {name.str(), std::move(rho), std::move(gamma), std::move(povm), std::nullopt};
    }
    case Regime::fully_classical: {
      auto inst = fully_classical_instance(rng, d, m);
      inst.scenario.name = name.str();
      return std::move(inst.scenario);
    }
  }
  throw InvalidParameters("unknown regime");
}

}  // namespace qoe
