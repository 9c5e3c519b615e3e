#pragma once

// Seeded verification sweep over random instances. Each trial draws a
// scenario from a regime, runs every property that applies to that regime,
// and records the residual against the property's threshold. Contracted
// properties gate the exit status; diagnostics are only logged.
//
// Trial t of the sweep (counted across all dims and regimes, in order) uses
// the generator seeded with mix_seed(seed ^ t), so the output depends only on
// the configuration.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qoe/oentropy.hpp"
#include "qoe/random.hpp"
#include "qoe/report.hpp"
#include "qoe/scenario.hpp"

namespace qoe {

struct VerifyConfig {
  std::uint64_t seed = 42;
  long trials = 50;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dims{{2, 2}, {3, 2}, {3, 4}, {4, 3}};
  std::vector<Regime> regimes{Regime::general, Regime::commuting, Regime::fully_classical, Regime::full_rank};

  void validate() const {
    if (trials < 1) throw InvalidParameters("verify: trials must be >= 1");
    if (dims.empty()) throw InvalidParameters("verify: no dimensions given");
    for (auto [d, m] : dims) {
      if (d < 1 || m < 1) throw InvalidParameters("verify: d and m must be >= 1");
    }
    if (regimes.empty()) throw InvalidParameters("verify: no regimes given");
  }
};

struct PropertyStats {
  bool contracted = true;
  double threshold = 0.0;
  long checked = 0;
  long failed = 0;
  double max_residual = 0.0;
};

struct Counterexample {
  std::string property;
  Regime regime;
  Eigen::Index d, m;
  long trial;
  double residual;
  nlohmann::ordered_json scenario;
};

struct VerifySummary {
  VerifyConfig config;
  std::map<std::string, PropertyStats> properties;
  long s2_monotonicity_checked = 0;
  long s2_monotonicity_violations = 0;
  double s2_monotonicity_min_delta = 0.0;
  std::vector<Counterexample> counterexamples;

  long failures() const {
    long n = 0;
    for (const auto& [name, p] : properties) n += p.contracted ? p.failed : 0;
    return n;
  }
};

namespace detail {

// |a - b| for extended reals: agreeing infinities give 0, a lone infinity inf.
inline double gap(ExtendedReal a, ExtendedReal b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) return std::numeric_limits<double>::infinity();
  return std::abs(a.value() - b.value());
}

inline double violation_below(std::optional<ExtendedReal> v) {
  if (!v || v->is_infinite()) return 0.0;
  return std::max(0.0, -v->value());
}

inline double sorted_spectrum_gap(const Matrix& a, const Matrix& b) {
  RealVector ea = eig_hermitian(a).eigenvalues;
  RealVector eb = eig_hermitian(b).eigenvalues;
  return (ea - eb).cwiseAbs().maxCoeff();
}

class TrialRecorder {
 public:
  TrialRecorder(VerifySummary& summary, Regime regime, Eigen::Index d, Eigen::Index m, long trial)
      : summary_(summary), regime_(regime), d_(d), m_(m), trial_(trial) {}

  void set_scenario(const Scenario& s) { scenario_ = s; }

  void check(const std::string& name, double residual, double threshold, bool contracted = true) {
    auto& p = summary_.properties[name];
    p.contracted = contracted;
    p.threshold = threshold;
    ++p.checked;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    p.max_residual = std::max(p.max_residual, residual);
    if (residual > threshold) {
      ++p.failed;
      summary_.counterexamples.push_back(
          {name, regime_, d_, m_, trial_, residual,
           scenario_ ? scenario_to_json(*scenario_) : nlohmann::ordered_json(nullptr)});
    }
  }

  void check_true(const std::string& name, bool ok) { check(name, ok ? 0.0 : 1.0, 0.5); }

 private:
  VerifySummary& summary_;
  Regime regime_;
  Eigen::Index d_, m_;
  long trial_;
  std::optional<Scenario> scenario_;
};

inline void run_trial(Rng& rng, Eigen::Index d, Eigen::Index m, Regime regime, TrialRecorder& rec,
                      VerifySummary& summary) {
  const Scenario s = random_scenario(rng, d, m, regime);
  rec.set_scenario(s);
  const auto& rho = s.rho;
  const auto& gamma = s.gamma;
  const auto& povm = s.povm;
  const Tolerance tol = s.tol();

  // linop
  rec.check("eig_reconstruction", (eig_hermitian(rho.matrix()).reconstruct() - rho.matrix()).norm(),
            1e-10 * std::max(1.0, rho.matrix().norm()));

  // retro
  rec.check("choi_relation", choi_relation_residual(povm, gamma, tol), 1e-9);
  auto m_gamma = measurement_channel_output(gamma, povm);
  auto m_rho = measurement_channel_output(rho, povm);
  rec.check("petz_fixed_point", (petz_map_apply(povm, gamma, m_gamma, tol).matrix() - gamma.matrix()).norm(), 1e-9);

  auto qf = q_forward(rho, povm, tol);
  auto qr = q_reverse(rho, povm, gamma, tol);
  auto tqf = tq_forward(rho, povm, tol);
  auto tqr = tq_reverse(rho, povm, gamma, tol);
  rec.check("qf_marginals",
            std::max((qf.outcome_marginal() - m_rho.matrix()).norm(),
                     (qf.system_marginal() - transpose(rho.matrix())).norm()),
            1e-9);
  auto recovered = petz_map_apply(povm, gamma, m_rho, tol);
  rec.check("qr_marginals",
            std::max((qr.outcome_marginal() - m_rho.matrix()).norm(),
                     (qr.system_marginal() - transpose(recovered.matrix())).norm()),
            1e-9);
  rec.check("tqf_spectrum", sorted_spectrum_gap(tqf.matrix(), qf.matrix()), 1e-9);
  rec.check("tqr_spectrum", sorted_spectrum_gap(tqr.matrix(), qr.matrix()), 1e-9);

  // divergences
  auto d_u = umegaki(rho, gamma, tol);
  auto d_bs = belavkin_staszewski(rho, gamma, tol);
  if (d_u.is_finite() && d_bs.is_finite()) rec.check("bs_above_umegaki", std::max(0.0, d_u.value() - d_bs.value()), 1e-9);

  // lower bound and ordering
  auto sg1 = sigma1(rho, povm, gamma, tol);
  auto sg2 = sigma2(rho, povm, gamma, tol);
  auto sg3 = sigma3(rho, povm, gamma, tol);
  rec.check("sigma1_nonnegative", violation_below(sg1), 1e-9);
  rec.check("sigma2_nonnegative", violation_below(sg2), 1e-9);
  rec.check("sigma3_nonnegative", violation_below(sg3), 1e-9);
  auto gaps = ordering_check(rho, povm, gamma, tol);
  rec.check("ordering_s1_le_s2", violation_below(gaps.gap12), 1e-9);
  rec.check("ordering_s1_le_s3", violation_below(gaps.gap13), 1e-9);

  // monotonicity under a random coarse-graining
  const auto outcomes = static_cast<Eigen::Index>(povm.size());
  auto w = random_stochastic(rng, rng.integer(1, outcomes + 1), outcomes);
  auto mono = monotonicity_check(rho, povm, gamma, w, tol);
  if (mono.delta1) rec.check("monotonicity_s1", std::max(0.0, -*mono.delta1), 1e-9);
  if (mono.delta3) rec.check("monotonicity_s3", std::max(0.0, -*mono.delta3), 1e-9);
  if (mono.delta2) {
    ++summary.s2_monotonicity_checked;
    if (*mono.delta2 < -1e-9) ++summary.s2_monotonicity_violations;
    summary.s2_monotonicity_min_delta = std::min(summary.s2_monotonicity_min_delta, *mono.delta2);
  }

  // Petz recovery criterion
  auto pc = petz_criterion_check(rho, povm, gamma, tol);
  bool sigmas_small = leq(pc.sigma1, 1e-7) && leq(pc.sigma2, 1e-7) && leq(pc.sigma3, 1e-7);
  bool forward_ok = !pc.recovered || (sigmas_small && pc.commutator_norm <= 1e-7);
  bool converse_ok = !(pc.sigma1.is_finite() && pc.sigma1.value() <= 1e-9) || pc.recovered;
  rec.check_true("petz_criterion", forward_ok && converse_ok);

  // uniform prior reductions
  auto u = DensityOperator::maximally_mixed(d);
  double s_m = original_oe(rho, povm);
  rec.check("uniform_reduction",
            std::max(gap(s1(rho, povm, u, tol), s_m), gap(s3(rho, povm, u, tol), s_m)), 1e-9);
  rec.check("classical_bridge_uniform", classical_sigma_identity_check(rho, povm, u, tol), 1e-9);

  if (regime == Regime::full_rank) {
    rec.check("dbs_identity", gap(s3(rho, povm, gamma, tol), s3_via_process(rho, povm, gamma, tol)), 1e-8);
  }

  if (regime == Regime::commuting || regime == Regime::fully_classical) {
    auto clax = clax_oe(rho, povm, gamma, tol);
    rec.check("clax_reduction",
              std::max(gap(s1(rho, povm, gamma, tol), clax), gap(s3(rho, povm, gamma, tol), clax)), 1e-9);
    rec.check("classical_bridge", classical_sigma_identity_check(rho, povm, gamma, tol), 1e-9);
  }

  if (regime == Regime::fully_classical) {
    rec.check("s2_clax_reduction", gap(s2(rho, povm, gamma, tol), clax_oe(rho, povm, gamma, tol)), 1e-9);
    rec.check("uniform_s2_reduction", gap(s2(rho, povm, u, tol), s_m), 1e-9);

    auto block = fully_classical_instance(rng, d, m, ClassicalPrior::block_uniform).scenario;
    rec.set_scenario(block);
    rec.check("block_prior_invariance",
              gap(clax_oe(block.rho, block.povm, block.gamma, tol), original_oe(block.rho, block.povm)), 1e-9);

    auto rec_s = recoverable_instance(rng, d, m);
    rec.set_scenario(rec_s);
    auto rc = petz_criterion_check(rec_s.rho, rec_s.povm, rec_s.gamma, tol);
    rec.check_true("petz_recoverable_instance",
                   rc.recovered && leq(rc.sigma1, 1e-7) && leq(rc.sigma2, 1e-7) && leq(rc.sigma3, 1e-7) &&
                       rc.commutator_norm <= 1e-7);
    rec.set_scenario(s);
  }

  if (regime == Regime::general && d >= 2) {
    // Degenerate rho: the classical irretrodictability must not depend on
    // which eigenbasis of the degenerate eigenspace is used.
    Matrix basis = random_unitary(rng, d);
    RealVector spec = random_spectrum(rng, d);
    spec(1) = spec(0);
    spec /= spec.sum();
    auto deg = state_in_basis(basis, spec);
    Matrix rotated = basis;
    Matrix mix = random_unitary(rng, 2);
    rotated.leftCols(2) = basis.leftCols(2) * mix;
    OutcomeDistribution lambdas(spec);
    auto uniform = OutcomeDistribution::uniform(d);
    auto p = measure(deg, povm);
    auto a = kl(classical_forward(lambdas, basis, povm), classical_reverse(uniform, basis, povm, p, tol), tol);
    auto b = kl(classical_forward(lambdas, rotated, povm), classical_reverse(uniform, rotated, povm, p, tol), tol);
    rec.check("decomposition_independence", gap(a, b), 1e-9);
  }
}

}  // namespace detail

inline VerifySummary verify(const VerifyConfig& cfg) {
  cfg.validate();
  VerifySummary summary;
  summary.config = cfg;
  long index = 0;
  for (auto [d, m] : cfg.dims) {
    for (Regime regime : cfg.regimes) {
      for (long t = 0; t < cfg.trials; ++t, ++index) {
        Rng rng(mix_seed(cfg.seed ^ static_cast<std::uint64_t>(index)));
        detail::TrialRecorder rec(summary, regime, d, m, index);
        try {
          detail::run_trial(rng, d, m, regime, rec, summary);
        } catch (const Error& e) {
          rec.check("trial_completed", std::numeric_limits<double>::infinity(), 0.0);
        }
      }
    }
  }
  // every property appears even when it never fired
  summary.properties.try_emplace("trial_completed", PropertyStats{true, 0.0, index, 0, 0.0});
  return summary;
}

inline std::string counterexample_filename(std::size_t i, const Counterexample& c) {
  return "cex_" + std::to_string(i) + "_" + c.property + ".json";
}

inline nlohmann::ordered_json summary_to_json(const VerifySummary& s, const std::string& cex_dir = "") {
  using json = nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
  json j;
  j["schema_version"] = kReportSchemaVersion;
  json dims = json::array();
  for (auto [d, m] : s.config.dims) dims.push_back({d, m});
  json regimes = json::array();
  for (auto r : s.config.regimes) regimes.push_back(to_string(r));
  j["config"] = {{"seed", s.config.seed}, {"trials", s.config.trials}, {"dims", dims}, {"regimes", regimes}};
  json props = json::array();
  for (const auto& [name, p] : s.properties) {
    props.push_back({{"name", name},
                     {"contracted", p.contracted},
                     {"threshold", p.threshold},
                     {"checked", p.checked},
                     {"passed", p.checked - p.failed},
                     {"failed", p.failed},
                     {"max_residual", num(p.max_residual)}});
  }
  j["properties"] = std::move(props);
  j["diagnostics"] = {{"s2_monotonicity",
                       {{"checked", s.s2_monotonicity_checked},
                        {"violations", s.s2_monotonicity_violations},
                        {"min_delta", s.s2_monotonicity_min_delta}}}};
  json cex = json::array();
  for (std::size_t i = 0; i < s.counterexamples.size(); ++i) {
    const auto& c = s.counterexamples[i];
    json entry = {{"property", c.property}, {"regime", to_string(c.regime)}, {"d", c.d},
                  {"m", c.m},               {"trial", c.trial},              {"residual", num(c.residual)}};
    if (!cex_dir.empty()) entry["file"] = (std::filesystem::path(cex_dir) / counterexample_filename(i, c)).string();
    cex.push_back(std::move(entry));
  }
  j["counterexamples"] = std::move(cex);
  j["failures"] = s.failures();
  j["status"] = s.failures() == 0 ? "pass" : "fail";
  return j;
}

// Writes one replayable scenario file per counterexample.
inline void write_counterexamples(const VerifySummary& s, const std::string& dir) {
  if (s.counterexamples.empty()) return;
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < s.counterexamples.size(); ++i) {
    const auto& c = s.counterexamples[i];
    if (c.scenario.is_null()) continue;
    std::ofstream out(std::filesystem::path(dir) / counterexample_filename(i, c));
    out << c.scenario.dump(2) << '\n';
  }
}

}  // namespace qoe
