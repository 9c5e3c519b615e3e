// qoe: observational entropy with quantum priors.
//
//   qoe report  --input scenario.json [--bits] [--json]
//   qoe example gibbs|three-qubit|random [params] --out scenario.json
//   qoe verify  --seed N --trials N --dims d:m,... [--regime R,...] [--out summary.json]
//
// Exit codes: 0 success, 1 property failure, 2 input or validation error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qoe/report.hpp"
#include "qoe/scenario.hpp"
#include "qoe/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_dims(const std::string& spec) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dims;
  for (const auto& item : split(spec, ',')) {
    auto parts = split(item, ':');
    if (parts.size() != 2) throw qoe::InvalidParameters("bad --dims entry '" + item + "' (expected d:m)");
    try {
      dims.emplace_back(std::stol(parts[0]), std::stol(parts[1]));
    } catch (const std::logic_error&) {
      throw qoe::InvalidParameters("bad --dims entry '" + item + "' (expected d:m)");
    }
  }
  return dims;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw qoe::Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observational entropy with quantum reference priors"};
  app.require_subcommand(1);

  // report
  auto* report = app.add_subcommand("report", "Compute all entropies for a scenario file");
  std::string input;
  bool bits = false, as_json = false;
  report->add_option("--input,-i", input, "Scenario JSON file")->required();
  report->add_flag("--bits", bits, "Show values in bits (stored values stay in nats)");
  report->add_flag("--json", as_json, "Print the structured JSON report");

  // example
  auto* example = app.add_subcommand("example", "Write a named example scenario");
  example->require_subcommand(1);
  std::string out_path;
  Eigen::Index g_d = 4;
  double g_beta = 1.0, g_omega = 1.0;
  auto* gibbs = example->add_subcommand("gibbs", "Gibbs prior, energy measurement, unbiased pure state");
  gibbs->add_option("--d", g_d, "Dimension")->capture_default_str();
  gibbs->add_option("--beta", g_beta, "Inverse temperature")->capture_default_str();
  gibbs->add_option("--omega", g_omega, "Level spacing")->capture_default_str();
  gibbs->add_option("--out,-o", out_path, "Output file")->required();

  double t_alpha = 1.0 / std::sqrt(2.0), t_beta = 1.0 / std::sqrt(2.0), t_phase = 0.0;
  double t_p0 = 0.125, t_p1 = 0.125;
  auto* three = example->add_subcommand("three-qubit", "Repetition-code encoding with a code-space prior");
  three->add_option("--alpha", t_alpha, "Amplitude of |000>")->capture_default_str();
  three->add_option("--beta", t_beta, "Modulus of the |111> amplitude")->capture_default_str();
  three->add_option("--beta-phase", t_phase, "Phase of the |111> amplitude (radians)")->capture_default_str();
  three->add_option("--p0", t_p0, "Prior weight of |000>")->capture_default_str();
  three->add_option("--p1", t_p1, "Prior weight of |111>")->capture_default_str();
  three->add_option("--out,-o", out_path, "Output file")->required();

  Eigen::Index r_d = 3, r_m = 2;
  std::string r_regime = "general";
  std::uint64_t r_seed = 42;
  auto* random = example->add_subcommand("random", "Seeded random scenario");
  random->add_option("--d", r_d, "Dimension")->capture_default_str();
  random->add_option("--m", r_m, "Number of outcomes")->capture_default_str();
  random->add_option("--regime", r_regime, "general, commuting, fully-classical or full-rank")->capture_default_str();
  random->add_option("--seed", r_seed, "Seed")->capture_default_str();
  random->add_option("--out,-o", out_path, "Output file")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Seeded property sweep over random instances");
  qoe::VerifyConfig cfg;
  std::string dims_spec, regimes_spec, summary_path, cex_dir = "counterexamples";
  verify->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "Trials per (dims, regime)")->capture_default_str();
  verify->add_option("--dims", dims_spec, "Comma-separated d:m pairs (default 2:2,3:2,3:4,4:3)");
  verify->add_option("--regime", regimes_spec, "Comma-separated regimes (default all)");
  verify->add_option("--out,-o", summary_path, "Summary JSON file (default stdout)");
  verify->add_option("--counterexamples", cex_dir, "Directory for counterexample scenarios")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*report) {
      auto r = qoe::run_report(qoe::load_scenario(input));
      if (as_json) {
        std::cout << qoe::report_to_json(r).dump(2) << '\n';
      } else {
        std::cout << qoe::report_to_text(r, bits);
      }
      return kExitOk;
    }

    if (*example) {
      qoe::Scenario s = [&]() {
        if (*gibbs) return qoe::gibbs_example(g_d, g_beta, g_omega);
        if (*three) {
          return qoe::three_qubit_example(qoe::Complex(t_alpha, 0.0), std::polar(t_beta, t_phase), t_p0, t_p1);
        }
        qoe::Rng rng(r_seed);
        return qoe::random_scenario(rng, r_d, r_m, qoe::parse_regime(r_regime));
      }();
      qoe::save_scenario(s, out_path);
      std::cerr << "wrote " << s.name << " to " << out_path << '\n';
      return kExitOk;
    }

    if (*verify) {
      if (!dims_spec.empty()) cfg.dims = parse_dims(dims_spec);
      if (!regimes_spec.empty()) {
        cfg.regimes.clear();
        for (const auto& r : split(regimes_spec, ',')) cfg.regimes.push_back(qoe::parse_regime(r));
      }
      auto summary = qoe::verify(cfg);
      const bool failed = summary.failures() > 0;
      write_text(summary_path, qoe::summary_to_json(summary, failed ? cex_dir : "").dump(2) + "\n");
      if (failed) {
        qoe::write_counterexamples(summary, cex_dir);
        std::cerr << summary.failures() << " contracted property failures; counterexamples in " << cex_dir << '\n';
        return kExitPropertyFailure;
      }
      return kExitOk;
    }
  } catch (const qoe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}
