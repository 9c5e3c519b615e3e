#pragma once

// Rendering of entropy reports. Structured output is a versioned JSON
// document; extended reals are encoded as a number or the string "inf".
// Stored values are always nats; the text table can show bits.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qoe/oentropy.hpp"
#include "qoe/scenario.hpp"

namespace qoe {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::ordered_json to_json(ExtendedReal v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

inline nlohmann::ordered_json to_json(const std::optional<ExtendedReal>& v) {
  if (!v) return nullptr;
  return to_json(*v);
}

struct ScenarioReport {
  std::string name;
  Eigen::Index dim = 0;
  std::size_t outcomes = 0;
  EntropyReport values;
};

inline ScenarioReport run_report(const Scenario& s) {
  validate_dims(s);
  try {
    return {s.name, s.rho.dim(), s.povm.size(), compute_report(s.rho, s.povm, s.gamma, s.tol())};
  } catch (const Error& e) {
    throw NumericalError("scenario '" + s.name + "': " + e.what());
  }
}

inline nlohmann::ordered_json report_to_json(const ScenarioReport& r) {
  const auto& v = r.values;
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = r.name;
  j["dim"] = r.dim;
  j["outcomes"] = r.outcomes;
  j["units"] = "nats";
  j["regime"] = v.regime;
  j["commuting"] = {{"rho_gamma", v.flags.rho_gamma},
                    {"rho_povm", v.flags.rho_povm},
                    {"gamma_povm", v.flags.gamma_povm}};
  j["entropies"] = {{"s_vn", v.s_vn},     {"s_original", v.s_original}, {"s_clax", to_json(v.s_clax)},
                    {"s1", to_json(v.s1)}, {"s2", to_json(v.s2)},         {"s3", to_json(v.s3)}};
  j["sigmas"] = {{"sigma1", to_json(v.sigma1)}, {"sigma2", to_json(v.sigma2)}, {"sigma3", to_json(v.sigma3)}};
  j["s2_falsified"] = v.s2_falsified;
  j["full_rank"] = v.full_rank;
  j["s3_identity_residual"] =
      v.s3_identity_residual ? nlohmann::ordered_json(*v.s3_identity_residual) : nlohmann::ordered_json(nullptr);
  j["petz"] = {{"recovered", v.petz_recovered},
               {"residual", std::isfinite(v.petz_residual) ? nlohmann::ordered_json(v.petz_residual)
                                                           : nlohmann::ordered_json("inf")}};
  return j;
}

namespace detail {

inline std::string fmt_value(ExtendedReal v, bool bits) {
  if (v.is_infinite()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", bits ? v.value() / std::log(2.0) : v.value());
  return buf;
}

}  // namespace detail

inline std::string report_to_text(const ScenarioReport& r, bool bits = false) {
  const auto& v = r.values;
  const char* unit = bits ? "bits" : "nats";
  std::ostringstream os;
  os << "scenario   " << r.name << "\n";
  os << "dimension  " << r.dim << ", outcomes " << r.outcomes << "\n";
  os << "regime     " << v.regime << "  ([rho,gamma]=0: " << (v.flags.rho_gamma ? "yes" : "no")
     << ", [rho,Pi]=0: " << (v.flags.rho_povm ? "yes" : "no")
     << ", [gamma,Pi]=0: " << (v.flags.gamma_povm ? "yes" : "no") << ")\n\n";

  auto row = [&](const std::string& label, const std::string& value, const std::string& sigma = "") {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-12s %22s  %22s\n", label.c_str(), value.c_str(), sigma.c_str());
    os << buf;
  };
  row("quantity", std::string("value [") + unit + "]", "excess over S(rho)");
  row("S(rho)", detail::fmt_value(v.s_vn, bits));
  row("S_M", detail::fmt_value(v.s_original, bits), detail::fmt_value(v.s_original - v.s_vn, bits));
  if (v.s_clax) {
    auto excess = difference(*v.s_clax, v.s_vn);
    row("S_clax", detail::fmt_value(*v.s_clax, bits), excess ? detail::fmt_value(*excess, bits) : "");
  } else {
    row("S_clax", "n/a", "");
  }
  row("S^(1)", detail::fmt_value(v.s1, bits), detail::fmt_value(v.sigma1, bits));
  row("S^(2)", detail::fmt_value(v.s2, bits) + (v.s2_falsified ? "*" : ""), detail::fmt_value(v.sigma2, bits));
  row("S^(3)", detail::fmt_value(v.s3, bits), detail::fmt_value(v.sigma3, bits));
  os << "\n";
  if (v.s2_falsified) os << "  * Q_R undefined: the statistics falsify the prior\n";
  if (v.s3_identity_residual) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", *v.s3_identity_residual);
    os << "  S^(3) process-form residual " << buf << (v.full_rank ? " (full rank)" : "") << "\n";
  }
  os << "  Petz recovery of rho: " << (v.petz_recovered ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace qoe
