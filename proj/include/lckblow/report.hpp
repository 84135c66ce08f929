#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lckblow/blowup.hpp"

namespace lckblow {

inline constexpr int kReportSchemaVersion = 1;

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double worst_value = 0.0;
  std::optional<ChartPoint> worst_sample;
  bool pass = false;
};

struct VerificationReport {
  std::size_t n = 0;
  double eps = 0.0;
  double N = 0.0;
  std::map<std::string, std::size_t> stratum_counts;
  double min_eigenvalue = 0.0;
  double max_lck_residual = 0.0;
  double max_dtheta = 0.0;
  double max_support_overlap = 0.0;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline nlohmann::json to_json(const ChartPoint& p) {
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& c : p.coords) coords.push_back({c.real(), c.imag()});
  return {{"chart", p.chart.is_blow() ? static_cast<int>(p.chart.index + 1) : 0},
          {"chart_name", p.chart.name()},
          {"coords", coords}};
}

inline ChartPoint chart_point_from_json(const nlohmann::json& j) {
  ChartPoint p;
  const int chart = j.at("chart").get<int>();
  p.chart = chart == 0 ? ChartId::base() : ChartId::blow(static_cast<std::size_t>(chart - 1));
  for (const auto& c : j.at("coords")) p.coords.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return p;
}

// Non-finite doubles are not representable in JSON; store them as strings.
inline nlohmann::json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad number in report: " + s);
  }
  return j.get<double>();
}

inline nlohmann::json to_json(const CheckResult& c) {
  nlohmann::json j = {{"name", c.name},
                      {"tolerance", number_to_json(c.tolerance)},
                      {"worst_value", number_to_json(c.worst_value)},
                      {"status", c.pass ? "pass" : "fail"}};
  j["worst_sample"] = c.worst_sample ? to_json(*c.worst_sample) : nlohmann::json(nullptr);
  return j;
}

inline CheckResult check_from_json(const nlohmann::json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.tolerance = number_from_json(j.at("tolerance"));
  c.worst_value = number_from_json(j.at("worst_value"));
  c.pass = j.at("status").get<std::string>() == "pass";
  if (!j.at("worst_sample").is_null()) c.worst_sample = chart_point_from_json(j.at("worst_sample"));
  return c;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"n", r.n},
          {"eps", r.eps},
          {"N", number_to_json(r.N)},
          {"stratum_counts", r.stratum_counts},
          {"min_eigenvalue", number_to_json(r.min_eigenvalue)},
          {"max_lck_residual", number_to_json(r.max_lck_residual)},
          {"max_dtheta", number_to_json(r.max_dtheta)},
          {"max_support_overlap", number_to_json(r.max_support_overlap)},
          {"checks", checks},
          {"pass", r.pass()}};
}

inline VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.n = j.at("n").get<std::size_t>();
  r.eps = j.at("eps").get<double>();
  r.N = number_from_json(j.at("N"));
  r.stratum_counts = j.at("stratum_counts").get<std::map<std::string, std::size_t>>();
  r.min_eigenvalue = number_from_json(j.at("min_eigenvalue"));
  r.max_lck_residual = number_from_json(j.at("max_lck_residual"));
  r.max_dtheta = number_from_json(j.at("max_dtheta"));
  r.max_support_overlap = number_from_json(j.at("max_support_overlap"));
  for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
  return r;
}

}  // namespace lckblow
