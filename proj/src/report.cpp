#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "driftguard/bounds.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/harness.hpp"

namespace driftguard {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

BoundKind bound_kind_from_string(const std::string& name) {
  for (auto kind : {BoundKind::general_fisher, BoundKind::cube_l2, BoundKind::isotropic, BoundKind::lower_1d})
    if (name == to_string(kind)) return kind;
  throw PreconditionError("unknown bound kind '" + name + "'");
}

std::string emit_report(const RunStats& stats, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream out;
    out << "trial,discards\n";
    for (std::size_t t = 0; t < stats.per_trial_discards.size(); ++t)
      out << t << ',' << stats.per_trial_discards[t] << '\n';
    out << "summary,value,inputs\n";
    out << "mean," << format_double(stats.mean) << ",\n";
    out << "std_error," << format_double(stats.std_error) << ",\n";
    out << "containment_violations," << stats.containment_violations << ",\n";
    for (const auto& b : stats.bound_reports)
      out << "bound:" << to_string(b.kind) << ',' << format_double(b.value) << ',' << csv_quote(b.inputs_digest)
          << '\n';
    return out.str();
  }

  nlohmann::ordered_json j;
  j["per_trial_discards"] = stats.per_trial_discards;
  j["mean"] = stats.mean;
  j["std_error"] = stats.std_error;
  auto bounds = nlohmann::ordered_json::array();
  for (const auto& b : stats.bound_reports)
    bounds.push_back({{"kind", to_string(b.kind)}, {"value", b.value}, {"inputs_digest", b.inputs_digest}});
  j["bound_reports"] = std::move(bounds);
  j["containment_violations"] = stats.containment_violations;
  return j.dump(2) + "\n";
}

RunStats parse_report_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunStats stats;
  stats.per_trial_discards = j.at("per_trial_discards").get<std::vector<std::int64_t>>();
  stats.mean = j.at("mean").get<double>();
  stats.std_error = j.at("std_error").get<double>();
  for (const auto& b : j.at("bound_reports"))
    stats.bound_reports.push_back({bound_kind_from_string(b.at("kind").get<std::string>()),
                                   b.at("value").get<double>(), b.at("inputs_digest").get<std::string>()});
  stats.containment_violations = j.at("containment_violations").get<std::int64_t>();
  return stats;
}

}  // namespace driftguard
