#include "driftguard/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "driftguard/errors.hpp"

namespace driftguard {

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw PreconditionError("unknown report format '" + name + "' (expected csv or json)");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw PreconditionError("config: top level must be an object");

  static const char* known[] = {"dim",   "half_width", "half_widths", "density", "generator", "rademacher",
                                "steps", "trials",     "seed",        "out",     "format",    "threads"};
  for (const auto& item : j.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
      throw PreconditionError("config: unknown key '" + item.key() + "'");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("half_widths")) {
      const auto widths = j.at("half_widths").get<std::vector<double>>();
      cfg.body = Box<double>(Eigen::Map<const Eigen::VectorXd>(widths.data(), static_cast<Eigen::Index>(widths.size())));
    } else {
      cfg.body = Box<double>::cube(j.value("dim", 1), j.value("half_width", 1.0));
    }
    if (j.value("density", std::string("cube_eigen")) != "cube_eigen")
      throw PreconditionError("config: density must be \"cube_eigen\"");
    cfg.generator = generator_from_name(j.value("generator", std::string("unit")), cfg.body.dim());
    cfg.generator.rademacher = j.value("rademacher", true);
    cfg.n_steps = j.value("steps", std::int64_t{1000});
    cfg.n_trials = j.value("trials", std::int64_t{100});
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.output_path = j.value("out", std::string());
    cfg.format = report_format_from_string(j.value("format", std::string("json")));
    cfg.threads = j.value("threads", 1u);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  if (cfg.n_steps < 0) throw PreconditionError("config: steps must be >= 0");
  if (cfg.n_trials < 1) throw PreconditionError("config: trials must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

}  // namespace driftguard
