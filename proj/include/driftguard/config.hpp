#pragma once

#include <string>

#include "driftguard/harness.hpp"

namespace driftguard {

/// Experiment configuration file (JSON). Recognised keys, all optional:
///
///   dim          integer, default 1
///   half_width   number, cube half-width T, default 1
///   half_widths  array of numbers, overrides dim/half_width with a box
///   density      "cube_eigen" (only choice)
///   generator    "unit" | "isotropic" | "pm1" | "file:<path>", default "unit"
///   rademacher   bool, default true
///   steps        integer, default 1000
///   trials       integer, default 100
///   seed         integer, default 1
///   out          output path, default stdout
///   format       "csv" | "json", default "json"
///   threads      integer, 0 = all cores, default 1
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Parses "csv" or "json".
ReportFormat report_format_from_string(const std::string& name);

}  // namespace driftguard
