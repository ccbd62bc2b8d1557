#pragma once

// Text formats for configs and results: flat key=value configs, JSON
// manifests, per-point result records and per-figure plot tables.

#include <string>
#include <string_view>

#include <json.hpp>

#include "wiretap/simharness.hpp"

namespace wiretap {

using Json = nlohmann::json;

/// "%.17g", which round-trips every finite double.
std::string format_number(double x);

/// Applies one configuration key (the same names the flat config file uses).
/// Throws ConfigError for unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` lines, '#' comments. A JSON document (a config object or
/// a run manifest with a "config" member) is accepted as well.
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});

Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

enum class OutputFormat { csv, json };

/// One record per sweep point per scheme.
std::string results_text(const SweepResult& res, OutputFormat fmt);

/// Plot-ready table: axis, curve, scheme, metric, mean, mean_db, stderr,
/// stderr_db, outage_fraction.
std::string plot_table(const SweepResult& res);

Json manifest(const SweepResult& res, double wall_time_s);

} // namespace wiretap
