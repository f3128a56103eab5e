#pragma once

#include <string>
#include <vector>

#include "atsssf/config.hpp"
#include "atsssf/federation.hpp"

namespace atsssf {

std::string round_log_path(const std::string& out_dir, StrategyKind strategy);
std::string client_log_path(const std::string& out_dir, StrategyKind strategy);
std::string report_path(const std::string& out_dir, StrategyKind strategy);

/// Runs one experiment and writes round_log_<s>.csv, client_log_<s>.csv and
/// report_<s>.json into the output directory (created if missing).
ExperimentResult run_command(const ExperimentConfig& config, bool write_checkpoint = false);

/// Runs every strategy on the identical dataset and seed, writes the
/// per-strategy logs plus summary.csv and the trust/omissions/accuracy
/// SVG plots. Requires at least two strategies.
void compare_command(const ExperimentConfig& base, const std::vector<StrategyKind>& strategies);

/// Writes the raw generated dataset to dataset.csv in the output directory.
void export_dataset_command(const ExperimentConfig& config);

}  // namespace atsssf
