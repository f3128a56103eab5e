#pragma once

#include <string>
#include <vector>

#include "atsssf/config.hpp"
#include "atsssf/federation.hpp"

namespace atsssf {

/// Columns: round, strategy, alpha, sigma2, mean_trust, trust_variance,
/// omitted_count, readmitted_count, active_count, test_accuracy,
/// test_macro_precision, test_macro_recall, test_macro_f1.
std::string round_log_csv(const std::vector<RoundLog>& rounds);

/// Columns: round, client_id, raw_trust, smoothed_trust, status, behavior.
std::string client_log_csv(const std::vector<ClientRoundLog>& rows);

/// Structured run report: config echo, dataset hash, initial/final metrics,
/// the final confusion matrix as a CSV block, and round summary counts.
std::string report_json(const ExperimentConfig& config, const ExperimentResult& result);

/// strategy, final_accuracy, final_macro_f1, mean_trust, total_omissions --
/// one row per strategy, ordered by final macro F1 (best first).
std::string comparison_summary_csv(
    const std::vector<std::pair<std::string, const ExperimentResult*>>& runs);

struct PlotSeries {
    std::string label;
    std::vector<double> ys;  // x is the 1-based round index
    bool dashed = false;
};

/// Minimal self-contained SVG line chart.
std::string line_plot_svg(const std::string& title, const std::string& y_label,
                          const std::vector<PlotSeries>& series);

/// Writes via a temp file and rename, so failures never leave partial output.
void write_file_atomic(const std::string& path, const std::string& content);

std::string hash_hex(std::uint64_t hash);

}  // namespace atsssf
