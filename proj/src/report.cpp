#include "atsssf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace atsssf {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string hash_hex(std::uint64_t hash) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string round_log_csv(const std::vector<RoundLog>& rounds) {
    std::string out =
        "round,strategy,alpha,sigma2,mean_trust,trust_variance,omitted_count,"
        "readmitted_count,active_count,test_accuracy,test_macro_precision,"
        "test_macro_recall,test_macro_f1\n";
    for (const auto& r : rounds) {
        out += std::to_string(r.round);
        out += ',' + strategy_name(r.strategy);
        out += ',' + fmt(r.alpha);
        out += ',' + fmt(r.sigma2);
        out += ',' + fmt(r.mean_trust);
        out += ',' + fmt(r.trust_variance);
        out += ',' + std::to_string(r.omitted_now.size());
        out += ',' + std::to_string(r.readmitted_now.size());
        out += ',' + std::to_string(r.active_count);
        out += ',' + fmt(r.global.accuracy);
        out += ',' + fmt(r.global.macro_precision);
        out += ',' + fmt(r.global.macro_recall);
        out += ',' + fmt(r.global.macro_f1);
        out += '\n';
    }
    return out;
}

std::string client_log_csv(const std::vector<ClientRoundLog>& rows) {
    std::string out = "round,client_id,raw_trust,smoothed_trust,status,behavior\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round);
        out += ',' + std::to_string(r.client_id);
        out += ',' + fmt(r.raw_trust);
        out += ',' + fmt(r.smoothed_trust);
        out += ',';
        out += (r.status == Participation::kIncluded) ? "included" : "omitted";
        out += ',' + r.behavior;
        out += '\n';
    }
    return out;
}

std::string report_json(const ExperimentConfig& config, const ExperimentResult& result) {
    nlohmann::json j;
    j["header"] = {
        {"strategy", strategy_name(config.strategy)},
        {"clients", config.n_clients},
        {"rounds", config.rounds},
        {"lr", config.lr},
        {"batch_size", config.batch_size},
        {"alpha", config.alpha_init},
        {"tau", config.tau},
        {"max_omissions", config.max_omissions},
        {"seed", config.seed},
        {"dataset_hash", hash_hex(result.data_hash)},
    };
    j["config_echo"] = config_echo(config);

    auto metrics_json = [](const MetricVector& m) {
        return nlohmann::json{{"accuracy", m.accuracy},
                              {"macro_precision", m.macro_precision},
                              {"macro_recall", m.macro_recall},
                              {"macro_f1", m.macro_f1}};
    };
    j["initial_metrics"] = metrics_json(result.initial_metrics);
    j["final_metrics"] = metrics_json(result.final_metrics);
    j["final_confusion_csv"] = result.final_confusion.to_csv();

    std::size_t omissions = 0, readmissions = 0;
    for (const auto& r : result.rounds) {
        omissions += r.omitted_now.size();
        readmissions += r.readmitted_now.size();
    }
    j["summary"] = {
        {"rounds_run", result.rounds.size()},
        {"total_omissions", omissions},
        {"total_readmissions", readmissions},
        {"final_mean_trust",
         result.rounds.empty() ? 1.0 : result.rounds.back().mean_trust},
        {"shard_train_sizes", result.shard_train_sizes},
        {"behaviors", result.behaviors},
    };
    return j.dump(2) + "\n";
}

std::string comparison_summary_csv(
    const std::vector<std::pair<std::string, const ExperimentResult*>>& runs) {
    auto sorted = runs;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.second->final_metrics.macro_f1 > b.second->final_metrics.macro_f1;
    });
    std::string out = "strategy,final_accuracy,final_macro_f1,mean_trust,total_omissions\n";
    for (const auto& [name, result] : sorted) {
        std::size_t omissions = 0;
        for (const auto& r : result->rounds) omissions += r.omitted_now.size();
        const double mean_trust =
            result->rounds.empty() ? 1.0 : result->rounds.back().mean_trust;
        out += name;
        out += ',' + fmt(result->final_metrics.accuracy);
        out += ',' + fmt(result->final_metrics.macro_f1);
        out += ',' + fmt(mean_trust);
        out += ',' + std::to_string(omissions);
        out += '\n';
    }
    return out;
}

std::string line_plot_svg(const std::string& title, const std::string& y_label,
                          const std::vector<PlotSeries>& series) {
    const int width = 720, height = 420;
    const int left = 64, right = 160, top = 40, bottom = 44;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::size_t n = 0;
    double y_min = 0.0, y_max = 1e-12;
    for (const auto& s : series) {
        n = std::max(n, s.ys.size());
        for (double y : s.ys) {
            if (!std::isfinite(y)) continue;
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    const double span = (y_max - y_min) > 0 ? (y_max - y_min) : 1.0;
    y_max += 0.05 * span;

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    auto px = [&](double round) {
        return left + plot_w * (n > 1 ? (round - 1.0) / (static_cast<double>(n) - 1.0) : 0.5);
    };
    auto py = [&](double y) { return top + plot_h * (1.0 - (y - y_min) / (y_max - y_min)); };

    // Axes with five horizontal grid lines.
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    char buf[64];
    for (int g = 0; g <= 5; ++g) {
        const double y = y_min + (y_max - y_min) * g / 5.0;
        const double yy = py(y);
        svg << "<line x1=\"" << left << "\" y1=\"" << yy << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << yy << "\" stroke=\"#dddddd\"/>\n";
        std::snprintf(buf, sizeof(buf), "%.3g", y);
        svg << "<text x=\"" << left - 6 << "\" y=\"" << yy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << buf
            << "</text>\n";
    }
    for (int g = 0; g <= 4; ++g) {
        const double round = 1.0 + (static_cast<double>(n > 0 ? n : 1) - 1.0) * g / 4.0;
        svg << "<text x=\"" << px(round) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << static_cast<long>(std::lround(round)) << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">round"
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << y_label
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (series[s].dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < series[s].ys.size(); ++i) {
            if (!std::isfinite(series[s].ys[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(static_cast<double>(i + 1)),
                          py(series[s].ys[i]));
            svg << buf;
        }
        svg << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(s);
        svg << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
            << left + plot_w + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"" << (series[s].dashed ? " stroke-dasharray=\"6,4\"" : "")
            << "/>\n";
        svg << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_file_atomic: cannot open " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write_file_atomic: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace atsssf
