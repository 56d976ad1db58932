#pragma once

// Quality assessment: per-category counts and percentages, comment-side vs
// code-side rollups, and the remove/update split. A pair carrying several
// noise categories is counted once per category but only once in the totals,
// so the sum of category percentages can exceed the noisy total.

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccd/detectors.hpp"

namespace ccd {

struct CategoryStat {
    NoiseCategory category;
    std::size_t count = 0;
    double pct = 0.0;
};

struct SideStat {
    std::size_t count = 0;
    double pct = 0.0;
};

struct QualityReport {
    std::string dataset_name;
    std::size_t size = 0;
    std::array<CategoryStat, kCategoryCount> per_category;
    std::array<NoiseAction, kCategoryCount> actions;  // resolved from config
    SideStat comment_side_total;
    SideStat code_side_total;
    SideStat noisy_total;   // pairs with >= 1 label, counted once
    SideStat removed;       // remove dominates update for mixed pairs
    SideStat updated;
    std::array<std::size_t, kCategoryCount> fallback_counts{};
    std::size_t warnings = 0;  // pairs with tokenization failures
};

enum class ReportFormat { Text, Json, Csv };

// Builds the report from an index-aligned labeling of the dataset (see
// label_dataset). Exposed separately so the cleaner can reuse its own
// diagnosis pass.
inline QualityReport build_report(const Dataset& dataset,
                                  const std::vector<Diagnosis>& labeled,
                                  const RuleConfig& cfg) {
    QualityReport report;
    report.dataset_name = dataset.source_name;
    report.size = dataset.pairs.size();
    for (int c = 0; c < kCategoryCount; ++c) {
        report.per_category[c].category = static_cast<NoiseCategory>(c);
        report.actions[c] = cfg.action_for(static_cast<NoiseCategory>(c));
    }
    for (const auto& diagnosis : labeled) {
        bool comment_side = false, code_side = false;
        bool any_remove = false, any_update = false;
        for (const auto& label : diagnosis.labels) {
            int c = static_cast<int>(label.category);
            report.per_category[c].count += 1;
            if (label.fallback) report.fallback_counts[c] += 1;
            (is_comment_side(label.category) ? comment_side : code_side) = true;
            (label.action == NoiseAction::Remove ? any_remove : any_update) = true;
        }
        if (comment_side) report.comment_side_total.count += 1;
        if (code_side) report.code_side_total.count += 1;
        if (comment_side || code_side) report.noisy_total.count += 1;
        if (any_remove)
            report.removed.count += 1;
        else if (any_update)
            report.updated.count += 1;
        if (!diagnosis.warnings.empty()) report.warnings += 1;
    }
    if (report.size > 0) {
        double n = static_cast<double>(report.size);
        for (auto& stat : report.per_category) stat.pct = stat.count / n;
        for (SideStat* s : {&report.comment_side_total, &report.code_side_total,
                            &report.noisy_total, &report.removed, &report.updated})
            s->pct = s->count / n;
    }
    return report;
}

// Read-only quality assessment of a dataset.
inline QualityReport assess(const Dataset& dataset, const RuleConfig& cfg, int jobs = 1) {
    if (dataset.empty()) throw std::runtime_error("empty dataset");
    return build_report(dataset, label_dataset(dataset, cfg, jobs), cfg);
}

namespace report_detail {

inline std::string pct_str(double v, int decimals = 1) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, v * 100.0);
    return buf;
}

inline std::string csv_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline const char* action_str(NoiseAction a) {
    return a == NoiseAction::Remove ? "remove" : "update";
}

}  // namespace report_detail

inline std::string render_report(const QualityReport& report, ReportFormat format) {
    using namespace report_detail;
    if (format == ReportFormat::Csv) {
        std::string out = "category,side,count,pct,action\n";
        for (const auto& stat : report.per_category) {
            out += std::string(category_name(stat.category)) + "," +
                   (is_comment_side(stat.category) ? "comment" : "code") + "," +
                   std::to_string(stat.count) + "," + csv_pct(stat.pct) + "," +
                   action_str(report.actions[static_cast<int>(stat.category)]) + "\n";
        }
        auto rollup = [&](const char* name, const char* side, const SideStat& s,
                          const char* action) {
            out += std::string(name) + "," + side + "," + std::to_string(s.count) + "," +
                   csv_pct(s.pct) + "," + action + "\n";
        };
        rollup("comment_side_total", "comment", report.comment_side_total, "");
        rollup("code_side_total", "code", report.code_side_total, "");
        rollup("noisy_total", "all", report.noisy_total, "");
        rollup("removed_total", "all", report.removed, "remove");
        return out;
    }
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json j;
        j["dataset"] = report.dataset_name;
        j["size"] = report.size;
        auto categories = nlohmann::ordered_json::array();
        for (const auto& stat : report.per_category) {
            nlohmann::ordered_json row;
            row["category"] = category_name(stat.category);
            row["side"] = is_comment_side(stat.category) ? "comment" : "code";
            row["count"] = stat.count;
            row["pct"] = stat.pct;
            row["action"] = action_str(report.actions[static_cast<int>(stat.category)]);
            categories.push_back(std::move(row));
        }
        j["categories"] = std::move(categories);
        auto side = [](const SideStat& s) {
            nlohmann::ordered_json o;
            o["count"] = s.count;
            o["pct"] = s.pct;
            return o;
        };
        j["comment_side_total"] = side(report.comment_side_total);
        j["code_side_total"] = side(report.code_side_total);
        j["noisy_total"] = side(report.noisy_total);
        j["removed"] = side(report.removed);
        j["updated"] = side(report.updated);
        nlohmann::ordered_json fallback;
        for (int c = 0; c < kCategoryCount; ++c)
            fallback[category_name(static_cast<NoiseCategory>(c))] = report.fallback_counts[c];
        j["fallback_counts"] = std::move(fallback);
        j["warnings"] = report.warnings;
        return j.dump(2) + "\n";
    }

    // Text: mirrors the per-category table, grouped comment side then code side.
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "dataset: %s  (%zu pairs)\n",
                  report.dataset_name.empty() ? "-" : report.dataset_name.c_str(),
                  report.size);
    out += line;
    out += "  category                 count     pct  action\n";
    auto emit_row = [&](const char* name, std::size_t count, double pct,
                        const char* action) {
        std::snprintf(line, sizeof(line), "  %-22s %7zu  %6s  %s\n", name, count,
                      pct_str(pct).c_str(), action);
        out += line;
    };
    for (bool comment_pass : {true, false}) {
        for (const auto& stat : report.per_category) {
            if (is_comment_side(stat.category) != comment_pass) continue;
            emit_row(category_name(stat.category), stat.count, stat.pct,
                     action_str(report.actions[static_cast<int>(stat.category)]));
        }
        const SideStat& total =
            comment_pass ? report.comment_side_total : report.code_side_total;
        emit_row(comment_pass ? "comment-side total" : "code-side total", total.count,
                 total.pct, "");
    }
    emit_row("noisy total", report.noisy_total.count, report.noisy_total.pct, "");
    emit_row("removed", report.removed.count, report.removed.pct, "");
    emit_row("updated", report.updated.count, report.updated.pct, "");
    if (report.warnings) {
        std::snprintf(line, sizeof(line), "  warnings: %zu pair(s) failed tokenization\n",
                      report.warnings);
        out += line;
    }
    return out;
}

struct CategoryDelta {
    NoiseCategory category;
    long count_delta = 0;  // before - after
    double pct_delta = 0.0;
};

struct ReportDelta {
    std::array<CategoryDelta, kCategoryCount> per_category;
    long noisy_count_delta = 0;
    double noisy_pct_delta = 0.0;
};

inline ReportDelta compare_reports(const QualityReport& before, const QualityReport& after) {
    ReportDelta delta;
    for (int c = 0; c < kCategoryCount; ++c) {
        delta.per_category[c].category = static_cast<NoiseCategory>(c);
        delta.per_category[c].count_delta =
            static_cast<long>(before.per_category[c].count) -
            static_cast<long>(after.per_category[c].count);
        delta.per_category[c].pct_delta =
            before.per_category[c].pct - after.per_category[c].pct;
    }
    delta.noisy_count_delta = static_cast<long>(before.noisy_total.count) -
                              static_cast<long>(after.noisy_total.count);
    delta.noisy_pct_delta = before.noisy_total.pct - after.noisy_total.pct;
    return delta;
}

}  // namespace ccd
