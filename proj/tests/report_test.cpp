#include "ccd/report.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "ccd/cleaner.hpp"
#include "support/corpora.hpp"

using namespace ccd;

namespace {

const RuleConfig kDefault;

TEST(Assess, GoldCorpusCountsOnePerCategory) {
    QualityReport report = assess(testsupport::load_gold(), kDefault);
    EXPECT_EQ(report.size, 12u);
    for (const auto& stat : report.per_category) {
        EXPECT_EQ(stat.count, 1u) << category_name(stat.category);
        EXPECT_DOUBLE_EQ(stat.pct, 1.0 / 12.0);
    }
    EXPECT_EQ(report.noisy_total.count, 12u);
    EXPECT_EQ(report.comment_side_total.count, 7u);
    EXPECT_EQ(report.code_side_total.count, 5u);
    EXPECT_EQ(report.removed.count, 8u);
    EXPECT_EQ(report.updated.count, 4u);
    EXPECT_EQ(report.warnings, 0u);
}

TEST(Assess, CleanCorpusAllZero) {
    Dataset d;
    for (int i = 0; i < 10; ++i) d.pairs.push_back(testsupport::clean_pair(i));
    QualityReport report = assess(d, kDefault);
    for (const auto& stat : report.per_category) EXPECT_EQ(stat.count, 0u);
    EXPECT_EQ(report.noisy_total.count, 0u);
}

TEST(Assess, EmptyDatasetIsAnError) {
    EXPECT_THROW(assess(Dataset{}, kDefault), std::runtime_error);
}

TEST(Assess, PlantedRatesRecovered) {
    auto planted = testsupport::make_planted_corpus(400, 0.05, 21);
    QualityReport report = assess(planted.dataset, kDefault);
    for (const auto& stat : report.per_category) {
        std::size_t want = planted.planted_counts[stat.category];
        EXPECT_EQ(stat.count, want) << category_name(stat.category);
    }
}

TEST(Assess, ReadOnly) {
    Dataset d = testsupport::load_gold();
    std::string before = testsupport::to_jsonl(d);
    assess(d, kDefault);
    EXPECT_EQ(testsupport::to_jsonl(d), before);
}

TEST(Assess, DistilledOutputIsNoiseFree) {
    DistillResult result = clean_dataset(testsupport::load_gold(), kDefault);
    QualityReport after = assess(result.distilled, kDefault);
    EXPECT_EQ(after.noisy_total.count, 0u);
}

TEST(Assess, MultiLabelAccountingIdentity) {
    auto planted = testsupport::make_planted_corpus(120, 0.05, 23);
    // add a known multi-label pair
    CodeCommentPair multi;
    multi.id = "multi";
    multi.code = "public void setX(int x){}";
    multi.comment = "set x ?";
    planted.dataset.pairs.push_back(multi);

    QualityReport report = assess(planted.dataset, kDefault);
    auto diagnoses = label_dataset(planted.dataset, kDefault);
    std::size_t label_sum = 0, extra = 0;
    for (const auto& d : diagnoses) {
        label_sum += d.labels.size();
        if (!d.labels.empty()) extra += d.labels.size() - 1;
    }
    std::size_t category_sum = 0;
    for (const auto& stat : report.per_category) category_sum += stat.count;
    EXPECT_EQ(category_sum, label_sum);
    EXPECT_EQ(category_sum - report.noisy_total.count, extra);
    EXPECT_GE(report.noisy_total.count,
              std::max_element(report.per_category.begin(), report.per_category.end(),
                               [](const CategoryStat& a, const CategoryStat& b) {
                                   return a.count < b.count;
                               })
                  ->count);
}

TEST(Assess, DisablingOneRuleNeverRaisesOthers) {
    auto planted = testsupport::make_planted_corpus(150, 0.05, 25);
    QualityReport full = assess(planted.dataset, kDefault);
    for (NoiseCategory off : all_categories()) {
        RuleConfig cfg;
        cfg.set_enabled(off, false);
        QualityReport partial = assess(planted.dataset, cfg);
        for (int c = 0; c < kCategoryCount; ++c) {
            if (static_cast<NoiseCategory>(c) == off) {
                EXPECT_EQ(partial.per_category[c].count, 0u);
            } else {
                EXPECT_EQ(partial.per_category[c].count, full.per_category[c].count)
                    << "disabling " << category_name(off) << " changed "
                    << category_name(static_cast<NoiseCategory>(c));
            }
        }
    }
}

TEST(Assess, FallbackLabelsCountedSeparately) {
    Dataset d;
    CodeCommentPair pair = testsupport::clean_pair(0);
    pair.raw_comment.reset();
    pair.comment = "returns the value of the row and";
    d.pairs.push_back(pair);
    d.pairs.push_back(testsupport::clean_pair(1));
    QualityReport report = assess(d, kDefault);
    int partial = static_cast<int>(NoiseCategory::PartialSentence);
    EXPECT_EQ(report.per_category[partial].count, 1u);
    EXPECT_EQ(report.fallback_counts[partial], 1u);
}

TEST(RenderReport, CsvHasSixteenDataRows) {
    QualityReport report = assess(testsupport::load_gold(), kDefault);
    std::string csv = render_report(report, ReportFormat::Csv);
    std::istringstream lines(csv);
    std::string line;
    int rows = 0;
    bool header = true;
    while (std::getline(lines, line)) {
        if (header) {
            EXPECT_EQ(line, "category,side,count,pct,action");
            header = false;
            continue;
        }
        if (!line.empty()) ++rows;
    }
    EXPECT_EQ(rows, 16);
}

TEST(RenderReport, TextHandlesAllZeroes) {
    Dataset d;
    d.pairs.push_back(testsupport::clean_pair(0));
    QualityReport report = assess(d, kDefault);
    std::string text = render_report(report, ReportFormat::Text);
    EXPECT_NE(text.find("noisy total"), std::string::npos);
}

TEST(RenderReport, JsonRoundTripsWithSameValues) {
    QualityReport report = assess(testsupport::load_gold(), kDefault);
    std::string rendered = render_report(report, ReportFormat::Json);
    nlohmann::json parsed = nlohmann::json::parse(rendered);
    EXPECT_EQ(parsed["size"], 12);
    EXPECT_EQ(parsed["noisy_total"]["count"], 12);
    EXPECT_EQ(parsed["categories"].size(), 12u);
    EXPECT_EQ(parsed["removed"]["count"], 8);
    EXPECT_EQ(parsed["updated"]["count"], 4);
}

TEST(CompareReports, CleaningDrivesCategoriesToZero) {
    Dataset gold = testsupport::load_gold();
    QualityReport before = assess(gold, kDefault);
    DistillResult result = clean_dataset(gold, kDefault);
    QualityReport after = assess(result.distilled, kDefault);
    ReportDelta delta = compare_reports(before, after);
    for (int c = 0; c < kCategoryCount; ++c)
        EXPECT_EQ(delta.per_category[c].count_delta,
                  static_cast<long>(before.per_category[c].count));
    EXPECT_EQ(delta.noisy_count_delta, 12);
}

TEST(CompareReports, IdenticalReportsGiveZeroDeltas) {
    QualityReport report = assess(testsupport::load_gold(), kDefault);
    ReportDelta delta = compare_reports(report, report);
    for (const auto& row : delta.per_category) {
        EXPECT_EQ(row.count_delta, 0);
        EXPECT_DOUBLE_EQ(row.pct_delta, 0.0);
    }
}

}  // namespace
