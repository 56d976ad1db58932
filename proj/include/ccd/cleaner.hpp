#pragma once

// Cleaning pipeline: diagnose every pair, apply remove/update actions, then
// deduplicate the survivors. A pair with any remove-action label is dropped
// (remove dominates update); duplicates are resolved after per-pair cleaning
// so that pairs differing only in stripped comments still collapse.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccd/detectors.hpp"
#include "ccd/report.hpp"

namespace ccd {

enum class CleanVerdict { Kept, Updated, Removed };

inline const char* to_string(CleanVerdict v) {
    switch (v) {
        case CleanVerdict::Kept: return "kept";
        case CleanVerdict::Updated: return "updated";
        default: return "removed";
    }
}

struct CleanOutcome {
    std::string pair_id;
    CleanVerdict verdict = CleanVerdict::Kept;
    std::vector<NoiseLabel> labels;
    std::optional<CodeCommentPair> final_pair;  // absent iff Removed
    std::vector<std::string> warnings;
};

struct DistillResult {
    Dataset distilled;
    std::vector<CleanOutcome> outcomes;  // one per input pair, input order
    QualityReport report;                // describes the input dataset
};

// Applies update proposals in a fixed order: whole-comment replacement
// (partial/verbose) first, then tampering strip, then identifier rejoin,
// then the code-side comment strip. The rejoin is recomputed against the
// current comment text, since a whole-comment replacement invalidates the
// spans the detector originally matched.
inline CodeCommentPair apply_updates(const CodeCommentPair& pair,
                                     const std::vector<NoiseLabel>& labels,
                                     const RuleConfig& cfg = RuleConfig{}) {
    const NoiseLabel* whole = nullptr;
    const NoiseLabel* tamper = nullptr;
    const NoiseLabel* rejoin = nullptr;
    const NoiseLabel* code = nullptr;
    for (const auto& label : labels) {
        if (label.action != NoiseAction::Update)
            throw std::logic_error("apply_updates: non-update label");
        switch (label.category) {
            case NoiseCategory::PartialSentence:
            case NoiseCategory::VerboseSentence:
                if (whole)
                    throw std::logic_error(
                        "apply_updates: partial and verbose both proposed");
                whole = &label;
                break;
            case NoiseCategory::ContentTampering: tamper = &label; break;
            case NoiseCategory::OverSplitting: rejoin = &label; break;
            case NoiseCategory::BlockCommentCode: code = &label; break;
            default: break;
        }
    }

    CodeCommentPair out = pair;
    bool comment_replaced = false;
    if (whole && whole->proposed_comment) {
        out.comment = *whole->proposed_comment;
        comment_replaced = true;
    }
    if (tamper && tamper->proposed_comment) {
        if (!comment_replaced) {
            out.comment = *tamper->proposed_comment;
        } else {
            std::vector<rule_detail::Match> matches =
                rule_detail::tampering_matches(out.comment);
            std::string stripped;
            std::size_t at = 0;
            for (const auto& m : matches) {
                if (m.begin < at) continue;
                stripped += out.comment.substr(at, m.begin - at);
                at = m.end;
            }
            stripped += out.comment.substr(at);
            if (!matches.empty()) out.comment = rule_detail::trim(stripped);
        }
    }
    if (rejoin && rejoin->proposed_comment) {
        if (!comment_replaced && !tamper) {
            out.comment = *rejoin->proposed_comment;
        } else {
            std::vector<Identifier> identifiers = extract_identifiers(tokenize_code(
                out.code, out.language, cfg.keyword_override_for(out.language)));
            if (auto recomputed = rejoin_split_identifiers(out.comment, identifiers, cfg))
                out.comment = *recomputed;
        }
    }
    if (code && code->proposed_code) out.code = *code->proposed_code;
    return out;
}

inline DistillResult clean_dataset(const Dataset& dataset, const RuleConfig& cfg,
                                   int jobs = 1) {
    const std::size_t n = dataset.pairs.size();
    std::vector<Diagnosis> diagnoses(n);
    rule_detail::parallel_index_for(n, jobs, [&](std::size_t i) {
        diagnoses[i] = diagnose(dataset.pairs[i], cfg);
    });

    DistillResult result;
    result.outcomes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CodeCommentPair& pair = dataset.pairs[i];
        CleanOutcome& outcome = result.outcomes[i];
        outcome.pair_id = pair.id;
        outcome.labels = diagnoses[i].labels;
        outcome.warnings = diagnoses[i].warnings;

        bool any_remove = false, any_update = false;
        for (const auto& label : outcome.labels)
            (label.action == NoiseAction::Remove ? any_remove : any_update) = true;
        if (any_remove) {
            outcome.verdict = CleanVerdict::Removed;
        } else if (any_update) {
            std::vector<NoiseLabel> updates;
            for (const auto& label : outcome.labels)
                if (label.action == NoiseAction::Update) updates.push_back(label);
            outcome.verdict = CleanVerdict::Updated;
            outcome.final_pair = apply_updates(pair, updates, cfg);
        } else {
            outcome.verdict = CleanVerdict::Kept;
            outcome.final_pair = pair;
        }
    }

    // Deduplicate the survivors on their post-update code.
    if (cfg.is_enabled(NoiseCategory::DuplicatedCode)) {
        Dataset survivors;
        std::map<std::string, std::size_t> index_of;
        for (std::size_t i = 0; i < n; ++i) {
            if (!result.outcomes[i].final_pair) continue;
            survivors.pairs.push_back(*result.outcomes[i].final_pair);
            index_of[result.outcomes[i].pair_id] = i;
        }
        DuplicateGroups dups = find_duplicates(survivors, cfg);
        for (const auto& [key, ids] : dups.groups) {
            for (std::size_t k = 1; k < ids.size(); ++k) {
                CleanOutcome& outcome = result.outcomes[index_of.at(ids[k])];
                outcome.verdict = CleanVerdict::Removed;
                outcome.final_pair.reset();
                outcome.labels.push_back(
                    NoiseLabel{NoiseCategory::DuplicatedCode,
                               cfg.action_for(NoiseCategory::DuplicatedCode),
                               "duplicate of " + ids[0]});
            }
        }
        for (const auto& warning : dups.warnings) {
            auto it = index_of.find(warning.pair_id);
            if (it != index_of.end())
                result.outcomes[it->second].warnings.push_back("duplicated_code: " +
                                                               warning.message);
        }
    }

    result.distilled.source_name = dataset.source_name;
    for (const auto& outcome : result.outcomes)
        if (outcome.final_pair) result.distilled.pairs.push_back(*outcome.final_pair);

    // The report describes the input: per-pair diagnoses plus input-level
    // duplicate labels (what an assessment of the raw dataset would find).
    append_duplicate_labels(dataset, cfg, diagnoses);
    result.report = build_report(dataset, diagnoses, cfg);
    return result;
}

// True iff cleaning the distilled output again removes and updates nothing.
inline bool verify_fixpoint(const DistillResult& result, const RuleConfig& cfg,
                            std::vector<std::string>* offenders = nullptr) {
    DistillResult again = clean_dataset(result.distilled, cfg);
    bool clean = true;
    for (const auto& outcome : again.outcomes) {
        if (outcome.verdict == CleanVerdict::Kept) continue;
        clean = false;
        if (offenders) offenders->push_back(outcome.pair_id);
    }
    return clean;
}

}  // namespace ccd
