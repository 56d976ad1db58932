#pragma once

// Summarization scoring: cumulative BLEU-1..4 (corpus and smoothed sentence
// modes), ROUGE-L, exact-match METEOR, plain CIDEr (x10 scale, uniform
// n-gram weights), plus the precision/recall/F1 harness for detector
// evaluation against gold labels.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccd/detectors.hpp"

namespace ccd {

using TokenList = std::vector<std::string>;

enum class BleuMode { Corpus, SentenceSmoothed };

struct ScoreReport {
    std::array<double, 4> bleu{};  // cumulative BLEU-1..4
    double rouge_l = 0.0;
    double meteor = 0.0;
    double cider = 0.0;
    BleuMode bleu_mode = BleuMode::SentenceSmoothed;
    std::size_t sentences = 0;
};

namespace metric_detail {

// n-grams as joined strings; '\x1f' cannot occur in word tokens.
inline std::map<std::string, int> ngram_counts(const TokenList& tokens, int n) {
    std::map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int k = 1; k < n; ++k) {
            key += '\x1f';
            key += tokens[i + k];
        }
        counts[key] += 1;
    }
    return counts;
}

inline void require_aligned(const std::vector<TokenList>& hypotheses,
                            const std::vector<TokenList>& references) {
    if (hypotheses.size() != references.size())
        throw std::invalid_argument("hypothesis/reference length mismatch");
    if (hypotheses.empty()) throw std::invalid_argument("empty corpus");
}

inline std::array<double, 4> cumulative_from_precisions(const std::array<double, 4>& p,
                                                        double bp) {
    std::array<double, 4> bleu{};
    for (int k = 1; k <= 4; ++k) {
        double log_sum = 0.0;
        bool zero = false;
        for (int n = 1; n <= k; ++n) {
            if (p[n - 1] <= 0.0) {
                zero = true;
                break;
            }
            log_sum += std::log(p[n - 1]);
        }
        bleu[k - 1] = zero ? 0.0 : bp * std::exp(log_sum / k);
    }
    return bleu;
}

}  // namespace metric_detail

// Cumulative BLEU-1..4. Corpus mode pools clipped n-gram counts over the
// whole corpus and applies one brevity penalty; sentence mode scores each
// sentence with add-one smoothing for n >= 2 and averages.
inline std::array<double, 4> bleu(const std::vector<TokenList>& hypotheses,
                                  const std::vector<TokenList>& references,
                                  int max_n = 4, BleuMode mode = BleuMode::SentenceSmoothed) {
    using namespace metric_detail;
    require_aligned(hypotheses, references);
    if (max_n != 4) throw std::invalid_argument("max_n must be 4");

    if (mode == BleuMode::Corpus) {
        std::array<double, 4> matched{}, total{};
        double hyp_len = 0.0, ref_len = 0.0;
        for (std::size_t s = 0; s < hypotheses.size(); ++s) {
            hyp_len += static_cast<double>(hypotheses[s].size());
            ref_len += static_cast<double>(references[s].size());
            for (int n = 1; n <= 4; ++n) {
                auto hyp_counts = ngram_counts(hypotheses[s], n);
                auto ref_counts = ngram_counts(references[s], n);
                for (const auto& [gram, count] : hyp_counts) {
                    total[n - 1] += count;
                    auto it = ref_counts.find(gram);
                    if (it != ref_counts.end())
                        matched[n - 1] += std::min(count, it->second);
                }
            }
        }
        if (hyp_len == 0.0) return {0.0, 0.0, 0.0, 0.0};
        double bp = std::min(1.0, std::exp(1.0 - ref_len / hyp_len));
        std::array<double, 4> p{};
        for (int n = 0; n < 4; ++n) p[n] = total[n] > 0.0 ? matched[n] / total[n] : 0.0;
        return cumulative_from_precisions(p, bp);
    }

    std::array<double, 4> sum{};
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const TokenList& hyp = hypotheses[s];
        const TokenList& ref = references[s];
        if (hyp.empty()) continue;  // scores 0
        std::array<double, 4> p{};
        for (int n = 1; n <= 4; ++n) {
            auto hyp_counts = ngram_counts(hyp, n);
            auto ref_counts = ngram_counts(ref, n);
            double matched = 0.0, total = 0.0;
            for (const auto& [gram, count] : hyp_counts) {
                total += count;
                auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) matched += std::min(count, it->second);
            }
            if (n == 1)
                p[0] = total > 0.0 ? matched / total : 0.0;
            else
                p[n - 1] = (matched + 1.0) / (total + 1.0);
        }
        double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(ref.size()) /
                                                     static_cast<double>(hyp.size())));
        std::array<double, 4> sentence = cumulative_from_precisions(p, bp);
        for (int k = 0; k < 4; ++k) sum[k] += sentence[k];
    }
    for (int k = 0; k < 4; ++k) sum[k] /= static_cast<double>(hypotheses.size());
    return sum;
}

inline std::size_t lcs_length(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// ROUGE-L F-measure with recall weighted by beta.
inline double rouge_l(const TokenList& hypothesis, const TokenList& reference,
                      double beta = 1.2) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (hypothesis.empty() || reference.empty()) return 0.0;
    double l = static_cast<double>(lcs_length(hypothesis, reference));
    if (l == 0.0) return 0.0;
    double p = l / static_cast<double>(hypothesis.size());
    double r = l / static_cast<double>(reference.size());
    double b2 = beta * beta;
    return (1.0 + b2) * p * r / (r + b2 * p);
}

struct MeteorParams {
    double alpha = 0.9;
    double beta = 3.0;
    double gamma = 0.5;
};

namespace metric_detail {

// Minimal chunk count over all maximum alignments. Exhaustive with
// branch-and-bound; the node budget falls back to the greedy bound, which
// only matters for pathological repeated-token inputs.
class ChunkMinimizer {
public:
    ChunkMinimizer(const TokenList& hyp, const TokenList& ref) : hyp_(hyp) {
        for (std::size_t j = 0; j < ref.size(); ++j) ref_positions_[ref[j]].push_back(j);
        std::map<std::string, int> hyp_counts;
        for (const auto& t : hyp) hyp_counts[t] += 1;
        for (auto& [token, positions] : ref_positions_) {
            auto it = hyp_counts.find(token);
            if (it != hyp_counts.end())
                budget_[token] = std::min<int>(it->second, static_cast<int>(positions.size()));
        }
        for (const auto& [token, b] : budget_) matches_ += b;
        remaining_hyp_ = hyp_counts;
        used_.assign(ref.size(), false);
    }

    int matches() const { return matches_; }

    int min_chunks() {
        if (matches_ == 0) return 0;
        best_ = greedy_chunks();
        search(0, -2, 0);
        return best_;
    }

private:
    // Feasible upper bound: match the earliest occurrences, preferring a ref
    // position that continues the current chunk.
    int greedy_chunks() {
        std::map<std::string, int> budget = budget_;
        std::vector<bool> used(used_.size(), false);
        long prev = -2;
        int chunks = 0;
        for (const auto& token : hyp_) {
            auto it = budget.find(token);
            if (it == budget.end() || it->second == 0) {
                prev = -2;
                continue;
            }
            const auto& positions = ref_positions_[token];
            long chosen = -1;
            if (prev + 1 >= 0 && static_cast<std::size_t>(prev + 1) < used.size() &&
                !used[prev + 1]) {
                for (std::size_t p : positions)
                    if (static_cast<long>(p) == prev + 1) chosen = prev + 1;
            }
            if (chosen < 0) {
                for (std::size_t p : positions)
                    if (!used[p]) {
                        chosen = static_cast<long>(p);
                        break;
                    }
            }
            used[chosen] = true;
            it->second -= 1;
            chunks += (chosen == prev + 1) ? 0 : 1;
            prev = chosen;
        }
        return chunks;
    }

    void search(std::size_t i, long prev_ref, int chunks) {
        if (chunks >= best_) return;
        if (++nodes_ > kNodeBudget) return;
        if (i == hyp_.size()) {
            bool complete = true;
            for (const auto& [token, b] : budget_)
                if (b > 0) complete = false;
            if (complete && chunks < best_) best_ = chunks;
            return;
        }
        const std::string& token = hyp_[i];
        auto budget_it = budget_.find(token);
        remaining_hyp_[token] -= 1;  // position i is consumed either way

        if (budget_it != budget_.end() && budget_it->second > 0) {
            const auto& positions = ref_positions_[token];
            // Prefer continuing the current chunk.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t p : positions) {
                    if (used_[p]) continue;
                    bool continues = static_cast<long>(p) == prev_ref + 1;
                    if ((pass == 0) != continues) continue;
                    used_[p] = true;
                    budget_it->second -= 1;
                    search(i + 1, static_cast<long>(p), chunks + (continues ? 0 : 1));
                    budget_it->second += 1;
                    used_[p] = false;
                }
            }
        }
        // Skipping is allowed only if the budget stays satisfiable.
        int need = budget_it == budget_.end() ? 0 : budget_it->second;
        if (remaining_hyp_[token] >= need) search(i + 1, -2, chunks);
        remaining_hyp_[token] += 1;
    }

    static constexpr std::int64_t kNodeBudget = 2'000'000;
    const TokenList& hyp_;
    std::map<std::string, std::vector<std::size_t>> ref_positions_;
    std::map<std::string, int> budget_;
    std::map<std::string, int> remaining_hyp_;
    std::vector<bool> used_;
    int matches_ = 0;
    int best_ = 0;
    std::int64_t nodes_ = 0;
};

}  // namespace metric_detail

// Exact-match METEOR: harmonic mean of unigram precision and recall with
// recall weighted higher, discounted by a fragmentation penalty.
inline double meteor(const TokenList& hypothesis, const TokenList& reference,
                     const MeteorParams& params = {}) {
    if (hypothesis.empty() || reference.empty()) return 0.0;
    metric_detail::ChunkMinimizer aligner(hypothesis, reference);
    int m = aligner.matches();
    if (m == 0) return 0.0;
    int chunks = aligner.min_chunks();
    double p = static_cast<double>(m) / static_cast<double>(hypothesis.size());
    double r = static_cast<double>(m) / static_cast<double>(reference.size());
    double fmean = p * r / (params.alpha * r + (1.0 - params.alpha) * p);
    double penalty =
        params.gamma * std::pow(static_cast<double>(chunks) / static_cast<double>(m),
                                params.beta);
    return fmean * (1.0 - penalty);
}

struct CiderResult {
    std::vector<double> per_sentence;
    double mean = 0.0;
};

// Plain CIDEr: TF-IDF n-gram vectors (IDF over the reference corpus, df
// floored at 1), cosine per n in 1..4, 10x the uniform mean.
inline CiderResult cider(const std::vector<TokenList>& hypotheses,
                         const std::vector<TokenList>& references) {
    using namespace metric_detail;
    require_aligned(hypotheses, references);
    if (hypotheses.size() < 2)
        throw std::invalid_argument("cider needs a corpus of at least 2 sentences");

    const double corpus_size = static_cast<double>(references.size());
    std::array<std::map<std::string, int>, 4> df;
    for (const auto& ref : references) {
        for (int n = 1; n <= 4; ++n)
            for (const auto& [gram, count] : ngram_counts(ref, n)) df[n - 1][gram] += 1;
    }
    auto idf = [&](int n, const std::string& gram) {
        auto it = df[n - 1].find(gram);
        int d = it == df[n - 1].end() ? 1 : std::max(1, it->second);
        return std::log(corpus_size / static_cast<double>(d));
    };

    CiderResult result;
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        double score = 0.0;
        for (int n = 1; n <= 4; ++n) {
            auto hyp_counts = ngram_counts(hypotheses[s], n);
            auto ref_counts = ngram_counts(references[s], n);
            double dot = 0.0, hyp_norm = 0.0, ref_norm = 0.0;
            for (const auto& [gram, count] : hyp_counts) {
                double w = count * idf(n, gram);
                hyp_norm += w * w;
                auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) dot += w * it->second * idf(n, gram);
            }
            for (const auto& [gram, count] : ref_counts) {
                double w = count * idf(n, gram);
                ref_norm += w * w;
            }
            if (hyp_norm > 0.0 && ref_norm > 0.0)
                score += dot / (std::sqrt(hyp_norm) * std::sqrt(ref_norm));
        }
        result.per_sentence.push_back(10.0 * score / 4.0);
    }
    for (double v : result.per_sentence) result.mean += v;
    result.mean /= static_cast<double>(result.per_sentence.size());
    return result;
}

// Full corpus scoring with one pass over aligned hypothesis/reference lists.
inline ScoreReport score_corpus(const std::vector<TokenList>& hypotheses,
                                const std::vector<TokenList>& references,
                                BleuMode mode = BleuMode::SentenceSmoothed) {
    metric_detail::require_aligned(hypotheses, references);
    ScoreReport report;
    report.bleu_mode = mode;
    report.sentences = hypotheses.size();
    report.bleu = bleu(hypotheses, references, 4, mode);
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        report.rouge_l += rouge_l(hypotheses[s], references[s]);
        report.meteor += meteor(hypotheses[s], references[s]);
    }
    report.rouge_l /= static_cast<double>(hypotheses.size());
    report.meteor /= static_cast<double>(hypotheses.size());
    if (hypotheses.size() >= 2) report.cider = cider(hypotheses, references).mean;
    return report;
}

// --- detector evaluation ------------------------------------------------------

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline PRF make_prf(std::size_t tp, std::size_t fp, std::size_t fn) {
    PRF prf;
    if (tp + fp > 0) prf.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) prf.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (prf.precision + prf.recall > 0.0)
        prf.f1 = 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
    return prf;
}

struct EvalResult {
    std::map<NoiseCategory, PRF> per_category;
    double macro_f1 = 0.0;  // unweighted mean over categories with gold instances
    PRF micro;
};

inline EvalResult evaluate_detectors(
    const std::vector<Diagnosis>& predicted,
    const std::map<std::string, std::set<NoiseCategory>>& gold) {
    std::string missing;
    for (const auto& diagnosis : predicted)
        if (!gold.count(diagnosis.pair_id))
            missing += (missing.empty() ? "" : ", ") + diagnosis.pair_id;
    if (!missing.empty())
        throw std::invalid_argument("predicted ids missing from gold: " + missing);

    std::map<NoiseCategory, std::array<std::size_t, 3>> confusion;  // tp, fp, fn
    for (NoiseCategory c : all_categories()) confusion[c] = {0, 0, 0};
    for (const auto& diagnosis : predicted) {
        const std::set<NoiseCategory>& truth = gold.at(diagnosis.pair_id);
        std::set<NoiseCategory> found;
        for (const auto& label : diagnosis.labels) found.insert(label.category);
        for (NoiseCategory c : all_categories()) {
            bool p = found.count(c) > 0, g = truth.count(c) > 0;
            if (p && g) confusion[c][0] += 1;
            if (p && !g) confusion[c][1] += 1;
            if (!p && g) confusion[c][2] += 1;
        }
    }

    EvalResult result;
    std::size_t tp = 0, fp = 0, fn = 0;
    double f1_sum = 0.0;
    int categories_with_gold = 0;
    for (const auto& [category, cells] : confusion) {
        result.per_category[category] = make_prf(cells[0], cells[1], cells[2]);
        tp += cells[0];
        fp += cells[1];
        fn += cells[2];
        if (cells[0] + cells[2] > 0) {
            f1_sum += result.per_category[category].f1;
            ++categories_with_gold;
        }
    }
    result.micro = make_prf(tp, fp, fn);
    if (categories_with_gold > 0) result.macro_f1 = f1_sum / categories_with_gold;
    return result;
}

}  // namespace ccd
