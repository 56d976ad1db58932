#pragma once

// The twelve noise-category rules: eleven per-pair detectors plus
// corpus-level duplicate detection. Each detector is a pure function of
// (pair, config), emits at most one label, and only ever emits its own
// category. Detectors that can repair a pair attach a proposal; the rest
// prescribe removal.
//
// Several rules have a low-confidence fallback for datasets that ship
// without raw comments. Fallback labels are marked as such and always
// prescribe removal, since there is no reconstruction source.

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ccd/corpus.hpp"
#include "ccd/lexing.hpp"
#include "ccd/sentence.hpp"

namespace ccd {

enum class NoiseCategory {
    PartialSentence,
    VerboseSentence,
    ContentTampering,
    OverSplitting,
    NonLiteral,
    Interrogation,
    UnderDevelopment,
    EmptyFunction,
    CommentedOutMethod,
    BlockCommentCode,
    AutoCode,
    DuplicatedCode,
};

inline constexpr int kCategoryCount = 12;

inline constexpr std::array<NoiseCategory, kCategoryCount> all_categories() {
    return {NoiseCategory::PartialSentence,  NoiseCategory::VerboseSentence,
            NoiseCategory::ContentTampering, NoiseCategory::OverSplitting,
            NoiseCategory::NonLiteral,       NoiseCategory::Interrogation,
            NoiseCategory::UnderDevelopment, NoiseCategory::EmptyFunction,
            NoiseCategory::CommentedOutMethod, NoiseCategory::BlockCommentCode,
            NoiseCategory::AutoCode,         NoiseCategory::DuplicatedCode};
}

inline const char* category_name(NoiseCategory c) {
    switch (c) {
        case NoiseCategory::PartialSentence: return "partial_sentence";
        case NoiseCategory::VerboseSentence: return "verbose_sentence";
        case NoiseCategory::ContentTampering: return "content_tampering";
        case NoiseCategory::OverSplitting: return "over_splitting";
        case NoiseCategory::NonLiteral: return "non_literal";
        case NoiseCategory::Interrogation: return "interrogation";
        case NoiseCategory::UnderDevelopment: return "under_development";
        case NoiseCategory::EmptyFunction: return "empty_function";
        case NoiseCategory::CommentedOutMethod: return "commented_out_method";
        case NoiseCategory::BlockCommentCode: return "block_comment_code";
        case NoiseCategory::AutoCode: return "auto_code";
        default: return "duplicated_code";
    }
}

inline std::optional<NoiseCategory> parse_category(std::string_view name) {
    for (NoiseCategory c : all_categories())
        if (name == category_name(c)) return c;
    return std::nullopt;
}

// First seven categories concern the comment, the last five the code.
inline bool is_comment_side(NoiseCategory c) {
    return static_cast<int>(c) < static_cast<int>(NoiseCategory::EmptyFunction);
}

enum class NoiseAction { Remove, Update };

inline NoiseAction default_action(NoiseCategory c) {
    switch (c) {
        case NoiseCategory::PartialSentence:
        case NoiseCategory::VerboseSentence:
        case NoiseCategory::OverSplitting:
        case NoiseCategory::BlockCommentCode:
            return NoiseAction::Update;
        default:
            return NoiseAction::Remove;
    }
}

struct NoiseLabel {
    NoiseCategory category{};
    NoiseAction action{};
    std::string evidence{};
    std::optional<std::string> proposed_comment{};
    std::optional<std::string> proposed_code{};
    bool fallback = false;
};

struct Diagnosis {
    std::string pair_id{};
    std::vector<NoiseLabel> labels{};     // at most one per category
    std::vector<std::string> warnings{};  // detector failures, never fatal

    bool has(NoiseCategory c) const {
        for (const auto& label : labels)
            if (label.category == c) return true;
        return false;
    }
    const NoiseLabel* find(NoiseCategory c) const {
        for (const auto& label : labels)
            if (label.category == c) return &label;
        return nullptr;
    }
};

struct RuleThresholds {
    int min_split_subtokens = 2;
    int max_auto_stmts = 2;
    std::vector<std::string> underdev_keywords = {
        "todo", "fixme", "xxx", "hack", "wip", "not implemented",
        "work in progress", "under construction", "description of the method",
        "auto-generated method stub", "deprecated"};
    double nonliteral_ratio = 0.0;
    int codey_line_min = 1;
};

struct RuleConfig {
    std::array<bool, kCategoryCount> enabled;
    std::array<std::optional<NoiseAction>, kCategoryCount> action_override;
    RuleThresholds thresholds;
    std::vector<Partition> keep_precedence = {Partition::Train, Partition::Valid,
                                              Partition::Test};
    SentenceOptions sentence;
    // Replacement keyword lists; the built-in per-language sets apply when unset.
    std::optional<std::set<std::string>> java_keywords;
    std::optional<std::set<std::string>> python_keywords;

    RuleConfig() { enabled.fill(true); }

    const std::set<std::string>* keyword_override_for(Language language) const {
        const auto& set = language == Language::Java ? java_keywords : python_keywords;
        return set ? &*set : nullptr;
    }

    bool is_enabled(NoiseCategory c) const { return enabled[static_cast<int>(c)]; }
    void set_enabled(NoiseCategory c, bool on) { enabled[static_cast<int>(c)] = on; }
    void set_action(NoiseCategory c, NoiseAction a) {
        action_override[static_cast<int>(c)] = a;
    }
    NoiseAction action_for(NoiseCategory c) const {
        return action_override[static_cast<int>(c)].value_or(default_action(c));
    }
    int precedence_rank(Partition p) const {
        for (std::size_t i = 0; i < keep_precedence.size(); ++i)
            if (keep_precedence[i] == p) return static_cast<int>(i);
        return static_cast<int>(keep_precedence.size());
    }
};

namespace rule_detail {

using sentence_detail::trim;

inline bool has_raw(const CodeCommentPair& pair) {
    return pair.raw_comment && !trim(*pair.raw_comment).empty();
}

inline std::vector<Token> tokenize_pair_code(const CodeCommentPair& pair,
                                             const RuleConfig& cfg) {
    return tokenize_code(pair.code, pair.language,
                         cfg.keyword_override_for(pair.language));
}

// A comment is "normalized style" when it already equals the space-join of
// its own word tokens (the common benchmark form: lowercased, de-punctuated).
inline bool is_normalized_style(const std::string& comment) {
    std::string joined;
    for (const auto& w : normalize_for_match(comment)) {
        if (!joined.empty()) joined += ' ';
        joined += w;
    }
    return trim(comment) == joined;
}

// Renders replacement text in the pair's comment style.
inline std::string match_comment_style(const std::string& text, const std::string& comment) {
    if (is_normalized_style(comment)) {
        std::string joined;
        for (const auto& w : normalize_for_match(text)) {
            if (!joined.empty()) joined += ' ';
            joined += w;
        }
        return joined;
    }
    return trim(text);
}

// All sentence-terminator positions in `text` (reusing the per-line rules).
inline std::vector<std::size_t> terminator_positions(const std::string& text,
                                                     const SentenceOptions& options) {
    std::vector<std::size_t> positions;
    std::string remaining = text;
    std::size_t base = 0;
    while (true) {
        std::size_t at = sentence_detail::find_terminator(remaining, options);
        if (at == std::string::npos) break;
        positions.push_back(base + at);
        base += at + 1;
        remaining = remaining.substr(at + 1);
    }
    return positions;
}

inline bool all_space_between(const std::string& text, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to && i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i]))) return false;
    return true;
}

// ---- content-tampering scanners -------------------------------------------

struct Match {
    std::size_t begin = std::string::npos;
    std::size_t end = 0;
    bool ok() const { return begin != std::string::npos; }
};

inline Match find_html_tag(const std::string& text, std::size_t from = 0) {
    for (std::size_t i = from; i + 1 < text.size(); ++i) {
        if (text[i] != '<') continue;
        char c = text[i + 1];
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '!' || c == '/')) continue;
        for (std::size_t j = i + 1; j < text.size() && text[j] != '\n' && text[j] != '<'; ++j) {
            if (text[j] == '>') return {i, j + 1};
        }
    }
    return {};
}

inline Match find_inline_tag(const std::string& text, std::size_t from = 0) {
    for (std::size_t i = from; i + 2 < text.size(); ++i) {
        if (text[i] != '{' || text[i + 1] != '@') continue;
        if (!std::isalpha(static_cast<unsigned char>(text[i + 2]))) continue;
        for (std::size_t j = i + 2; j < text.size() && text[j] != '\n'; ++j)
            if (text[j] == '}') return {i, j + 1};
    }
    return {};
}

inline Match find_doc_tag(const std::string& text, std::size_t from = 0) {
    static const std::vector<std::string> kTags = {"@param", "@return", "@throws",
                                                   "@see", "@link"};
    for (std::size_t i = from; i < text.size(); ++i) {
        if (text[i] != '@') continue;
        if (i > 0 && !std::isspace(static_cast<unsigned char>(text[i - 1]))) continue;
        for (const auto& tag : kTags) {
            if (text.compare(i, tag.size(), tag) != 0) continue;
            std::size_t after = i + tag.size();
            if (after < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[after])) || text[after] == '_'))
                continue;
            return {i, after};
        }
    }
    return {};
}

inline Match find_url(const std::string& text, std::size_t from = 0) {
    auto extend = [&](std::size_t start) -> std::size_t {
        std::size_t j = start;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        return j;
    };
    for (std::size_t i = from; i + 6 < text.size(); ++i) {
        if (text.compare(i, 7, "http://") == 0 || text.compare(i, 8, "https://") == 0)
            return {i, extend(i)};
        if (text.compare(i, 4, "www.") == 0 &&
            (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1])))) {
            std::size_t j = i + 4;
            int dots = 0;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '.' || text[j] == '-')) {
                if (text[j] == '.') ++dots;
                ++j;
            }
            if (dots >= 1 && j > i + 5) return {i, j};
        }
    }
    return {};
}

inline Match find_fs_path(const std::string& text, std::size_t from = 0) {
    auto run_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
               c == '/' || c == '-';
    };
    std::size_t i = from;
    while (i < text.size()) {
        if (!run_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && run_char(text[i])) ++i;
        std::string_view run(text.data() + begin, i - begin);

        // One leading '/' marks an absolute path; further empty segments
        // (e.g. the '/' remnants of comment delimiters) disqualify the run.
        std::string_view body = run;
        if (!body.empty() && body.front() == '/') body.remove_prefix(1);

        int slashes = 0;
        bool empty_segment = body.empty();
        std::size_t seg_start = 0;
        for (std::size_t k = 0; k <= body.size(); ++k) {
            if (k == body.size() || body[k] == '/') {
                if (k < body.size()) ++slashes;
                if (k == seg_start) empty_segment = true;
                seg_start = k + 1;
            }
        }
        std::size_t dot = body.rfind('.');
        bool has_ext = dot != std::string_view::npos && dot + 1 < body.size() &&
                       body.size() - dot - 1 <= 5 &&
                       body.find('/', dot) == std::string_view::npos;
        if (slashes >= 2 && !empty_segment && has_ext) return {begin, i};
    }
    return {};
}

inline std::vector<Match> tampering_matches(const std::string& text) {
    std::vector<Match> all;
    for (auto finder : {find_html_tag, find_inline_tag, find_doc_tag, find_url, find_fs_path}) {
        std::size_t from = 0;
        while (true) {
            Match m = finder(text, from);
            if (!m.ok()) break;
            all.push_back(m);
            from = m.end;
        }
    }
    std::sort(all.begin(), all.end(), [](const Match& a, const Match& b) {
        return a.begin < b.begin || (a.begin == b.begin && a.end > b.end);
    });
    return all;
}

// ---- method shape helpers --------------------------------------------------

struct BodyRange {
    std::size_t begin, end;  // token index range, exclusive of delimiters
};

inline std::optional<BodyRange> java_body(const std::vector<Token>& tokens) {
    std::size_t open = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "{") {
            open = i;
            break;
        }
    }
    if (open == tokens.size()) return std::nullopt;
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::Punct) continue;
        if (tokens[i].text == "{") ++depth;
        if (tokens[i].text == "}" && --depth == 0) return BodyRange{open + 1, i};
    }
    return std::nullopt;
}

inline std::optional<BodyRange> python_body(const std::vector<Token>& tokens) {
    std::size_t def_at = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == TokenKind::Keyword && tokens[i].text == "def") {
            def_at = i;
            break;
        }
    }
    if (def_at == tokens.size()) return std::nullopt;
    int depth = 0;
    for (std::size_t i = def_at; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::Punct) continue;
        const std::string& t = tokens[i].text;
        if (t == "(" || t == "[") ++depth;
        if (t == ")" || t == "]") --depth;
        if (t == ":" && depth == 0) return BodyRange{i + 1, tokens.size()};
    }
    return std::nullopt;
}

inline std::optional<BodyRange> method_body(const std::vector<Token>& tokens,
                                            Language language) {
    return language == Language::Java ? java_body(tokens) : python_body(tokens);
}

inline std::optional<std::string> method_name(const std::vector<Token>& tokens,
                                              Language language) {
    if (language == Language::Python) {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
            if (tokens[i].kind == TokenKind::Keyword && tokens[i].text == "def" &&
                tokens[i + 1].kind == TokenKind::Identifier)
                return tokens[i + 1].text;
        return std::nullopt;
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        // Skip annotations, including argument lists.
        if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "@") {
            ++i;
            if (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::Punct &&
                tokens[i + 1].text == "(") {
                int depth = 0;
                for (std::size_t j = i + 1; j < tokens.size(); ++j) {
                    if (tokens[j].text == "(") ++depth;
                    if (tokens[j].text == ")" && --depth == 0) {
                        i = j;
                        break;
                    }
                }
            }
            continue;
        }
        if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "(" && i > 0 &&
            tokens[i - 1].kind == TokenKind::Identifier)
            return tokens[i - 1].text;
        if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "{") break;
    }
    return std::nullopt;
}

// Top-level statements: ';' at body depth for Java, distinct logical lines
// for Python.
inline int body_statement_count(const std::vector<Token>& tokens, BodyRange body,
                                Language language) {
    if (language == Language::Java) {
        int depth = 1, count = 0;
        for (std::size_t i = body.begin; i < body.end; ++i) {
            if (tokens[i].kind != TokenKind::Punct) continue;
            if (tokens[i].text == "{") ++depth;
            if (tokens[i].text == "}") --depth;
            if (tokens[i].text == ";" && depth == 1) ++count;
        }
        return count;
    }
    std::set<int> lines;
    for (std::size_t i = body.begin; i < body.end; ++i)
        if (!tokens[i].is_comment()) lines.insert(tokens[i].line);
    return static_cast<int>(lines.size());
}

inline bool auto_name_pattern(const std::string& name, Language language) {
    if (language == Language::Java) {
        if (name == "toString") return true;
        for (const char* prefix : {"get", "set", "is", "test"}) {
            std::size_t n = std::string_view(prefix).size();
            if (name.size() > n && name.compare(0, n, prefix) == 0) {
                char c = name[n];
                if (std::isupper(static_cast<unsigned char>(c)) ||
                    std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '$')
                    return true;
            }
        }
        return false;
    }
    if (name == "to_string") return true;
    for (const char* prefix : {"get_", "set_", "is_", "test_"}) {
        std::size_t n = std::string_view(prefix).size();
        if (name.size() > n && name.compare(0, n, prefix) == 0) return true;
    }
    return false;
}

// ---- commented-out code helpers --------------------------------------------

inline bool java_signature_line(const std::string& line) {
    static const std::set<std::string> kStatementWords = {
        "return", "if", "while", "for", "switch", "catch", "new",
        "throw",  "else", "do", "case", "assert", "try"};
    std::size_t paren = line.find('(');
    if (paren == std::string::npos) return false;

    std::vector<std::string> words;
    std::string current;
    for (std::size_t i = 0; i < paren; ++i) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) words.push_back(std::move(current)), current.clear();
            continue;
        }
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
                  c == '<' || c == '>' || c == '[' || c == ']' || c == ',' || c == '.';
        if (!ok) return false;
        current.push_back(c);
    }
    if (!current.empty()) words.push_back(std::move(current));
    if (words.size() < 2) return false;
    if (kStatementWords.count(words.front())) return false;
    const std::string& name = words.back();
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_' || name[0] == '$'))
        return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;

    std::size_t close = line.find(')', paren);
    if (close == std::string::npos) return false;
    std::string rest = trim(std::string_view(line).substr(close + 1));
    if (rest.empty()) return false;
    return rest.back() == '{' || rest.back() == ';';
}

inline bool python_signature_line(const std::string& line) {
    std::string s = trim(line);
    if (!(s.starts_with("def ") || s.starts_with("def\t"))) return false;
    std::size_t i = 4;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        return false;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i < s.size() && s[i] == '(';
}

}  // namespace rule_detail

// Rejoins identifier subtoken runs found in `comment` back to their original
// identifier names, longest split first. Returns the rewritten comment, or
// nothing when no run matches. A run covering the whole comment is left
// alone -- collapsing an entire summary into one identifier is never a fix.
// `evidence_out`, when given, receives the first matched span and its
// identifier.
inline std::optional<std::string> rejoin_split_identifiers(
    const std::string& comment, const std::vector<Identifier>& identifiers,
    const RuleConfig& cfg, std::string* evidence_out = nullptr) {
    std::vector<WordToken> words = normalize_tokens(comment);
    if (words.empty()) return std::nullopt;
    std::set<std::string> word_set;
    for (const auto& w : words) word_set.insert(w.text);

    std::vector<const Identifier*> candidates;
    for (const auto& ident : identifiers) {
        if (static_cast<int>(ident.subtokens.size()) < cfg.thresholds.min_split_subtokens)
            continue;
        if (ident.subtokens.size() < 2) continue;
        std::string lowered;
        for (char c : ident.name)
            lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (word_set.count(lowered)) continue;
        candidates.push_back(&ident);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Identifier* a, const Identifier* b) {
                  if (a->subtokens.size() != b->subtokens.size())
                      return a->subtokens.size() > b->subtokens.size();
                  if (a->name.size() != b->name.size()) return a->name.size() > b->name.size();
                  return a->name < b->name;
              });

    struct Replacement {
        std::size_t word_begin, word_end;  // token index range
        const Identifier* ident;
    };
    std::vector<Replacement> replacements;
    std::vector<bool> claimed(words.size(), false);
    for (const Identifier* ident : candidates) {
        const auto& parts = ident->subtokens;
        if (parts.size() > words.size()) continue;
        for (std::size_t i = 0; i + parts.size() <= words.size(); ++i) {
            if (parts.size() == words.size()) break;  // whole-comment run
            bool match = true;
            for (std::size_t k = 0; k < parts.size() && match; ++k)
                match = !claimed[i + k] && words[i + k].text == parts[k];
            if (!match) continue;
            for (std::size_t k = 0; k < parts.size(); ++k) claimed[i + k] = true;
            replacements.push_back({i, i + parts.size(), ident});
            i += parts.size() - 1;
        }
    }
    if (replacements.empty()) return std::nullopt;

    std::sort(replacements.begin(), replacements.end(),
              [](const Replacement& a, const Replacement& b) {
                  return a.word_begin > b.word_begin;
              });
    if (evidence_out) {
        const Replacement& first = replacements.back();  // leftmost in the comment
        std::size_t begin = words[first.word_begin].begin;
        std::size_t end = words[first.word_end - 1].end;
        *evidence_out = "'" + comment.substr(begin, end - begin) + "' -> '" +
                        first.ident->name + "'";
    }
    std::string out = comment;
    for (const auto& rep : replacements) {
        std::size_t char_begin = words[rep.word_begin].begin;
        std::size_t char_end = words[rep.word_end - 1].end;
        out.replace(char_begin, char_end - char_begin, rep.ident->name);
    }
    return out;
}

// --- the eleven per-pair detectors ------------------------------------------

inline std::optional<NoiseLabel> detect_partial_sentence(const CodeCommentPair& pair,
                                                         const RuleConfig& cfg) {
    using namespace rule_detail;
    if (has_raw(pair)) {
        FirstSentence first =
            extract_first_sentence(*pair.raw_comment, pair.language, cfg.sentence);
        if (classify_alignment(pair.comment, first) != AlignmentClass::Partial)
            return std::nullopt;
        NoiseLabel label{NoiseCategory::PartialSentence,
                         cfg.action_for(NoiseCategory::PartialSentence),
                         "first sentence: " + first.text};
        if (label.action == NoiseAction::Update)
            label.proposed_comment = match_comment_style(first.text, pair.comment);
        return label;
    }
    static const std::set<std::string> kDangling = {"and", "or", "the", "a",  "an", "of",
                                                    "to",  "with", "for", "at", "in", "on",
                                                    "by"};
    std::vector<std::string> tokens = normalize_for_match(pair.comment);
    if (tokens.empty() || !kDangling.count(tokens.back())) return std::nullopt;
    std::string trimmed = trim(pair.comment);
    if (!trimmed.empty() &&
        (trimmed.back() == '.' || trimmed.back() == '!' || trimmed.back() == '?'))
        return std::nullopt;
    return NoiseLabel{NoiseCategory::PartialSentence, NoiseAction::Remove,
                      "fallback: dangling '" + tokens.back() + "'", std::nullopt,
                      std::nullopt, true};
}

inline std::optional<NoiseLabel> detect_verbose_sentence(const CodeCommentPair& pair,
                                                         const RuleConfig& cfg) {
    using namespace rule_detail;
    if (has_raw(pair)) {
        FirstSentence first =
            extract_first_sentence(*pair.raw_comment, pair.language, cfg.sentence);
        if (classify_alignment(pair.comment, first) != AlignmentClass::Verbose)
            return std::nullopt;
        NoiseLabel label{NoiseCategory::VerboseSentence,
                         cfg.action_for(NoiseCategory::VerboseSentence),
                         "first sentence: " + first.text};
        if (label.action == NoiseAction::Update)
            label.proposed_comment = match_comment_style(first.text, pair.comment);
        return label;
    }

    const std::string comment = trim(pair.comment);
    std::vector<WordToken> words = normalize_tokens(comment);
    std::vector<std::size_t> terminators = terminator_positions(comment, cfg.sentence);

    std::size_t first_term = terminators.empty() ? std::string::npos : terminators.front();
    int tokens_after_term = 0;
    if (first_term != std::string::npos)
        for (const auto& w : words)
            if (w.begin > first_term) ++tokens_after_term;

    std::size_t marker_pos = std::string::npos;
    for (const auto& w : words) {
        bool is_marker = false;
        for (const auto& marker : cfg.sentence.section_markers)
            if (w.text == marker) is_marker = true;
        if (!is_marker) continue;
        std::size_t i = w.end;
        while (i < comment.size() && comment[i] == ' ') ++i;
        bool with_colon = i < comment.size() && comment[i] == ':';
        bool after_terminator = false;
        for (std::size_t t : terminators)
            if (t < w.begin && all_space_between(comment, t + 1, w.begin)) after_terminator = true;
        if (with_colon || after_terminator) {
            marker_pos = w.begin;
            break;
        }
    }

    bool by_terminator = first_term != std::string::npos && tokens_after_term >= 3;
    if (!by_terminator && marker_pos == std::string::npos) return std::nullopt;

    std::string prefix;
    if (first_term != std::string::npos &&
        (marker_pos == std::string::npos || first_term < marker_pos))
        prefix = trim(std::string_view(comment).substr(0, first_term + 1));
    else
        prefix = trim(std::string_view(comment).substr(0, marker_pos));

    NoiseLabel label{NoiseCategory::VerboseSentence,
                     cfg.action_for(NoiseCategory::VerboseSentence),
                     "fallback: trailing content past sentence end", std::nullopt,
                     std::nullopt, true};
    if (label.action == NoiseAction::Update && !prefix.empty() && prefix != comment)
        label.proposed_comment = prefix;
    else
        label.action = NoiseAction::Remove;
    return label;
}

inline std::optional<NoiseLabel> detect_content_tampering(const CodeCommentPair& pair,
                                                          const RuleConfig& cfg) {
    using namespace rule_detail;
    NoiseAction action = cfg.action_for(NoiseCategory::ContentTampering);

    auto lexicon_hit = [&]() -> bool {
        static const std::set<std::string> kWeb = {"http", "https", "www",  "com", "org",
                                                   "net",  "html",  "href", "edu", "gov",
                                                   "io",   "ftp"};
        static const std::set<std::string> kScheme = {"http", "https", "www", "ftp"};
        static const std::set<std::string> kHost = {"com", "org", "net", "html",
                                                    "edu", "gov", "io"};
        std::vector<std::string> tokens = normalize_for_match(pair.comment);
        int run = 0;
        for (const auto& t : tokens) {
            run = kWeb.count(t) ? run + 1 : 0;
            if (run >= 3) return true;
        }
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!kScheme.count(tokens[i])) continue;
            for (std::size_t j = i + 1; j < tokens.size() && j <= i + 6; ++j)
                if (kHost.count(tokens[j])) return true;
        }
        return false;
    };

    if (action == NoiseAction::Update) {
        // Update mode only repairs what is visible in the comment itself.
        std::vector<Match> matches = tampering_matches(pair.comment);
        if (!matches.empty()) {
            std::string stripped;
            std::size_t at = 0;
            for (const auto& m : matches) {
                if (m.begin < at) continue;
                stripped += pair.comment.substr(at, m.begin - at);
                at = m.end;
            }
            stripped += pair.comment.substr(at);
            // collapse runs of spaces left behind
            std::string collapsed;
            for (char c : stripped) {
                if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
                collapsed += c;
            }
            collapsed = trim(collapsed);
            std::string evidence =
                pair.comment.substr(matches[0].begin, matches[0].end - matches[0].begin);
            if (!collapsed.empty() && collapsed != trim(pair.comment))
                return NoiseLabel{NoiseCategory::ContentTampering, NoiseAction::Update,
                                  evidence, collapsed};
            return NoiseLabel{NoiseCategory::ContentTampering, NoiseAction::Remove,
                              evidence};
        }
        if (lexicon_hit())
            return NoiseLabel{NoiseCategory::ContentTampering, NoiseAction::Remove,
                              "fallback: tokenized url", std::nullopt, std::nullopt, true};
        return std::nullopt;
    }

    for (const std::string* text : {pair.raw_comment ? &*pair.raw_comment : nullptr,
                                    &pair.comment}) {
        if (!text) continue;
        std::vector<Match> matches = tampering_matches(*text);
        if (!matches.empty())
            return NoiseLabel{NoiseCategory::ContentTampering, NoiseAction::Remove,
                              text->substr(matches[0].begin,
                                           matches[0].end - matches[0].begin)};
    }
    if (lexicon_hit())
        return NoiseLabel{NoiseCategory::ContentTampering, NoiseAction::Remove,
                          "fallback: tokenized url", std::nullopt, std::nullopt, true};
    return std::nullopt;
}

inline std::optional<NoiseLabel> detect_over_splitting(const CodeCommentPair& pair,
                                                       const RuleConfig& cfg) {
    std::vector<Identifier> identifiers =
        extract_identifiers(rule_detail::tokenize_pair_code(pair, cfg));
    std::string evidence;
    std::optional<std::string> rejoined =
        rejoin_split_identifiers(pair.comment, identifiers, cfg, &evidence);
    if (!rejoined) return std::nullopt;
    NoiseLabel label{NoiseCategory::OverSplitting,
                     cfg.action_for(NoiseCategory::OverSplitting), evidence};
    if (label.action == NoiseAction::Update) label.proposed_comment = *rejoined;
    return label;
}

inline std::optional<NoiseLabel> detect_non_literal(const CodeCommentPair& pair,
                                                    const RuleConfig& cfg) {
    using namespace rule_detail;
    const std::string& text = has_raw(pair) ? *pair.raw_comment : pair.comment;

    auto is_wide_punct = [](unsigned cp) {
        return (cp >= 0x2000 && cp <= 0x206F) ||  // general punctuation
               (cp >= 0x3000 && cp <= 0x303F) ||  // CJK symbols and punctuation
               (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
               (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
    };

    long latin = 0, non_latin = 0;
    std::string first_foreign;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (std::isalpha(c)) ++latin;
            ++i;
            continue;
        }
        unsigned cp = 0;
        int len = 1;
        if ((c & 0xE0) == 0xC0 && i + 1 < text.size()) {
            cp = (c & 0x1Fu) << 6 | (text[i + 1] & 0x3Fu);
            len = 2;
        } else if ((c & 0xF0) == 0xE0 && i + 2 < text.size()) {
            cp = (c & 0x0Fu) << 12 | (text[i + 1] & 0x3Fu) << 6 | (text[i + 2] & 0x3Fu);
            len = 3;
        } else if ((c & 0xF8) == 0xF0 && i + 3 < text.size()) {
            cp = (c & 0x07u) << 18 | (text[i + 1] & 0x3Fu) << 12 |
                 (text[i + 2] & 0x3Fu) << 6 | (text[i + 3] & 0x3Fu);
            len = 4;
        } else {
            cp = 0xFFFD;  // stray byte, count as foreign
        }
        if (!is_wide_punct(cp)) {
            ++non_latin;
            if (first_foreign.size() < 12) first_foreign += text.substr(i, len);
        }
        i += len;
    }
    long letters = latin + non_latin;
    if (letters == 0 || non_latin == 0) return std::nullopt;
    double fraction = static_cast<double>(non_latin) / static_cast<double>(letters);
    if (fraction <= cfg.thresholds.nonliteral_ratio) return std::nullopt;
    return NoiseLabel{NoiseCategory::NonLiteral, cfg.action_for(NoiseCategory::NonLiteral),
                      "non-latin text: " + first_foreign};
}

inline std::optional<NoiseLabel> detect_interrogation(const CodeCommentPair& pair,
                                                      const RuleConfig& cfg) {
    using namespace rule_detail;
    static const std::set<std::string> kQuestionWords = {
        "do",  "does", "did", "is",  "are",  "was",   "were", "can",  "could",
        "should", "would", "will", "what", "why", "how", "where", "when", "who", "which"};
    // Pronouns only: "do the work" is an imperative, not a question.
    static const std::set<std::string> kPronouns = {"we", "i", "you", "it", "this", "that"};
    std::string trimmed = trim(pair.comment);
    if (!trimmed.empty() && trimmed.back() == '?')
        return NoiseLabel{NoiseCategory::Interrogation,
                          cfg.action_for(NoiseCategory::Interrogation), "ends with '?'"};
    std::vector<std::string> tokens = normalize_for_match(pair.comment);
    if (tokens.size() >= 2 && kQuestionWords.count(tokens[0]) && kPronouns.count(tokens[1]))
        return NoiseLabel{NoiseCategory::Interrogation,
                          cfg.action_for(NoiseCategory::Interrogation),
                          "question opening: '" + tokens[0] + " " + tokens[1] + "'"};
    return std::nullopt;
}

inline std::optional<NoiseLabel> detect_under_development(const CodeCommentPair& pair,
                                                          const RuleConfig& cfg) {
    std::vector<std::string> tokens = normalize_for_match(pair.comment);
    for (const auto& keyword : cfg.thresholds.underdev_keywords) {
        std::vector<std::string> pattern = normalize_for_match(keyword);
        if (pattern.empty() || pattern.size() > tokens.size()) continue;
        for (std::size_t i = 0; i + pattern.size() <= tokens.size(); ++i) {
            if (std::equal(pattern.begin(), pattern.end(), tokens.begin() + i))
                return NoiseLabel{NoiseCategory::UnderDevelopment,
                                  cfg.action_for(NoiseCategory::UnderDevelopment),
                                  "keyword: " + keyword};
        }
    }
    return std::nullopt;
}

inline std::optional<NoiseLabel> detect_empty_function(const CodeCommentPair& pair,
                                                       const RuleConfig& cfg) {
    using namespace rule_detail;
    std::vector<Token> tokens = tokenize_pair_code(pair, cfg);
    std::optional<BodyRange> body = method_body(tokens, pair.language);
    if (!body) throw std::runtime_error("cannot locate method body");

    bool empty = true, trivial = true;
    for (std::size_t i = body->begin; i < body->end; ++i) {
        const Token& t = tokens[i];
        if (t.is_comment()) continue;
        empty = false;
        if (pair.language == Language::Java) {
            if (!(t.kind == TokenKind::Punct && t.text == ";")) trivial = false;
        } else {
            bool ok = (t.kind == TokenKind::Keyword && t.text == "pass") ||
                      t.kind == TokenKind::StringLit ||
                      (t.kind == TokenKind::Punct && t.text == ".");
            if (!ok) trivial = false;
        }
    }
    if (!empty && !trivial) return std::nullopt;
    return NoiseLabel{NoiseCategory::EmptyFunction,
                      cfg.action_for(NoiseCategory::EmptyFunction),
                      empty ? "empty body" : "no-op body"};
}

inline std::optional<NoiseLabel> detect_commented_out_method(const CodeCommentPair& pair,
                                                             const RuleConfig& cfg) {
    using namespace rule_detail;
    std::vector<std::string> lines;
    if (has_raw(pair)) {
        lines = strip_comment_delimiters(*pair.raw_comment, pair.language);
    } else {
        std::size_t begin = 0;
        const std::string& c = pair.comment;
        while (begin <= c.size()) {
            std::size_t end = c.find('\n', begin);
            bool last = end == std::string::npos;
            lines.push_back(trim(
                std::string_view(c).substr(begin, (last ? c.size() : end) - begin)));
            if (last) break;
            begin = end + 1;
        }
    }

    int codey = 0;
    for (const auto& line : lines) {
        if (line.empty()) continue;
        bool signature = pair.language == Language::Java ? java_signature_line(line)
                                                         : python_signature_line(line);
        if (signature)
            return NoiseLabel{NoiseCategory::CommentedOutMethod,
                              cfg.action_for(NoiseCategory::CommentedOutMethod),
                              "signature line: " + line};
        char last = line.back();
        if (last == ';' || last == '{' || last == '}') ++codey;
    }
    if (codey >= cfg.thresholds.codey_line_min + 1)
        return NoiseLabel{NoiseCategory::CommentedOutMethod,
                          cfg.action_for(NoiseCategory::CommentedOutMethod),
                          std::to_string(codey) + " code-like lines"};
    return std::nullopt;
}

inline std::optional<NoiseLabel> detect_block_comment_code(const CodeCommentPair& pair,
                                                           const RuleConfig& cfg) {
    using namespace rule_detail;
    std::vector<Token> tokens = tokenize_pair_code(pair, cfg);
    std::optional<BodyRange> body = method_body(tokens, pair.language);
    std::size_t from = body ? body->begin : 0;
    std::size_t to = body ? body->end : tokens.size();
    const Token* hit = nullptr;
    for (std::size_t i = from; i < to && !hit; ++i)
        if (tokens[i].is_comment()) hit = &tokens[i];
    if (!hit) return std::nullopt;
    NoiseLabel label{NoiseCategory::BlockCommentCode,
                     cfg.action_for(NoiseCategory::BlockCommentCode),
                     "in-body comment: " + hit->text};
    if (label.action == NoiseAction::Update)
        label.proposed_code = strip_block_comments(pair.code, pair.language).first;
    return label;
}

inline std::optional<NoiseLabel> detect_auto_code(const CodeCommentPair& pair,
                                                  const RuleConfig& cfg) {
    using namespace rule_detail;
    std::vector<Token> tokens = tokenize_pair_code(pair, cfg);
    std::optional<std::string> name = method_name(tokens, pair.language);
    if (!name || !auto_name_pattern(*name, pair.language)) return std::nullopt;

    std::optional<BodyRange> body = method_body(tokens, pair.language);
    if (!body) return std::nullopt;
    int stmts = body_statement_count(tokens, *body, pair.language);

    static const std::set<std::string> kStopwords = {"the", "a", "an", "this", "method"};
    std::vector<std::string> comment_tokens;
    for (auto& t : normalize_for_match(pair.comment))
        if (!kStopwords.count(t)) comment_tokens.push_back(std::move(t));
    bool name_like_comment = comment_tokens == split_identifier(*name);

    bool tiny = stmts <= 1;
    bool small_and_similar = stmts <= cfg.thresholds.max_auto_stmts && name_like_comment;
    if (!tiny && !small_and_similar) return std::nullopt;
    return NoiseLabel{NoiseCategory::AutoCode, cfg.action_for(NoiseCategory::AutoCode),
                      tiny ? "auxiliary method '" + *name + "' with trivial body"
                           : "comment repeats method name '" + *name + "'"};
}

// --- corpus-level duplicate detection ----------------------------------------

struct PairWarning {
    std::string pair_id;
    std::string message;
};

struct DuplicateGroups {
    // normalize_code key -> pair ids ordered by (keep precedence, input index);
    // the head of each list is the keeper.
    std::map<std::string, std::vector<std::string>> groups;
    std::vector<PairWarning> warnings;
};

inline DuplicateGroups find_duplicates(const Dataset& dataset, const RuleConfig& cfg) {
    struct Member {
        int rank;
        std::size_t index;
        const std::string* id;
    };
    std::map<std::string, std::vector<Member>> buckets;
    DuplicateGroups result;
    for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
        const auto& pair = dataset.pairs[i];
        std::string key;
        try {
            key = normalize_code(pair.code, pair.language);
        } catch (const std::exception& e) {
            result.warnings.push_back({pair.id, e.what()});
            continue;
        }
        buckets[key].push_back({cfg.precedence_rank(pair.partition), i, &pair.id});
    }
    for (auto& [key, members] : buckets) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
            return a.rank != b.rank ? a.rank < b.rank : a.index < b.index;
        });
        std::vector<std::string> ids;
        for (const auto& m : members) ids.push_back(*m.id);
        result.groups.emplace(key, std::move(ids));
    }
    return result;
}

// Runs every enabled per-pair detector. Detector failures become warnings
// and never abort the remaining rules.
inline Diagnosis diagnose(const CodeCommentPair& pair, const RuleConfig& cfg) {
    using Detector = std::optional<NoiseLabel> (*)(const CodeCommentPair&, const RuleConfig&);
    static constexpr std::array<std::pair<NoiseCategory, Detector>, 11> kDetectors = {{
        {NoiseCategory::PartialSentence, detect_partial_sentence},
        {NoiseCategory::VerboseSentence, detect_verbose_sentence},
        {NoiseCategory::ContentTampering, detect_content_tampering},
        {NoiseCategory::OverSplitting, detect_over_splitting},
        {NoiseCategory::NonLiteral, detect_non_literal},
        {NoiseCategory::Interrogation, detect_interrogation},
        {NoiseCategory::UnderDevelopment, detect_under_development},
        {NoiseCategory::EmptyFunction, detect_empty_function},
        {NoiseCategory::CommentedOutMethod, detect_commented_out_method},
        {NoiseCategory::BlockCommentCode, detect_block_comment_code},
        {NoiseCategory::AutoCode, detect_auto_code},
    }};
    Diagnosis diagnosis{pair.id};
    for (const auto& [category, detector] : kDetectors) {
        if (!cfg.is_enabled(category)) continue;
        try {
            if (auto label = detector(pair, cfg)) diagnosis.labels.push_back(std::move(*label));
        } catch (const std::exception& e) {
            diagnosis.warnings.push_back(std::string(category_name(category)) + ": " +
                                         e.what());
        }
    }
    return diagnosis;
}

namespace rule_detail {

// Index-stable parallel map; results keyed by index, so output never depends
// on the worker count.
template <typename Fn>
void parallel_index_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    };
    std::vector<std::thread> threads;
    int n = std::min<int>(jobs, static_cast<int>(count));
    threads.reserve(n);
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

}  // namespace rule_detail

// Appends a DuplicatedCode label to every non-keeper duplicate. `diagnoses`
// must be index-aligned with `dataset.pairs`.
inline void append_duplicate_labels(const Dataset& dataset, const RuleConfig& cfg,
                                    std::vector<Diagnosis>& diagnoses) {
    if (!cfg.is_enabled(NoiseCategory::DuplicatedCode)) return;
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < dataset.pairs.size(); ++i)
        index_of[dataset.pairs[i].id] = i;
    DuplicateGroups dups = find_duplicates(dataset, cfg);
    for (const auto& [key, ids] : dups.groups) {
        for (std::size_t k = 1; k < ids.size(); ++k) {
            auto it = index_of.find(ids[k]);
            if (it == index_of.end()) continue;
            diagnoses[it->second].labels.push_back(
                NoiseLabel{NoiseCategory::DuplicatedCode,
                           cfg.action_for(NoiseCategory::DuplicatedCode),
                           "duplicate of " + ids[0]});
        }
    }
    for (const auto& warning : dups.warnings) {
        auto it = index_of.find(warning.pair_id);
        if (it != index_of.end())
            diagnoses[it->second].warnings.push_back("duplicated_code: " + warning.message);
    }
}

// Diagnoses every pair and folds in corpus-level duplicate labels. This is
// the read-only labeling pass behind quality assessment and detector
// evaluation.
inline std::vector<Diagnosis> label_dataset(const Dataset& dataset, const RuleConfig& cfg,
                                            int jobs = 1) {
    std::vector<Diagnosis> diagnoses(dataset.pairs.size());
    rule_detail::parallel_index_for(dataset.pairs.size(), jobs, [&](std::size_t i) {
        diagnoses[i] = diagnose(dataset.pairs[i], cfg);
    });
    append_duplicate_labels(dataset, cfg, diagnoses);
    return diagnoses;
}

}  // namespace ccd
