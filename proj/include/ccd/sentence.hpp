#pragma once

// First-sentence extraction over raw comment blocks, and alignment
// classification between a processed comment and that first sentence.
//
// The extractor walks the comment line by line: a line containing a sentence
// terminator completes the sentence, a section-marker line ("@param",
// "Args:", ...) or a code-looking line terminates it before the line, and
// anything else is accumulated. Benchmarks lowercase and re-tokenize
// comments in different ways, so all comparisons happen on normalized word
// tokens, never on raw strings.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ccd/corpus.hpp"

namespace ccd {

enum class SentenceEnd { Period, SectionMarker, EndOfComment };

struct FirstSentence {
    std::string text;
    int consumed_lines = 0;
    SentenceEnd terminated_by = SentenceEnd::EndOfComment;
};

enum class AlignmentClass { Exact, Partial, Verbose, Unrelated };

struct SentenceOptions {
    // Periods ending these words never terminate a sentence.
    std::vector<std::string> abbreviations = {"e.g.", "i.e.", "etc.", "vs.", "cf."};
    // Words that start a section when followed by ':'.
    std::vector<std::string> section_markers = {"arguments", "args",   "returns",
                                                "params",    "raises", "see"};
};

struct WordToken {
    std::string text;        // lowercased
    std::size_t begin, end;  // byte range in the original string
};

// Lowercase, split on non-alphanumeric runs (ASCII; multibyte sequences act
// as separators), keep byte spans.
inline std::vector<WordToken> normalize_tokens(std::string_view text) {
    std::vector<WordToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (!std::isalnum(c)) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        std::string word;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
            word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
            ++i;
        }
        tokens.push_back(WordToken{std::move(word), begin, i});
    }
    return tokens;
}

inline std::vector<std::string> normalize_for_match(std::string_view text) {
    std::vector<std::string> words;
    for (auto& token : normalize_tokens(text)) words.push_back(std::move(token.text));
    return words;
}

namespace sentence_detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    return true;
}

inline std::string strip_one_line(std::string_view line, Language language) {
    std::string s = trim(line);
    if (language == Language::Java) {
        if (s.size() >= 2 && s.compare(s.size() - 2, 2, "*/") == 0)
            s = trim(std::string_view(s).substr(0, s.size() - 2));
        if (s.starts_with("/**"))
            s = trim(std::string_view(s).substr(3));
        else if (s.starts_with("/*"))
            s = trim(std::string_view(s).substr(2));
        else if (s.starts_with("//"))
            s = trim(std::string_view(s).substr(2));
        else if (s.starts_with("*"))
            s = trim(std::string_view(s).substr(1));
    } else {
        if (s.size() >= 3 && s.compare(s.size() - 3, 3, "\"\"\"") == 0)
            s = trim(std::string_view(s).substr(0, s.size() - 3));
        if (s.size() >= 3 && s.compare(s.size() - 3, 3, "'''") == 0)
            s = trim(std::string_view(s).substr(0, s.size() - 3));
        if (s.starts_with("\"\"\""))
            s = trim(std::string_view(s).substr(3));
        else if (s.starts_with("'''"))
            s = trim(std::string_view(s).substr(3));
        else if (s.starts_with("#"))
            s = trim(std::string_view(s).substr(1));
    }
    return s;
}

// Sentence terminator inside `line`: '.', '!' or '?' followed by a space or
// end of line, skipping abbreviation periods and anything inside `...`
// inline code spans. Returns the index of the terminator or npos.
inline std::size_t find_terminator(const std::string& line, const SentenceOptions& options) {
    bool in_code_span = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '`') {
            in_code_span = !in_code_span;
            continue;
        }
        if (in_code_span) continue;
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 < line.size() && !std::isspace(static_cast<unsigned char>(line[i + 1])))
            continue;
        if (c == '.') {
            std::size_t b = i + 1;
            while (b > 0 && (std::isalnum(static_cast<unsigned char>(line[b - 1])) ||
                             line[b - 1] == '.'))
                --b;
            std::string word = line.substr(b, i + 1 - b);
            for (auto& ch : word)
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            bool is_abbrev = false;
            for (const auto& abbrev : options.abbreviations)
                if (word == abbrev) is_abbrev = true;
            if (is_abbrev) continue;
        }
        return i;
    }
    return std::string::npos;
}

inline bool is_section_marker_line(const std::string& line, const SentenceOptions& options) {
    if (line.size() >= 2 && line[0] == '@' &&
        (std::isalpha(static_cast<unsigned char>(line[1])) || line[1] == '_'))
        return true;
    for (const auto& marker : options.section_markers) {
        if (!starts_with_ci(line, marker)) continue;
        std::size_t i = marker.size();
        while (i < line.size() && line[i] == ' ') ++i;
        if (i < line.size() && line[i] == ':') return true;
    }
    return false;
}

// Commented-out code shows up as raw comment lines; they are not prose and
// must not be folded into the first sentence.
inline bool is_code_like_line(const std::string& line) {
    if (line.empty()) return false;
    char last = line.back();
    return last == '{' || last == '}' || last == ';';
}

}  // namespace sentence_detail

// Removes comment delimiters and per-line decoration, trims every line, and
// drops empty lines at both ends (interior empties stay).
inline std::vector<std::string> strip_comment_delimiters(std::string_view raw,
                                                         Language language) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin <= raw.size()) {
        std::size_t end = raw.find('\n', begin);
        bool last = end == std::string_view::npos;
        lines.push_back(sentence_detail::strip_one_line(
            raw.substr(begin, (last ? raw.size() : end) - begin), language));
        if (last) break;
        begin = end + 1;
    }
    while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

inline FirstSentence extract_first_sentence(std::string_view raw, Language language,
                                            const SentenceOptions& options = {}) {
    using namespace sentence_detail;
    FirstSentence result;
    std::string acc;
    for (const std::string& line : strip_comment_delimiters(raw, language)) {
        if (is_section_marker_line(line, options) || is_code_like_line(line)) {
            result.text = acc;
            result.terminated_by = SentenceEnd::SectionMarker;
            return result;
        }
        std::size_t term = find_terminator(line, options);
        if (term != std::string::npos) {
            std::string piece = trim(std::string_view(line).substr(0, term + 1));
            if (!acc.empty()) acc += ' ';
            acc += piece;
            result.text = acc;
            result.consumed_lines += 1;
            result.terminated_by = SentenceEnd::Period;
            return result;
        }
        if (!line.empty()) {
            if (!acc.empty()) acc += ' ';
            acc += line;
        }
        result.consumed_lines += 1;
    }
    result.text = acc;
    result.terminated_by = SentenceEnd::EndOfComment;
    return result;
}

// Exact iff the normalized token lists match; Partial iff the processed
// comment is a non-empty proper prefix of the first sentence; Verbose for
// the reverse; Unrelated otherwise.
inline AlignmentClass classify_alignment(std::string_view processed,
                                         const FirstSentence& first) {
    std::vector<std::string> p = normalize_for_match(processed);
    std::vector<std::string> f = normalize_for_match(first.text);
    if (p == f) return AlignmentClass::Exact;
    auto is_proper_prefix = [](const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
        if (a.empty() || a.size() >= b.size()) return false;
        return std::equal(a.begin(), a.end(), b.begin());
    };
    if (is_proper_prefix(p, f)) return AlignmentClass::Partial;
    if (is_proper_prefix(f, p)) return AlignmentClass::Verbose;
    return AlignmentClass::Unrelated;
}

}  // namespace ccd
