#pragma once

// Lightweight language-aware tokenization of method-level source.
//
// This is deliberately a lexer, not a parser: every downstream rule needs
// only token streams (comments, strings, identifiers, punctuation). Java
// recognizes //, /* */, "..." and '...'; Python recognizes #, triple-quoted
// and single-quoted strings. Comment and string contents are never
// re-tokenized.

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccd/corpus.hpp"

namespace ccd {

enum class TokenKind { Identifier, Keyword, LineComment, BlockComment, StringLit, Number, Punct };

struct Token {
    TokenKind kind;
    std::string text;
    int line = 1;            // 1-based
    int col = 1;             // 1-based
    std::size_t begin = 0;   // byte offset into the source
    std::size_t end = 0;

    bool is_comment() const {
        return kind == TokenKind::LineComment || kind == TokenKind::BlockComment;
    }
};

struct Identifier {
    std::string name;
    std::vector<std::string> subtokens;  // lowercased split parts
};

class LexError : public std::runtime_error {
public:
    LexError(int line, int col, const std::string& what)
        : std::runtime_error("lex error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + what),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

inline const std::set<std::string>& java_keywords() {
    static const std::set<std::string> kw = {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
        "class", "const", "continue", "default", "do", "double", "else", "enum",
        "extends", "final", "finally", "float", "for", "goto", "if", "implements",
        "import", "instanceof", "int", "interface", "long", "native", "new",
        "package", "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while", "true", "false", "null",
        "var", "record", "sealed", "permits", "yield"};
    return kw;
}

inline const std::set<std::string>& python_keywords() {
    static const std::set<std::string> kw = {
        "False", "None", "True", "and", "as", "assert", "async", "await", "break",
        "class", "continue", "def", "del", "elif", "else", "except", "finally",
        "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
        "not", "or", "pass", "raise", "return", "try", "while", "with", "yield"};
    return kw;
}

inline const std::set<std::string>& keywords_for(Language language) {
    return language == Language::Java ? java_keywords() : python_keywords();
}

namespace lex_detail {

struct Cursor {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= src.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const { return src.substr(pos).starts_with(s); }
    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    }
};

inline bool ident_start(char c, Language lang) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           (lang == Language::Java && c == '$');
}

inline bool ident_cont(char c, Language lang) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           (lang == Language::Java && c == '$');
}

// Consumes a quote-delimited literal. `delim` is the full delimiter ("\"",
// "'", "\"\"\"", or "'''"). Single-char delimiters do not cross newlines.
inline void consume_string(Cursor& cur, std::string_view delim) {
    int start_line = cur.line, start_col = cur.col;
    bool multiline = delim.size() == 3;
    cur.advance(delim.size());
    while (!cur.done()) {
        if (cur.peek() == '\\') {
            cur.advance(2);
            continue;
        }
        if (!multiline && cur.peek() == '\n')
            throw LexError(start_line, start_col, "unterminated string literal");
        if (cur.starts_with(delim)) {
            cur.advance(delim.size());
            return;
        }
        cur.advance();
    }
    throw LexError(start_line, start_col, "unterminated string literal");
}

}  // namespace lex_detail

// Tokenizes `source`; every character is covered by exactly one token or by
// whitespace. Throws LexError on unterminated block comments and strings.
inline std::vector<Token> tokenize_code(std::string_view source, Language language,
                                        const std::set<std::string>* keyword_override = nullptr) {
    using namespace lex_detail;
    const std::set<std::string>& keywords =
        keyword_override ? *keyword_override : keywords_for(language);
    std::vector<Token> tokens;
    Cursor cur{source};

    auto emit = [&](TokenKind kind, std::size_t begin, int line, int col) {
        tokens.push_back(Token{kind, std::string(source.substr(begin, cur.pos - begin)),
                               line, col, begin, cur.pos});
    };

    while (!cur.done()) {
        char c = cur.peek();
        if (std::isspace(static_cast<unsigned char>(c))) {
            cur.advance();
            continue;
        }
        std::size_t begin = cur.pos;
        int line = cur.line, col = cur.col;

        if (language == Language::Java && cur.starts_with("//")) {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            emit(TokenKind::LineComment, begin, line, col);
            continue;
        }
        if (language == Language::Java && cur.starts_with("/*")) {
            cur.advance(2);
            while (!cur.done() && !cur.starts_with("*/")) cur.advance();
            if (cur.done()) throw LexError(line, col, "unterminated block comment");
            cur.advance(2);
            emit(TokenKind::BlockComment, begin, line, col);
            continue;
        }
        if (language == Language::Python && c == '#') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            emit(TokenKind::LineComment, begin, line, col);
            continue;
        }
        if (language == Language::Python && (cur.starts_with("\"\"\"") || cur.starts_with("'''"))) {
            consume_string(cur, cur.starts_with("\"\"\"") ? "\"\"\"" : "'''");
            emit(TokenKind::StringLit, begin, line, col);
            continue;
        }
        if (c == '"' || c == '\'') {
            consume_string(cur, std::string_view(&source[cur.pos], 1));
            emit(TokenKind::StringLit, begin, line, col);
            continue;
        }
        if (ident_start(c, language)) {
            while (!cur.done() && ident_cont(cur.peek(), language)) cur.advance();
            std::string text(source.substr(begin, cur.pos - begin));
            TokenKind kind =
                keywords.count(text) ? TokenKind::Keyword : TokenKind::Identifier;
            tokens.push_back(Token{kind, std::move(text), line, col, begin, cur.pos});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) ||
                                   cur.peek() == '.' || cur.peek() == '_'))
                cur.advance();
            emit(TokenKind::Number, begin, line, col);
            continue;
        }
        cur.advance();
        emit(TokenKind::Punct, begin, line, col);
    }
    return tokens;
}

// Splits an identifier at '_'/'$', lower->Upper, acronym (Upper-run followed
// by lower) and letter<->digit boundaries. Parts come back lowercased:
// "jTextField" -> {j, text, field}, "parseHTTP2Frame" -> {parse, http, 2, frame}.
inline std::vector<std::string> split_identifier(std::string_view name) {
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            parts.push_back(current);
            current.clear();
        }
    };
    auto kind_of = [](char c) -> int {
        if (std::isdigit(static_cast<unsigned char>(c))) return 2;
        if (std::isalpha(static_cast<unsigned char>(c)))
            return std::isupper(static_cast<unsigned char>(c)) ? 1 : 0;
        return 3;  // separator or other
    };
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        int kind = kind_of(c);
        if (kind == 3) {
            flush();
            continue;
        }
        if (!current.empty()) {
            char prev = name[i - 1];
            int prev_kind = kind_of(prev);
            bool boundary =
                (prev_kind == 0 && kind == 1) ||                      // lower -> Upper
                (prev_kind != 2 && kind == 2) ||                      // letter -> digit
                (prev_kind == 2 && kind != 2) ||                      // digit -> letter
                (prev_kind == 1 && kind == 1 && i + 1 < name.size() &&
                 kind_of(name[i + 1]) == 0);                          // acronym tail
            if (boundary) flush();
        }
        current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    flush();
    return parts;
}

// One Identifier per distinct identifier token text, first-seen order.
inline std::vector<Identifier> extract_identifiers(const std::vector<Token>& tokens) {
    std::vector<Identifier> out;
    std::set<std::string> seen;
    for (const auto& token : tokens) {
        if (token.kind != TokenKind::Identifier) continue;
        if (!seen.insert(token.text).second) continue;
        out.push_back(Identifier{token.text, split_identifier(token.text)});
    }
    return out;
}

// Removes all comments from `source`. Lines reduced to pure whitespace by
// the removal are dropped; untouched lines are kept verbatim, so a
// comment-free input comes back unchanged and the operation is idempotent.
inline std::pair<std::string, std::vector<std::string>> strip_block_comments(
    std::string_view source, Language language) {
    struct Span {
        std::size_t begin, end;
    };
    std::vector<std::string> removed;
    std::vector<Span> spans;

    for (const auto& token : tokenize_code(source, language)) {
        if (!token.is_comment()) continue;
        removed.push_back(token.text);
        spans.push_back({token.begin, token.end});
    }
    if (spans.empty()) return {std::string(source), {}};

    // Excise the spans. A space is re-inserted only where the removal would
    // fuse two word tokens (identifiers or numbers) into one.
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
    };
    std::string excised;
    std::vector<std::size_t> cut_points;  // offsets into `excised`
    std::size_t at = 0;
    for (const auto& span : spans) {
        excised.append(source.substr(at, span.begin - at));
        cut_points.push_back(excised.size());
        bool left_word = !excised.empty() && word_char(excised.back());
        bool right_word = span.end < source.size() && word_char(source[span.end]);
        if (left_word && right_word) excised += ' ';
        at = span.end;
    }
    excised.append(source.substr(at));

    // Lines the removal touched: trim trailing whitespace, drop when empty.
    std::string out;
    std::size_t line_begin = 0;
    bool first = true;
    while (line_begin <= excised.size()) {
        std::size_t line_end = excised.find('\n', line_begin);
        bool last = line_end == std::string::npos;
        std::size_t stop = last ? excised.size() : line_end;
        std::string_view line(excised.data() + line_begin, stop - line_begin);

        bool touched = false;
        for (std::size_t p : cut_points)
            if (p >= line_begin && p <= stop) touched = true;

        if (!touched) {
            if (!first) out += '\n';
            out.append(line);
            first = false;
        } else {
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
                line.remove_suffix(1);
            if (!line.empty()) {
                if (!first) out += '\n';
                out.append(line);
                first = false;
            }
        }
        if (last) break;
        line_begin = line_end + 1;
    }
    return {out, removed};
}

// Comment-stripped, whitespace-normalized, case-sensitive token join. Equal
// outputs define "exact duplicate" code.
inline std::string normalize_code(std::string_view source, Language language) {
    std::string key;
    for (const auto& token : tokenize_code(source, language)) {
        if (token.is_comment()) continue;
        if (!key.empty()) key += ' ';
        key += token.text;
    }
    return key;
}

}  // namespace ccd
