#pragma once

// Data model and JSONL persistence for code-comment datasets.
//
// One record per line, schema:
//   id           string, optional  (defaults to the zero-padded line index)
//   code         string, required  (method-level source)
//   comment      string, required  (processed summary)
//   raw_comment  string, optional  (original comment block)
//   language     "java" | "python", optional
//   partition    "train" | "valid" | "test", optional

#include <cctype>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ccd {

enum class Language { Java, Python };
enum class Partition { Train, Valid, Test };

inline const char* to_string(Language l) {
    return l == Language::Java ? "java" : "python";
}

inline const char* to_string(Partition p) {
    switch (p) {
        case Partition::Train: return "train";
        case Partition::Valid: return "valid";
        default: return "test";
    }
}

inline std::optional<Language> parse_language(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "java") return Language::Java;
    if (s == "python") return Language::Python;
    return std::nullopt;
}

inline std::optional<Partition> parse_partition(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "train") return Partition::Train;
    if (s == "valid") return Partition::Valid;
    if (s == "test") return Partition::Test;
    return std::nullopt;
}

struct CodeCommentPair {
    std::string id;
    std::string code;
    std::string comment;
    std::optional<std::string> raw_comment;
    Language language = Language::Java;
    Partition partition = Partition::Train;

    bool operator==(const CodeCommentPair&) const = default;
};

struct Dataset {
    std::vector<CodeCommentPair> pairs;
    std::string source_name;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

// Thrown on malformed or invalid input records; `line` is 1-based, 0 when
// the error is not tied to a specific line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string padded_index(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%010zu", index);
    return buf;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(line, std::string("missing field '") + key + "'");
    if (!it->is_string())
        throw ParseError(line, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

inline std::optional<std::string> optional_string(const nlohmann::json& obj,
                                                  const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string())
        throw ParseError(line, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

inline bool is_blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace detail

// Validates one raw field map into a CodeCommentPair. `line` only feeds error
// messages. Enforces: non-empty code (after trimming), known language and
// partition strings.
inline CodeCommentPair validate_pair(const std::map<std::string, std::string>& record,
                                     Language default_language = Language::Java,
                                     Partition default_partition = Partition::Train,
                                     std::size_t line = 0) {
    CodeCommentPair pair;
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = record.find(key);
        if (it == record.end()) return std::nullopt;
        return it->second;
    };
    pair.id = get("id").value_or("");
    auto code = get("code");
    auto comment = get("comment");
    if (!code) throw ParseError(line, "missing field 'code'");
    if (!comment) throw ParseError(line, "missing field 'comment'");
    pair.code = *code;
    pair.comment = *comment;
    pair.raw_comment = get("raw_comment");
    if (detail::is_blank(pair.code)) throw ParseError(line, "empty code");

    pair.language = default_language;
    if (auto lang = get("language")) {
        auto parsed = parse_language(*lang);
        if (!parsed) throw ParseError(line, "unsupported language: " + *lang);
        pair.language = *parsed;
    }
    pair.partition = default_partition;
    if (auto part = get("partition")) {
        auto parsed = parse_partition(*part);
        if (!parsed) throw ParseError(line, "unsupported partition: " + *part);
        pair.partition = *parsed;
    }
    return pair;
}

// Streams a JSONL dataset. Line order is preserved; records without an id
// get the zero-padded 0-based line index. Duplicate ids are an error.
inline Dataset read_jsonl(std::istream& in, Language default_language = Language::Java,
                          Partition default_partition = Partition::Train,
                          std::string source_name = "") {
    Dataset dataset;
    dataset.source_name = std::move(source_name);
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::is_blank(line)) continue;

        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw ParseError(line_no, "malformed JSON");

        std::map<std::string, std::string> record;
        record["code"] = detail::require_string(obj, "code", line_no);
        record["comment"] = detail::require_string(obj, "comment", line_no);
        for (const char* key : {"id", "raw_comment", "language", "partition"}) {
            if (auto v = detail::optional_string(obj, key, line_no)) record[key] = *v;
        }

        CodeCommentPair pair =
            validate_pair(record, default_language, default_partition, line_no);
        if (pair.id.empty()) pair.id = detail::padded_index(line_no - 1);
        if (!seen_ids.insert(pair.id).second)
            throw ParseError(line_no, "duplicate id: " + pair.id);
        dataset.pairs.push_back(std::move(pair));
    }
    return dataset;
}

// Emits one JSON object per pair with a fixed key order, so identical
// datasets always serialize to identical bytes.
inline void write_jsonl(const Dataset& dataset, std::ostream& out) {
    for (const auto& pair : dataset.pairs) {
        nlohmann::ordered_json obj;
        obj["id"] = pair.id;
        obj["code"] = pair.code;
        obj["comment"] = pair.comment;
        if (pair.raw_comment) obj["raw_comment"] = *pair.raw_comment;
        obj["language"] = to_string(pair.language);
        obj["partition"] = to_string(pair.partition);
        out << obj.dump() << '\n';
        if (!out) throw std::runtime_error("write failed: output stream error");
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: output stream error");
}

}  // namespace ccd
