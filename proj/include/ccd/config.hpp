#pragma once

// Flat key-value config file with dotted keys, e.g.
//
//   rules.interrogation.enabled = false
//   rules.content_tampering.action = update
//   thresholds.max_auto_stmts = 3
//   thresholds.underdev_keywords = todo, fixme, tbd
//   sentence.section_markers = arguments, args, returns, params, raises, see
//   dedup.keep_precedence = train, valid, test
//   io.language = java
//   io.partition = train
//   io.format = json
//   jobs = 4
//
// '#' starts a comment; blank lines are ignored. Precedence is CLI flag >
// config file > built-in default, resolved by the CLI layer.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccd/detectors.hpp"
#include "ccd/report.hpp"

namespace ccd {

struct CliConfig {
    RuleConfig rules;
    Language default_language = Language::Java;
    Partition default_partition = Partition::Train;
    ReportFormat format = ReportFormat::Text;
    bool format_set = false;
    int jobs = 1;
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    return sentence_detail::trim(s);
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string current;
    std::stringstream ss(value);
    while (std::getline(ss, current, ',')) {
        std::string item = trim(current);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

inline bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw std::runtime_error("config: invalid boolean for " + key + ": " + value);
}

inline int parse_int(const std::string& value, const std::string& key, int min_value) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        if (v < min_value)
            throw std::runtime_error("config: " + key + " must be >= " +
                                     std::to_string(min_value));
        return v;
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("config: invalid integer for " + key + ": " + value);
    } catch (const std::out_of_range&) {
        throw std::runtime_error("config: invalid integer for " + key + ": " + value);
    }
}

inline double parse_fraction(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        if (v < 0.0 || v > 1.0)
            throw std::runtime_error("config: " + key + " must be in [0,1]");
        return v;
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("config: invalid number for " + key + ": " + value);
    } catch (const std::out_of_range&) {
        throw std::runtime_error("config: invalid number for " + key + ": " + value);
    }
}

}  // namespace config_detail

inline ReportFormat parse_format(const std::string& value) {
    if (value == "text") return ReportFormat::Text;
    if (value == "json") return ReportFormat::Json;
    if (value == "csv") return ReportFormat::Csv;
    throw std::runtime_error("unsupported format: " + value);
}

inline void apply_config_entry(CliConfig& config, const std::string& key,
                               const std::string& value) {
    using namespace config_detail;

    if (key.starts_with("rules.")) {
        std::string rest = key.substr(6);
        std::size_t dot = rest.rfind('.');
        if (dot == std::string::npos)
            throw std::runtime_error("config: unknown key: " + key);
        std::string category_name = rest.substr(0, dot);
        std::string field = rest.substr(dot + 1);
        auto category = parse_category(category_name);
        if (!category) throw std::runtime_error("config: unknown category: " + category_name);
        if (field == "enabled") {
            config.rules.set_enabled(*category, parse_bool(value, key));
        } else if (field == "action") {
            if (value == "remove")
                config.rules.set_action(*category, NoiseAction::Remove);
            else if (value == "update")
                config.rules.set_action(*category, NoiseAction::Update);
            else
                throw std::runtime_error("config: invalid action for " + key + ": " + value);
        } else {
            throw std::runtime_error("config: unknown key: " + key);
        }
        return;
    }
    if (key == "thresholds.min_split_subtokens") {
        config.rules.thresholds.min_split_subtokens = parse_int(value, key, 1);
    } else if (key == "thresholds.max_auto_stmts") {
        config.rules.thresholds.max_auto_stmts = parse_int(value, key, 1);
    } else if (key == "thresholds.codey_line_min") {
        config.rules.thresholds.codey_line_min = parse_int(value, key, 1);
    } else if (key == "thresholds.nonliteral_ratio") {
        config.rules.thresholds.nonliteral_ratio = parse_fraction(value, key);
    } else if (key == "thresholds.underdev_keywords") {
        config.rules.thresholds.underdev_keywords = split_list(value);
    } else if (key == "sentence.abbreviations") {
        config.rules.sentence.abbreviations = split_list(value);
    } else if (key == "sentence.section_markers") {
        config.rules.sentence.section_markers = split_list(value);
    } else if (key == "lexing.java_keywords") {
        auto items = split_list(value);
        config.rules.java_keywords = std::set<std::string>(items.begin(), items.end());
    } else if (key == "lexing.python_keywords") {
        auto items = split_list(value);
        config.rules.python_keywords = std::set<std::string>(items.begin(), items.end());
    } else if (key == "dedup.keep_precedence") {
        std::vector<Partition> order;
        for (const auto& item : split_list(value)) {
            auto p = parse_partition(item);
            if (!p) throw std::runtime_error("config: unknown partition: " + item);
            order.push_back(*p);
        }
        if (order.empty()) throw std::runtime_error("config: empty keep_precedence");
        config.rules.keep_precedence = order;
    } else if (key == "io.language") {
        auto lang = parse_language(value);
        if (!lang) throw std::runtime_error("unsupported language: " + value);
        config.default_language = *lang;
    } else if (key == "io.partition") {
        auto part = parse_partition(value);
        if (!part) throw std::runtime_error("unsupported partition: " + value);
        config.default_partition = *part;
    } else if (key == "io.format") {
        config.format = parse_format(value);
        config.format_set = true;
    } else if (key == "jobs") {
        config.jobs = parse_int(value, key, 1);
    } else {
        throw std::runtime_error("config: unknown key: " + key);
    }
}

inline void load_config_file(CliConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string trimmed = config_detail::trim(line);
        if (trimmed.empty()) continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = config_detail::trim(trimmed.substr(0, eq));
        std::string value = config_detail::trim(trimmed.substr(eq + 1));
        apply_config_entry(config, key, value);
    }
}

}  // namespace ccd
