// ccdistill -- distill code-comment corpora.
//
//   ccdistill clean  -i in.jsonl -o out.jsonl [--outcomes o.jsonl] [--report r.json]
//   ccdistill assess -i in.jsonl [--report r.txt] [--fail-over 0.4]
//   ccdistill eval   -i in.jsonl --gold labels.jsonl [-o result.json]
//   ccdistill score  --hyp hyp.jsonl --ref ref.jsonl [--bleu-mode corpus|sentence]
//
// Exit codes: 0 success, 1 policy failure (--fail-over), 2 usage/input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccd/cleaner.hpp"
#include "ccd/config.hpp"
#include "ccd/corpus.hpp"
#include "ccd/metrics.hpp"
#include "ccd/report.hpp"

namespace {

struct CommonArgs {
    std::string input;
    std::string output;
    std::string report_path;
    std::string outcomes_path;
    std::string config_path;
    std::string gold_path;
    std::string hyp_path;
    std::string ref_path;
    std::optional<std::string> format;
    std::optional<std::string> language;
    std::optional<std::string> partition;
    std::optional<int> jobs;
    std::optional<double> fail_over;
    std::string bleu_mode = "sentence";
};

ccd::CliConfig resolve_config(const CommonArgs& args) {
    ccd::CliConfig config;
    std::string config_path = args.config_path;
    if (config_path.empty()) {
        if (const char* env = std::getenv("CAT_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) ccd::load_config_file(config, config_path);

    if (args.language) {
        auto lang = ccd::parse_language(*args.language);
        if (!lang) throw std::runtime_error("unsupported language: " + *args.language);
        config.default_language = *lang;
    }
    if (args.partition) {
        auto part = ccd::parse_partition(*args.partition);
        if (!part) throw std::runtime_error("unsupported partition: " + *args.partition);
        config.default_partition = *part;
    }
    if (args.format) {
        config.format = ccd::parse_format(*args.format);
        config.format_set = true;
    }
    if (args.jobs) {
        if (*args.jobs < 1) throw std::runtime_error("--jobs must be >= 1");
        config.jobs = *args.jobs;
    }
    return config;
}

ccd::Dataset read_dataset(const std::string& path, const ccd::CliConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input: " + path);
    std::string name = path;
    std::size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return ccd::read_jsonl(in, config.default_language, config.default_partition, name);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_clean(const CommonArgs& args) {
    ccd::CliConfig config = resolve_config(args);
    ccd::Dataset dataset = read_dataset(args.input, config);
    if (dataset.empty()) throw std::runtime_error("empty dataset");

    ccd::DistillResult result = ccd::clean_dataset(dataset, config.rules, config.jobs);

    std::ofstream out(args.output);
    if (!out) throw std::runtime_error("cannot open output: " + args.output);
    ccd::write_jsonl(result.distilled, out);

    if (!args.outcomes_path.empty()) {
        std::string lines;
        for (const auto& outcome : result.outcomes) {
            nlohmann::ordered_json obj;
            obj["id"] = outcome.pair_id;
            obj["verdict"] = ccd::to_string(outcome.verdict);
            auto categories = nlohmann::ordered_json::array();
            auto evidence = nlohmann::ordered_json::array();
            for (const auto& label : outcome.labels) {
                categories.push_back(ccd::category_name(label.category));
                evidence.push_back(label.evidence);
            }
            obj["categories"] = std::move(categories);
            obj["evidence"] = std::move(evidence);
            lines += obj.dump() + "\n";
        }
        write_text_file(args.outcomes_path, lines);
    }
    if (!args.report_path.empty()) {
        ccd::ReportFormat format =
            config.format_set ? config.format : ccd::ReportFormat::Json;
        write_text_file(args.report_path, ccd::render_report(result.report, format));
    }

    std::size_t kept = 0, updated = 0, removed = 0;
    for (const auto& outcome : result.outcomes) {
        if (outcome.verdict == ccd::CleanVerdict::Kept) ++kept;
        if (outcome.verdict == ccd::CleanVerdict::Updated) ++updated;
        if (outcome.verdict == ccd::CleanVerdict::Removed) ++removed;
    }
    std::cerr << "clean: " << dataset.size() << " pairs -> kept " << kept << ", updated "
              << updated << ", removed " << removed << "\n";
    return 0;
}

int cmd_assess(const CommonArgs& args) {
    ccd::CliConfig config = resolve_config(args);
    ccd::Dataset dataset = read_dataset(args.input, config);
    ccd::QualityReport report = ccd::assess(dataset, config.rules, config.jobs);
    std::string rendered = ccd::render_report(report, config.format);
    if (!args.report_path.empty())
        write_text_file(args.report_path, rendered);
    else
        std::cout << rendered;
    if (args.fail_over && report.noisy_total.pct > *args.fail_over) {
        std::cerr << "assess: noisy fraction " << report.noisy_total.pct
                  << " exceeds --fail-over " << *args.fail_over << "\n";
        return 1;
    }
    return 0;
}

int cmd_eval(const CommonArgs& args) {
    ccd::CliConfig config = resolve_config(args);
    ccd::Dataset dataset = read_dataset(args.input, config);

    std::ifstream gold_in(args.gold_path);
    if (!gold_in) throw std::runtime_error("cannot open gold file: " + args.gold_path);
    std::map<std::string, std::set<ccd::NoiseCategory>> gold;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(gold_in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("id"))
            throw std::runtime_error("gold line " + std::to_string(line_no) +
                                     ": expected {id, categories}");
        std::set<ccd::NoiseCategory> categories;
        if (obj.contains("categories")) {
            for (const auto& name : obj["categories"]) {
                auto category = ccd::parse_category(name.get<std::string>());
                if (!category)
                    throw std::runtime_error("gold line " + std::to_string(line_no) +
                                             ": unknown category " +
                                             name.get<std::string>());
                categories.insert(*category);
            }
        }
        gold[obj["id"].get<std::string>()] = std::move(categories);
    }
    if (gold.empty()) throw std::runtime_error("empty gold file");

    std::vector<ccd::Diagnosis> diagnoses =
        ccd::label_dataset(dataset, config.rules, config.jobs);
    ccd::EvalResult result = ccd::evaluate_detectors(diagnoses, gold);

    nlohmann::ordered_json j;
    auto prf_json = [](const ccd::PRF& prf) {
        nlohmann::ordered_json o;
        o["precision"] = prf.precision;
        o["recall"] = prf.recall;
        o["f1"] = prf.f1;
        return o;
    };
    nlohmann::ordered_json per_category;
    for (const auto& [category, prf] : result.per_category)
        per_category[ccd::category_name(category)] = prf_json(prf);
    j["per_category"] = std::move(per_category);
    j["macro_f1"] = result.macro_f1;
    j["micro"] = prf_json(result.micro);
    std::string rendered = j.dump(2) + "\n";
    if (!args.output.empty())
        write_text_file(args.output, rendered);
    else
        std::cout << rendered;
    return 0;
}

// Score inputs: JSONL of {id, tokens:[...]} or plain text (one sentence per
// line, whitespace-tokenized).
std::vector<std::pair<std::string, ccd::TokenList>> read_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input: " + path);
    std::vector<std::pair<std::string, ccd::TokenList>> sentences;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::string id;
        ccd::TokenList tokens;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (!obj.is_discarded() && obj.is_object() && obj.contains("tokens")) {
            if (obj.contains("id"))
                id = obj["id"].is_string() ? obj["id"].get<std::string>()
                                           : obj["id"].dump();
            for (const auto& token : obj["tokens"]) tokens.push_back(token.get<std::string>());
        } else {
            std::istringstream words(line);
            std::string word;
            while (words >> word) tokens.push_back(word);
        }
        if (id.empty()) id = ccd::detail::padded_index(line_no - 1);
        sentences.emplace_back(std::move(id), std::move(tokens));
    }
    return sentences;
}

int cmd_score(const CommonArgs& args) {
    auto hyp_rows = read_score_file(args.hyp_path);
    auto ref_rows = read_score_file(args.ref_path);
    std::map<std::string, const ccd::TokenList*> ref_by_id;
    for (const auto& [id, tokens] : ref_rows) ref_by_id[id] = &tokens;
    if (hyp_rows.size() != ref_rows.size() || ref_by_id.size() != ref_rows.size())
        throw std::runtime_error("hypothesis/reference id sets do not align");

    std::vector<ccd::TokenList> hypotheses, references;
    for (const auto& [id, tokens] : hyp_rows) {
        auto it = ref_by_id.find(id);
        if (it == ref_by_id.end())
            throw std::runtime_error("hypothesis id missing from references: " + id);
        hypotheses.push_back(tokens);
        references.push_back(*it->second);
    }
    if (hypotheses.empty()) throw std::runtime_error("empty corpus");

    ccd::BleuMode mode;
    if (args.bleu_mode == "corpus")
        mode = ccd::BleuMode::Corpus;
    else if (args.bleu_mode == "sentence")
        mode = ccd::BleuMode::SentenceSmoothed;
    else
        throw std::runtime_error("unsupported --bleu-mode: " + args.bleu_mode);

    ccd::ScoreReport report = ccd::score_corpus(hypotheses, references, mode);
    nlohmann::ordered_json j;
    j["bleu"] = report.bleu;
    j["rouge_l"] = report.rouge_l;
    j["meteor"] = report.meteor;
    j["cider"] = report.cider;
    j["bleu_mode"] = mode == ccd::BleuMode::Corpus ? "corpus" : "sentence";
    j["sentences"] = report.sentences;
    std::string rendered = j.dump(2) + "\n";
    if (!args.output.empty())
        write_text_file(args.output, rendered);
    else
        std::cout << rendered;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect, correct and score noise in code-comment corpora"};
    app.require_subcommand(1);
    CommonArgs args;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("-i,--input", args.input, "input dataset (JSONL)")->required();
        cmd->add_option("--config", args.config_path, "config file path");
        cmd->add_option("--jobs", args.jobs, "worker count (default 1)");
        cmd->add_option("--language", args.language, "default language: java|python");
        cmd->add_option("--partition", args.partition, "default partition: train|valid|test");
        cmd->add_option("--format", args.format, "report format: text|json|csv");
    };

    CLI::App* clean = app.add_subcommand("clean", "clean a dataset");
    add_common(clean, true);
    clean->add_option("-o,--output", args.output, "distilled dataset path")->required();
    clean->add_option("--outcomes", args.outcomes_path, "per-pair outcomes (JSONL)");
    clean->add_option("--report", args.report_path, "quality report path");

    CLI::App* assess = app.add_subcommand("assess", "assess dataset quality (read-only)");
    add_common(assess, true);
    assess->add_option("--report", args.report_path, "write report here instead of stdout");
    assess->add_option("--fail-over", args.fail_over,
                       "exit 1 when the noisy fraction exceeds this value");

    CLI::App* eval = app.add_subcommand("eval", "evaluate detectors against gold labels");
    add_common(eval, true);
    eval->add_option("--gold", args.gold_path, "gold labels (JSONL of {id, categories})")
        ->required();
    eval->add_option("-o,--output", args.output, "write result JSON here instead of stdout");

    CLI::App* score = app.add_subcommand("score", "score hypotheses against references");
    score->add_option("--hyp,--hypotheses,-i,--input", args.hyp_path,
                      "hypothesis file (JSONL of {id, tokens} or plain text)")
        ->required();
    score->add_option("--ref,--references", args.ref_path, "reference file")->required();
    score->add_option("--bleu-mode", args.bleu_mode, "corpus|sentence (default sentence)");
    score->add_option("-o,--output", args.output, "write score JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(clean)) return cmd_clean(args);
        if (app.got_subcommand(assess)) return cmd_assess(args);
        if (app.got_subcommand(eval)) return cmd_eval(args);
        if (app.got_subcommand(score)) return cmd_score(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
