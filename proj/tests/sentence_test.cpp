#include "ccd/sentence.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ccd;

namespace {

using Lines = std::vector<std::string>;
using Words = std::vector<std::string>;

TEST(StripDelimiters, JavadocBlock) {
    Lines lines = strip_comment_delimiters(
        "/* Returns the high-value\n * for an item within a series. */", Language::Java);
    EXPECT_EQ(lines, (Lines{"Returns the high-value", "for an item within a series."}));
}

TEST(StripDelimiters, PythonHash) {
    EXPECT_EQ(strip_comment_delimiters("# hello", Language::Python), (Lines{"hello"}));
}

TEST(StripDelimiters, PythonDocstring) {
    Lines lines = strip_comment_delimiters(
        "\"\"\"\nGenerate a CSV file containing a summary of the xBlock usage\n"
        "Arguments:course_data\n\"\"\"",
        Language::Python);
    EXPECT_EQ(lines, (Lines{"Generate a CSV file containing a summary of the xBlock usage",
                            "Arguments:course_data"}));
}

TEST(StripDelimiters, InteriorEmptyLinesSurvive) {
    Lines lines = strip_comment_delimiters("//\n// a\n//\n// b\n//", Language::Java);
    EXPECT_EQ(lines, (Lines{"a", "", "b"}));
}

TEST(ExtractFirstSentence, TwoLineSentenceEndsAtPeriod) {
    FirstSentence fs = extract_first_sentence(
        "/* Returns the high-value\n * for an item within a series. */", Language::Java);
    EXPECT_EQ(fs.text, "Returns the high-value for an item within a series.");
    EXPECT_EQ(fs.consumed_lines, 2);
    EXPECT_EQ(fs.terminated_by, SentenceEnd::Period);
}

TEST(ExtractFirstSentence, SingleLine) {
    FirstSentence fs = extract_first_sentence("Does stuff.", Language::Java);
    EXPECT_EQ(fs.text, "Does stuff.");
    EXPECT_EQ(fs.consumed_lines, 1);
    EXPECT_EQ(fs.terminated_by, SentenceEnd::Period);
}

TEST(ExtractFirstSentence, SectionMarkerTerminatesBeforeLine) {
    FirstSentence fs = extract_first_sentence(
        "\"\"\"\nGenerate a CSV file containing a summary of the xBlock usage\n"
        "Arguments:course_data\n\"\"\"",
        Language::Python);
    EXPECT_EQ(fs.text, "Generate a CSV file containing a summary of the xBlock usage");
    EXPECT_EQ(fs.consumed_lines, 1);
    EXPECT_EQ(fs.terminated_by, SentenceEnd::SectionMarker);
}

TEST(ExtractFirstSentence, AtTagTerminates) {
    FirstSentence fs = extract_first_sentence(
        "/** Sets the value\n * @param v the value */", Language::Java);
    EXPECT_EQ(fs.text, "Sets the value");
    EXPECT_EQ(fs.terminated_by, SentenceEnd::SectionMarker);
}

TEST(ExtractFirstSentence, AbbreviationsDoNotTerminate) {
    FirstSentence fs =
        extract_first_sentence("// Trims tokens, e.g. tabs and spaces, from input.",
                               Language::Java);
    EXPECT_EQ(fs.text, "Trims tokens, e.g. tabs and spaces, from input.");
    EXPECT_EQ(fs.terminated_by, SentenceEnd::Period);
}

TEST(ExtractFirstSentence, InlineCodeSpanGuard) {
    FirstSentence fs = extract_first_sentence(
        "// Handles `a.b` lookups across modules properly.", Language::Java);
    EXPECT_EQ(fs.text, "Handles `a.b` lookups across modules properly.");
}

TEST(ExtractFirstSentence, CodeLookingLineStopsAccumulation) {
    FirstSentence fs = extract_first_sentence(
        "/* for now try mappig full type URI  */\n// public String transformTypeID(URI "
        "typeuri){\n// return typeuri.toString();}",
        Language::Java);
    EXPECT_EQ(fs.text, "for now try mappig full type URI");
    EXPECT_EQ(fs.terminated_by, SentenceEnd::SectionMarker);
}

TEST(ExtractFirstSentence, ExhaustionReturnsAccumulated) {
    FirstSentence fs = extract_first_sentence("// no terminator here", Language::Java);
    EXPECT_EQ(fs.text, "no terminator here");
    EXPECT_EQ(fs.terminated_by, SentenceEnd::EndOfComment);
}

TEST(NormalizeForMatch, BasicAndEmpty) {
    EXPECT_EQ(normalize_for_match("Returns the high-value"),
              (Words{"returns", "the", "high", "value"}));
    EXPECT_EQ(normalize_for_match(""), (Words{}));
    EXPECT_EQ(normalize_for_match("<p> Builds the JASPIC context.</p>"),
              (Words{"p", "builds", "the", "jaspic", "context", "p"}));
}

TEST(NormalizeForMatch, MultibyteActsAsSeparator) {
    EXPECT_EQ(normalize_for_match("将JSONArray转换为Bean的List，默认为ArrayList"),
              (Words{"jsonarray", "bean", "list", "arraylist"}));
    EXPECT_EQ(normalize_for_match("naïve approach"), (Words{"na", "ve", "approach"}));
}

TEST(ClassifyAlignment, PaperExamples) {
    FirstSentence high{"Returns the high-value for an item within a series.", 2,
                       SentenceEnd::Period};
    EXPECT_EQ(classify_alignment("returns the high value", high), AlignmentClass::Partial);

    FirstSentence xblock{"Generate a CSV file containing a summary of the xBlock usage", 1,
                         SentenceEnd::SectionMarker};
    EXPECT_EQ(classify_alignment(
                  "generate a csv file containing a summary of the xblock usage "
                  "arguments course data",
                  xblock),
              AlignmentClass::Verbose);

    FirstSentence same{"does stuff", 1, SentenceEnd::EndOfComment};
    EXPECT_EQ(classify_alignment("does stuff", same), AlignmentClass::Exact);
    EXPECT_EQ(classify_alignment("entirely different", same), AlignmentClass::Unrelated);
}

// Exactly one class holds, and Partial/Verbose swap under argument exchange.
TEST(ClassifyAlignment, TrichotomyAndSymmetryProperty) {
    std::mt19937 rng(23);
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    auto random_words = [&](std::size_t max_len) {
        std::size_t len = rng() % (max_len + 1);
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            if (!s.empty()) s += ' ';
            s += vocab[rng() % vocab.size()];
        }
        return s;
    };
    for (int round = 0; round < 500; ++round) {
        std::string p = random_words(5), f = random_words(5);
        FirstSentence fs{f, 1, SentenceEnd::EndOfComment};
        FirstSentence ps{p, 1, SentenceEnd::EndOfComment};
        AlignmentClass forward = classify_alignment(p, fs);
        AlignmentClass backward = classify_alignment(f, ps);
        if (forward == AlignmentClass::Exact) EXPECT_EQ(backward, AlignmentClass::Exact);
        if (forward == AlignmentClass::Partial) EXPECT_EQ(backward, AlignmentClass::Verbose);
        if (forward == AlignmentClass::Verbose) EXPECT_EQ(backward, AlignmentClass::Partial);
        if (forward == AlignmentClass::Unrelated)
            EXPECT_EQ(backward, AlignmentClass::Unrelated);
    }
}

// The normalized first sentence is a prefix of the normalized whole comment,
// no matter where line breaks fall.
TEST(ExtractFirstSentence, PrefixInvariantProperty) {
    std::mt19937 rng(29);
    const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "eps"};
    for (int round = 0; round < 300; ++round) {
        std::vector<std::string> words;
        std::size_t len = 1 + rng() % 12;
        for (std::size_t i = 0; i < len; ++i) words.push_back(vocab[rng() % vocab.size()]);
        if (rng() % 2) words[rng() % words.size()] += ".";

        // random regrouping into comment lines
        std::string raw = "/*";
        for (std::size_t i = 0; i < words.size(); ++i) {
            raw += (i == 0 || rng() % 3 ? " " : "\n * ") + words[i];
        }
        raw += " */";

        FirstSentence fs = extract_first_sentence(raw, Language::Java);
        Words first = normalize_for_match(fs.text);
        Words full;
        for (const auto& line : strip_comment_delimiters(raw, Language::Java))
            for (auto& w : normalize_for_match(line)) full.push_back(w);
        ASSERT_LE(first.size(), full.size()) << raw;
        EXPECT_TRUE(std::equal(first.begin(), first.end(), full.begin())) << raw;
    }
}

// Breaking one line into two at a space never changes the extracted text.
TEST(ExtractFirstSentence, LineSplitInvarianceProperty) {
    std::mt19937 rng(31);
    const std::vector<std::string> vocab = {"reads", "the", "buffer", "fully", "now"};
    for (int round = 0; round < 300; ++round) {
        std::vector<std::string> words;
        std::size_t len = 2 + rng() % 8;
        for (std::size_t i = 0; i < len; ++i) words.push_back(vocab[rng() % vocab.size()]);
        words.back() += ".";
        std::string single = "/* ";
        for (std::size_t i = 0; i < words.size(); ++i)
            single += (i ? " " : "") + words[i];
        single += " */";

        std::size_t split_at = 1 + rng() % (words.size() - 1);
        std::string broken = "/* ";
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i == split_at)
                broken += "\n * ";
            else if (i)
                broken += " ";
            broken += words[i];
        }
        broken += " */";

        EXPECT_EQ(extract_first_sentence(single, Language::Java).text,
                  extract_first_sentence(broken, Language::Java).text)
            << single << " vs " << broken;
    }
}

}  // namespace
