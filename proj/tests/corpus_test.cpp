#include "ccd/corpus.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace ccd;

namespace {

Dataset read_str(const std::string& text, Language lang = Language::Java,
                 Partition part = Partition::Train) {
    std::istringstream in(text);
    return read_jsonl(in, lang, part);
}

TEST(ReadJsonl, MinimalRecordGetsDefaultsAndPaddedId) {
    Dataset d = read_str(R"({"code":"int f(){}","comment":"f"})" "\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.pairs[0].id, "0000000000");
    EXPECT_EQ(d.pairs[0].language, Language::Java);
    EXPECT_EQ(d.pairs[0].partition, Partition::Train);
    EXPECT_FALSE(d.pairs[0].raw_comment.has_value());
}

TEST(ReadJsonl, ByteOrderMarkAndCrlfTolerated) {
    Dataset d = read_str("\xEF\xBB\xBF" R"({"code":"x","comment":"c"})" "\r\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.pairs[0].code, "x");
}

TEST(ReadJsonl, MalformedLineReportsLineNumber) {
    try {
        read_str("{\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(std::string(e.what()).find("malformed JSON"), std::string::npos);
    }
}

TEST(ReadJsonl, DuplicateIdRejected) {
    std::string two = R"({"id":"a","code":"x","comment":"c"})" "\n"
                      R"({"id":"a","code":"y","comment":"d"})" "\n";
    try {
        read_str(two);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate id: a"), std::string::npos);
    }
}

TEST(ReadJsonl, MissingRequiredFieldNamesFieldAndLine) {
    try {
        read_str(R"({"code":"x","comment":"c"})" "\n" R"({"comment":"c"})" "\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("code"), std::string::npos);
    }
}

TEST(ReadJsonl, OrderFollowsInputLines) {
    std::string three = R"({"id":"x","code":"a","comment":"1"})" "\n"
                        R"({"id":"y","code":"b","comment":"2"})" "\n"
                        R"({"id":"z","code":"c","comment":"3"})" "\n";
    Dataset d = read_str(three);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.pairs[0].id, "x");
    EXPECT_EQ(d.pairs[1].id, "y");
    EXPECT_EQ(d.pairs[2].id, "z");
}

TEST(ValidatePair, AcceptsKnownLanguage) {
    std::map<std::string, std::string> record = {
        {"code", "x"}, {"comment", "c"}, {"language", "java"}};
    EXPECT_EQ(validate_pair(record).language, Language::Java);
}

TEST(ValidatePair, RejectsEmptyCode) {
    std::map<std::string, std::string> record = {{"code", "  "}, {"comment", "c"}};
    try {
        validate_pair(record);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("empty code"), std::string::npos);
    }
}

TEST(ValidatePair, RejectsUnknownLanguage) {
    std::map<std::string, std::string> record = {
        {"code", "x"}, {"comment", "c"}, {"language", "go"}};
    try {
        validate_pair(record);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("unsupported language: go"), std::string::npos);
    }
}

TEST(WriteJsonl, EmptyDatasetWritesNothing) {
    std::ostringstream out;
    write_jsonl(Dataset{}, out);
    EXPECT_EQ(out.str(), "");
}

TEST(WriteJsonl, RoundTripSinglePair) {
    Dataset d = read_str(R"({"id":"a","code":"int f(){}","comment":"f"})" "\n");
    std::ostringstream out;
    write_jsonl(d, out);
    Dataset again = read_str(out.str());
    EXPECT_EQ(d.pairs, again.pairs);
}

TEST(WriteJsonl, UnicodeRoundTripIsByteExact) {
    Dataset d;
    for (int i = 0; i < 3; ++i) {
        CodeCommentPair pair;
        pair.id = "u" + std::to_string(i);
        pair.code = "int f" + std::to_string(i) + "(){}";
        pair.comment = "将JSONArray转换为Bean的List，默认为ArrayList";
        pair.raw_comment = "/* 中文注释 */";
        d.pairs.push_back(pair);
    }
    std::ostringstream first;
    write_jsonl(d, first);
    Dataset again = read_str(first.str());
    EXPECT_EQ(d.pairs, again.pairs);
    std::ostringstream second;
    write_jsonl(again, second);
    EXPECT_EQ(first.str(), second.str());
}

// Round-trip property over randomized datasets.
TEST(WriteJsonl, RoundTripProperty) {
    std::mt19937 rng(7);
    const std::string pool = "abc xyz{};()\"'\\\n\tqrs0123";
    auto random_text = [&](std::size_t max_len) {
        std::size_t len = 1 + rng() % max_len;
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s += pool[rng() % pool.size()];
        return s;
    };
    for (int round = 0; round < 50; ++round) {
        Dataset d;
        std::size_t n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) {
            CodeCommentPair pair;
            pair.id = "r" + std::to_string(i);
            pair.code = "x" + random_text(30);  // keep code non-blank
            pair.comment = random_text(20);
            if (rng() % 2) pair.raw_comment = random_text(25);
            pair.language = rng() % 2 ? Language::Java : Language::Python;
            pair.partition = static_cast<Partition>(rng() % 3);
            d.pairs.push_back(pair);
        }
        std::ostringstream out;
        write_jsonl(d, out);
        Dataset again = read_str(out.str());
        ASSERT_EQ(d.pairs, again.pairs) << "round " << round;
    }
}

TEST(WriteJsonl, StreamFailurePropagates) {
    Dataset d = read_str(R"({"code":"x","comment":"c"})" "\n");
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    EXPECT_THROW(write_jsonl(d, out), std::runtime_error);
}

}  // namespace
