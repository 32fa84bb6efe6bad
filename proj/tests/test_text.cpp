#include "domainlens/common.hpp"
#include "domainlens/error.hpp"
#include "domainlens/text.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

using namespace domainlens;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

std::vector<TokenizedDoc> docs_of(const std::vector<std::vector<std::string>>& tokens) {
    std::vector<TokenizedDoc> docs;
    for (std::size_t i = 0; i < tokens.size(); ++i) docs.push_back({"d" + std::to_string(i), TextChannel::Content, tokens[i]});
    return docs;
}

// n documents; `term` appears in the first k of them, "filler" in none.
std::vector<TokenizedDoc> df_fixture(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::string>> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i].push_back("anchor" + std::to_string(i % 2));
        if (i < k) t[i].push_back("term");
    }
    return docs_of(t);
}

}  // namespace

TEST(Porter, PublishedSampleVocabulary) {
    const std::string dir = DOMAINLENS_TEST_DATA;
    auto voc = read_lines(dir + "/porter_voc.txt");
    auto out = read_lines(dir + "/porter_output.txt");
    ASSERT_EQ(voc.size(), out.size());
    ASSERT_GT(voc.size(), 20000u);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < voc.size(); ++i)
        if (porter_stem(voc[i]) != out[i] && ++mismatches <= 5) ADD_FAILURE() << voc[i] << " -> " << porter_stem(voc[i]);
    EXPECT_EQ(mismatches, 0u);
}

TEST(Porter, ClassicExamples) {
    EXPECT_EQ(porter_stem("caresses"), "caress");
    EXPECT_EQ(porter_stem("ponies"), "poni");
    EXPECT_EQ(porter_stem("relational"), "relat");
    EXPECT_EQ(porter_stem("a"), "a");
}

TEST(Lemmatizer, SuffixRules) {
    EXPECT_EQ(rule_lemmatize("stories"), "story");
    EXPECT_EQ(rule_lemmatize("cats"), "cat");
    EXPECT_EQ(rule_lemmatize("caress"), "caress");
    EXPECT_EQ(rule_lemmatize("bus"), "bus");
    EXPECT_EQ(rule_lemmatize("analysis"), "analysis");
}

TEST(Preprocess, Examples) {
    const auto& sw = english_stopwords();
    EXPECT_EQ(preprocess("The Archives of Politics, 2021!", sw), (std::vector<std::string>{"archiv", "polit"}));
    EXPECT_TRUE(preprocess("", sw).empty());
    EXPECT_EQ(preprocess("caresses", sw), std::vector<std::string>{"caress"});
    EXPECT_EQ(raw_tokens("It's 4PM-ish"), (std::vector<std::string>{"it", "s", "pm", "ish"}));
}

TEST(Preprocess, CustomLemmatizerHook) {
    auto upper_free = [](std::string_view s) { return std::string(s) + "x"; };
    EXPECT_EQ(preprocess("news", english_stopwords(), upper_free), std::vector<std::string>{"newx"});
}

TEST(Preprocess, OutputAlphabetIsLowercaseAscii) {
    Rng rng(11);
    const std::vector<std::string> pieces = {"\xC3\xA9", "\xE2\x80\x93", "\xF0\x9F\x98\x80", "\xFF", "\x80", " ", "\t",
                                             "A", "z", "Q", "0", "9", "_", "-", "'", "\xD0\x96", "e"};
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        std::size_t len = rng.below(60);
        for (std::size_t i = 0; i < len; ++i) text += pieces[rng.below(pieces.size())];
        for (const auto& tok : preprocess(text, english_stopwords())) {
            ASSERT_FALSE(tok.empty());
            for (char c : tok) ASSERT_TRUE(c >= 'a' && c <= 'z') << text;
        }
    }
}

TEST(Stopwords, DataFileMatchesCompiledList) {
    auto lines = read_lines(std::string(DOMAINLENS_DATA_DIR) + "/stopwords_en.txt");
    StopwordSet from_file(lines.begin(), lines.end());
    from_file.erase("");
    EXPECT_EQ(from_file, english_stopwords());
    EXPECT_EQ(english_stopwords().size(), 179u);
    EXPECT_TRUE(english_stopwords().count("the"));
}

TEST(StopwordCoverage, FractionOfRawTokens) {
    EXPECT_DOUBLE_EQ(stopword_coverage("the cat and dog", english_stopwords()), 0.5);
    EXPECT_DOUBLE_EQ(stopword_coverage("", english_stopwords()), 0.0);
}

TEST(Vocabulary, LowerBoundInclusiveAtTenPercent) {
    auto v = build_vocabulary(df_fixture(10, 1));
    ASSERT_TRUE(v.index_of("term"));
    EXPECT_EQ(v.df[*v.index_of("term")], 1u);
    EXPECT_NEAR(v.idf[*v.index_of("term")], std::log(10.0), 1e-12);
}

TEST(Vocabulary, UpperBoundInclusiveAtNinetyPercent) {
    EXPECT_TRUE(build_vocabulary(df_fixture(10, 9)).index_of("term"));
    EXPECT_FALSE(build_vocabulary(df_fixture(10, 10)).index_of("term"));
    EXPECT_FALSE(build_vocabulary(df_fixture(20, 1)).index_of("term"));   // 5%
    EXPECT_FALSE(build_vocabulary(df_fixture(20, 19)).index_of("term"));  // 95%
    EXPECT_TRUE(build_vocabulary(df_fixture(20, 2)).index_of("term"));
    EXPECT_TRUE(build_vocabulary(df_fixture(20, 18)).index_of("term"));
}

TEST(Vocabulary, IdfAtHalf) {
    auto v = build_vocabulary(df_fixture(10, 5));
    EXPECT_NEAR(v.idf[*v.index_of("term")], 0.6931471805599453, 1e-12);
}

TEST(Vocabulary, SortedAndErrors) {
    auto v = build_vocabulary(docs_of({{"b", "a"}, {"c"}, {"a", "c"}}), {0.0, 1.0});
    EXPECT_EQ(v.terms, (std::vector<std::string>{"a", "b", "c"}));
    try {
        build_vocabulary(docs_of({{"x"}, {"x"}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "EmptyVocabulary");
    }
    try {
        build_vocabulary({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NoDocuments");
    }
}

TEST(Vectorize, ScalingAndClamping) {
    auto vocab = build_vocabulary(df_fixture(10, 5));
    const std::size_t col = *vocab.index_of("term");

    std::vector<std::string> three(3, "term");
    auto raw = tfidf(three, vocab);
    EXPECT_NEAR(raw[col], 3 * std::log(2.0), 1e-12);
    ColumnMaxima maxima{std::vector<double>(vocab.size(), 0.0)};
    maxima.values[col] = 3 * std::log(2.0);
    EXPECT_DOUBLE_EQ(vectorize(three, vocab, &maxima)[col], 1.0);

    maxima.values[col] = 5 * std::log(2.0);
    std::vector<std::string> ten(10, "term");
    EXPECT_DOUBLE_EQ(vectorize(ten, vocab, &maxima)[col], 1.0);
    std::vector<std::string> two(2, "term");
    EXPECT_NEAR(vectorize(two, vocab, &maxima)[col], 0.4, 1e-12);

    auto zero = vectorize(std::vector<std::string>{"unknown"}, vocab, &maxima);
    EXPECT_TRUE(std::all_of(zero.begin(), zero.end(), [](double x) { return x == 0.0; }));

    try {
        vectorize(three, vocab, nullptr);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NormStatsMissing");
    }
}

TEST(Vectorize, MatchesBruteForceOnRandomCorpora) {
    Rng rng(2024);
    for (int corpus = 0; corpus < 30; ++corpus) {
        const std::size_t n_docs = 5 + rng.below(26);
        const std::size_t n_terms = 3 + rng.below(20);
        std::vector<std::vector<std::string>> tokens(n_docs);
        for (auto& doc : tokens) {
            std::size_t len = rng.below(25);
            for (std::size_t i = 0; i < len; ++i) {
                // Skewed draw so that some terms fall outside the band.
                std::size_t t = static_cast<std::size_t>(n_terms * rng.uniform() * rng.uniform());
                doc.push_back("t" + std::to_string(t));
            }
        }
        const auto expect = oracle::tfidf(tokens, 0.10, 0.90);
        if (expect.terms.empty()) continue;
        auto docs = docs_of(tokens);
        auto vocab = build_vocabulary(docs);
        ASSERT_EQ(vocab.terms, expect.terms) << "corpus " << corpus;
        for (std::size_t c = 0; c < vocab.size(); ++c) EXPECT_NEAR(vocab.idf[c], expect.idf[c], 1e-9);
        auto batch = vectorize_fit(docs, vocab);
        ASSERT_EQ(batch.rows.size(), n_docs);
        for (std::size_t i = 0; i < n_docs; ++i)
            for (std::size_t c = 0; c < vocab.size(); ++c)
                ASSERT_NEAR(batch.rows[i][c], expect.scaled[i][c], 1e-9) << "corpus " << corpus;
        for (std::size_t i = 0; i < n_docs; ++i) {
            auto again = vectorize(tokens[i], vocab, &batch.maxima);
            for (std::size_t c = 0; c < vocab.size(); ++c) EXPECT_NEAR(again[c], batch.rows[i][c], 1e-12);
        }
    }
}

TEST(Vocabulary, JsonRoundTrip) {
    auto docs = df_fixture(10, 4);
    auto vocab = build_vocabulary(docs);
    auto batch = vectorize_fit(docs, vocab);
    ColumnMaxima back_max;
    auto back = vocabulary_from_json(vocabulary_to_json(vocab, &batch.maxima), &back_max);
    EXPECT_EQ(back, vocab);
    EXPECT_EQ(back_max, batch.maxima);
}
