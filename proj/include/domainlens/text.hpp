#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace domainlens {

enum class TextChannel { Meta, Content };

std::string_view to_string(TextChannel c);

using StopwordSet = std::unordered_set<std::string>;

// The fixed English list compiled into the library (data/stopwords_en.txt
// holds the same words).
const StopwordSet& english_stopwords();

std::string porter_stem(std::string_view word);

// Maps a stem to its lemma. The default is a suffix rule set (plural -s,
// -ies -> y); a dictionary-backed lemmatizer can be plugged in instead.
using Lemmatizer = std::function<std::string(std::string_view)>;

std::string rule_lemmatize(std::string_view stem);

// Lowercase, replace every byte outside [a-z] by a space, split on
// whitespace. This is the token stream before stopword removal.
std::vector<std::string> raw_tokens(std::string_view text);

// raw_tokens -> drop stopwords -> Porter stem -> lemmatize, dropping empty
// tokens. Output tokens use only the letters a-z.
std::vector<std::string> preprocess(std::string_view text, const StopwordSet& stopwords,
                                    const Lemmatizer& lemmatize = rule_lemmatize);

// Fraction of raw tokens that are stopwords; 0 for empty text.
double stopword_coverage(std::string_view text, const StopwordSet& stopwords);

struct TokenizedDoc {
    std::string domain;
    TextChannel channel = TextChannel::Meta;
    std::vector<std::string> tokens;
};

struct DfBand {
    double min_frac = 0.10;
    double max_frac = 0.90;
    bool operator==(const DfBand&) const = default;
};

// Terms whose document frequency falls inside the band, sorted
// lexicographically, with idf = ln(n_docs / df).
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<std::size_t> df;
    std::vector<double> idf;
    std::size_t n_docs = 0;
    DfBand band;

    std::size_t size() const { return terms.size(); }
    // Column of `term`, or nullopt when out of vocabulary.
    std::optional<std::size_t> index_of(std::string_view term) const;

    bool operator==(const Vocabulary&) const = default;
};

// df counts distinct-document presence. Throws Data/EmptyVocabulary when
// every term falls outside the band, Data/NoDocuments for empty input.
Vocabulary build_vocabulary(std::span<const TokenizedDoc> docs, DfBand band = {});

// Per-column maxima of raw tf-idf values over a fitting batch.
struct ColumnMaxima {
    std::vector<double> values;
    bool operator==(const ColumnMaxima&) const = default;
};

// term_count * idf per vocabulary column; out-of-vocabulary tokens ignored.
std::vector<double> tfidf(std::span<const std::string> tokens, const Vocabulary& vocab);

// Divides each column by its fitted maximum and clamps to [0, 1]. Columns
// with a zero maximum map to 0.
std::vector<double> scale_columns(std::span<const double> raw, const ColumnMaxima& maxima);

// Transform mode: needs fitted maxima (Data/NormStatsMissing otherwise).
std::vector<double> vectorize(std::span<const std::string> tokens, const Vocabulary& vocab, const ColumnMaxima* maxima);

struct FittedBatch {
    std::vector<std::vector<double>> rows;  // scaled, each component in [0,1]
    ColumnMaxima maxima;
};

// Fit mode: computes column maxima over the batch, then scales it.
FittedBatch vectorize_fit(std::span<const TokenizedDoc> docs, const Vocabulary& vocab);

// {version, n_docs, terms:[{t, df, idf}], column_max:[...]}
nlohmann::json vocabulary_to_json(const Vocabulary& vocab, const ColumnMaxima* maxima);
Vocabulary vocabulary_from_json(const nlohmann::json& j, ColumnMaxima* maxima);

}  // namespace domainlens
