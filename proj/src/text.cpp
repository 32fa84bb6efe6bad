#include "domainlens/text.hpp"

#include "domainlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace domainlens {

namespace {

// English stopword list (179 entries, apostrophe forms included; those can
// never match a token because apostrophes are stripped, but keeping them
// keeps the list identical to its published form).
constexpr std::string_view kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've", "you'll", "you'd",
    "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "she's", "her", "hers",
    "herself", "it", "it's", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
    "who", "whom", "this", "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be", "been",
    "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if",
    "or", "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out",
    "on", "off", "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why",
    "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "don't",
    "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn",
    "couldn't", "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't",
    "isn", "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string_view to_string(TextChannel c) { return c == TextChannel::Meta ? "meta" : "content"; }

const StopwordSet& english_stopwords() {
    static const StopwordSet set = [] {
        StopwordSet s;
        for (std::string_view w : kStopwords) s.emplace(w);
        return s;
    }();
    return set;
}

std::string rule_lemmatize(std::string_view stem) {
    if (stem.size() > 4 && ends_with(stem, "ies")) return std::string(stem.substr(0, stem.size() - 3)) + "y";
    if (stem.size() > 3 && ends_with(stem, "s") && !ends_with(stem, "ss") && !ends_with(stem, "us") &&
        !ends_with(stem, "is"))
        return std::string(stem.substr(0, stem.size() - 1));
    return std::string(stem);
}

std::vector<std::string> raw_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        char c = ch;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c >= 'a' && c <= 'z') {
            current.push_back(c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> preprocess(std::string_view text, const StopwordSet& stopwords, const Lemmatizer& lemmatize) {
    std::vector<std::string> out;
    for (auto& tok : raw_tokens(text)) {
        if (stopwords.count(tok)) continue;
        std::string lemma = lemmatize(porter_stem(tok));
        if (!lemma.empty()) out.push_back(std::move(lemma));
    }
    return out;
}

double stopword_coverage(std::string_view text, const StopwordSet& stopwords) {
    auto tokens = raw_tokens(text);
    if (tokens.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += stopwords.count(t);
    return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - terms.begin());
}

Vocabulary build_vocabulary(std::span<const TokenizedDoc> docs, DfBand band) {
    if (docs.empty()) throw data_error("NoDocuments", "cannot build a vocabulary from zero documents");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::vector<std::string> distinct(doc.tokens.begin(), doc.tokens.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (auto& t : distinct) ++df[t];
    }
    Vocabulary vocab;
    vocab.n_docs = docs.size();
    vocab.band = band;
    const double n = static_cast<double>(docs.size());
    for (const auto& [term, count] : df) {
        double frac = static_cast<double>(count) / n;
        if (frac < band.min_frac || frac > band.max_frac) continue;
        vocab.terms.push_back(term);
        vocab.df.push_back(count);
        vocab.idf.push_back(std::log(n / static_cast<double>(count)));
    }
    if (vocab.terms.empty())
        throw data_error("EmptyVocabulary", "all " + std::to_string(df.size()) + " terms fall outside the document-frequency band");
    return vocab;
}

std::vector<double> tfidf(std::span<const std::string> tokens, const Vocabulary& vocab) {
    std::vector<double> counts(vocab.size(), 0.0);
    for (const auto& t : tokens)
        if (auto idx = vocab.index_of(t)) counts[*idx] += 1.0;
    for (std::size_t c = 0; c < counts.size(); ++c) counts[c] *= vocab.idf[c];
    return counts;
}

std::vector<double> scale_columns(std::span<const double> raw, const ColumnMaxima& maxima) {
    if (maxima.values.size() != raw.size())
        throw invariant_error("NormStatsMismatch", "column maxima width differs from vector width");
    std::vector<double> out(raw.size(), 0.0);
    for (std::size_t c = 0; c < raw.size(); ++c) {
        if (maxima.values[c] <= 0.0) continue;
        out[c] = std::clamp(raw[c] / maxima.values[c], 0.0, 1.0);
    }
    return out;
}

std::vector<double> vectorize(std::span<const std::string> tokens, const Vocabulary& vocab, const ColumnMaxima* maxima) {
    if (!maxima) throw data_error("NormStatsMissing", "transform-mode vectorization needs fitted column maxima");
    return scale_columns(tfidf(tokens, vocab), *maxima);
}

FittedBatch vectorize_fit(std::span<const TokenizedDoc> docs, const Vocabulary& vocab) {
    std::vector<std::vector<double>> raw;
    raw.reserve(docs.size());
    FittedBatch batch;
    batch.maxima.values.assign(vocab.size(), 0.0);
    for (const auto& doc : docs) {
        raw.push_back(tfidf(doc.tokens, vocab));
        for (std::size_t c = 0; c < vocab.size(); ++c)
            batch.maxima.values[c] = std::max(batch.maxima.values[c], raw.back()[c]);
    }
    batch.rows.reserve(raw.size());
    for (const auto& r : raw) batch.rows.push_back(scale_columns(r, batch.maxima));
    return batch;
}

nlohmann::json vocabulary_to_json(const Vocabulary& vocab, const ColumnMaxima* maxima) {
    nlohmann::json j;
    j["version"] = 1;
    j["n_docs"] = vocab.n_docs;
    j["df_band"] = {vocab.band.min_frac, vocab.band.max_frac};
    auto& terms = j["terms"] = nlohmann::json::array();
    for (std::size_t i = 0; i < vocab.size(); ++i)
        terms.push_back({{"t", vocab.terms[i]}, {"df", vocab.df[i]}, {"idf", vocab.idf[i]}});
    j["column_max"] = maxima ? nlohmann::json(maxima->values) : nlohmann::json::array();
    return j;
}

Vocabulary vocabulary_from_json(const nlohmann::json& j, ColumnMaxima* maxima) {
    if (j.value("version", 0) != 1) throw data_error("UnsupportedVersion", "vocabulary JSON version");
    Vocabulary vocab;
    vocab.n_docs = j.at("n_docs").get<std::size_t>();
    if (j.contains("df_band")) {
        vocab.band.min_frac = j["df_band"].at(0).get<double>();
        vocab.band.max_frac = j["df_band"].at(1).get<double>();
    }
    for (const auto& t : j.at("terms")) {
        vocab.terms.push_back(t.at("t").get<std::string>());
        vocab.df.push_back(t.at("df").get<std::size_t>());
        vocab.idf.push_back(t.at("idf").get<double>());
    }
    if (!std::is_sorted(vocab.terms.begin(), vocab.terms.end()))
        throw data_error("MalformedVocabulary", "terms are not in canonical order");
    if (maxima) {
        maxima->values = j.at("column_max").get<std::vector<double>>();
        if (!maxima->values.empty() && maxima->values.size() != vocab.size())
            throw data_error("MalformedVocabulary", "column_max width differs from term count");
    }
    return vocab;
}

}  // namespace domainlens
