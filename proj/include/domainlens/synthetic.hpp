#pragma once

#include "domainlens/corpus.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace domainlens {

// Planted-signal corpus generator. Disinfo pages over-sample one set of
// signal words and info pages another, in both meta tags and body text;
// cross-domain links pick a same-class target with probability `homophily`
// (applied to both classes), otherwise an other-class target.
struct SyntheticCorpusConfig {
    std::size_t n_info = 414;
    std::size_t n_disinfo = 186;
    std::size_t vocab_size = 1500;
    std::size_t signal_terms_per_class = 30;
    double homophily = 0.8;
    std::size_t pages_per_domain = 3;
    std::uint64_t seed = 1;

    std::size_t links_per_page = 4;
    // Chance that a domain's vocabulary includes each own-class signal word,
    // and each other-class signal word.
    double signal_rate = 0.35;
    double cross_signal_rate = 0.08;
    // Share of body/meta word slots filled from the domain's signal words.
    double signal_density = 0.12;
    // Sizes of fully mutually-linked disinfo networks (clone sites sharing a
    // template), carved out of the disinfo domains.
    std::vector<std::size_t> clone_networks;

    // Throws Config/InvalidConfig.
    void validate() const;
};

struct SyntheticCorpus {
    std::vector<DomainRecord> records;  // sorted by domain
    LabelSet labels;
    // Clone-network id for every disinfo domain; domains outside a clone
    // network are their own singleton network.
    std::map<std::string, std::string> network_of;
    std::vector<std::string> background_words;
    std::array<std::vector<std::string>, 2> signal_words;  // [0] info, [1] disinfo
    SyntheticCorpusConfig config;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& cfg);

// One more domain drawn from the same word model as `corpus`, linking into
// the corpus with the configured homophily. Not added to corpus.labels.
DomainRecord generate_extra_domain(const SyntheticCorpus& corpus, const std::string& domain, Label label,
                                   std::uint64_t seed);

}  // namespace domainlens
