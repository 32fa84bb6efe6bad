#include "domainlens/synthetic.hpp"

#include "domainlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace domainlens {

namespace {

constexpr std::string_view kConsonants = "bcdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::string_view kTlds[] = {"com", "org", "net", "news", "co.uk", "info"};
constexpr std::string_view kFiller[] = {"the", "and", "of", "to", "in", "a", "is", "for", "on", "that", "with", "as"};

std::string make_word(Rng& rng, std::size_t syllables) {
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
        w.push_back(kConsonants[rng.below(kConsonants.size())]);
        w.push_back(kVowels[rng.below(kVowels.size())]);
    }
    w.push_back(kConsonants[rng.below(kConsonants.size())]);
    return w;
}

std::vector<std::string> unique_words(Rng& rng, std::size_t count, std::set<std::string>& taken) {
    std::vector<std::string> out;
    const auto& stop = english_stopwords();
    while (out.size() < count) {
        std::string w = make_word(rng, 2 + rng.below(2));
        if (stop.count(w) || !taken.insert(w).second) continue;
        out.push_back(std::move(w));
    }
    return out;
}

// Per-domain word model: which signal words the domain uses.
struct DomainProfile {
    std::string domain;
    Label label = Label::Info;
    std::vector<std::string> signal;
    std::vector<std::string> clone_peers;
};

class PageWriter {
public:
    PageWriter(const SyntheticCorpus& corpus, const std::vector<double>& zipf_cdf,
               const std::array<std::vector<std::string>, 2>& targets_by_class)
        : corpus_(corpus), cdf_(zipf_cdf), targets_(targets_by_class) {}

    DomainRecord make_record(const DomainProfile& profile, Rng& rng) const {
        const auto& cfg = corpus_.config;
        DomainRecord rec;
        rec.domain = profile.domain;
        rec.label = profile.label;
        for (std::size_t p = 0; p < cfg.pages_per_domain; ++p) {
            PageDocument page;
            page.depth = p == 0 ? 1 : 2;
            page.url = p == 0 ? "https://www." + profile.domain + "/"
                              : "https://www." + profile.domain + "/p/" + std::to_string(p + 1) + ".html";
            page.html = page_html(profile, p, rng);
            rec.pages.push_back(std::move(page));
        }
        return rec;
    }

private:
    const SyntheticCorpus& corpus_;
    const std::vector<double>& cdf_;
    const std::array<std::vector<std::string>, 2>& targets_;

    const std::string& background(Rng& rng) const {
        double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
        return corpus_.background_words[idx];
    }

    std::string words(const DomainProfile& profile, std::size_t count, double filler_rate, Rng& rng) const {
        std::string out;
        for (std::size_t i = 0; i < count; ++i) {
            if (!out.empty()) out.push_back(' ');
            double u = rng.uniform();
            if (u < filler_rate) {
                out += kFiller[rng.below(std::size(kFiller))];
            } else if (!profile.signal.empty() && rng.bernoulli(corpus_.config.signal_density)) {
                out += profile.signal[rng.below(profile.signal.size())];
            } else {
                out += background(rng);
            }
        }
        return out;
    }

    std::string pick_target(const DomainProfile& profile, Rng& rng) const {
        const std::size_t own = profile.label == Label::Disinfo ? 1 : 0;
        const std::size_t cls = rng.bernoulli(corpus_.config.homophily) ? own : 1 - own;
        const auto& pool = targets_[cls].empty() ? targets_[1 - cls] : targets_[cls];
        for (int attempt = 0; attempt < 16; ++attempt) {
            const std::string& t = pool[rng.below(pool.size())];
            if (t != profile.domain) return t;
        }
        return {};
    }

    std::string page_html(const DomainProfile& profile, std::size_t page_index, Rng& rng) const {
        const auto& cfg = corpus_.config;
        std::ostringstream h;
        h << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
        h << "<title>" << words(profile, 5, 0.1, rng) << "</title>\n";
        struct MetaSpec {
            const char* attr;
            const char* name;
            double rate;
        };
        static constexpr MetaSpec kMeta[] = {
            {"name", "keywords", 0.62},         {"name", "description", 0.93},
            {"property", "og:title", 0.86},     {"property", "og:keywords", 0.01},
            {"property", "og:description", 0.84}, {"name", "twitter:description", 0.59},
            {"name", "twitter:title", 0.60},
        };
        for (const auto& m : kMeta) {
            if (!rng.bernoulli(m.rate)) continue;
            h << "<meta " << m.attr << "=\"" << m.name << "\" content=\"" << words(profile, 6 + rng.below(8), 0.15, rng)
              << "\">\n";
        }
        h << "<style>body { font-family: sans-serif; } .stylerule { color: #333; }</style>\n";
        h << "<script>var trackerid = \"scriptbodytoken\"; window.dataLayer = [];</script>\n";
        h << "</head>\n<body>\n<nav><a href=\"/\">Home</a> <a href=\"/p/2.html\">More</a> <a href=\"#top\">Top</a></nav>\n";
        h << "<article>\n";
        const std::size_t paragraphs = 3 + rng.below(3);
        for (std::size_t p = 0; p < paragraphs; ++p) h << "<p>" << words(profile, 25 + rng.below(20), 0.3, rng) << "</p>\n";
        h << "</article>\n<aside>\n";
        for (std::size_t l = 0; l < cfg.links_per_page; ++l) {
            std::string target = pick_target(profile, rng);
            if (target.empty()) continue;
            h << "<a href=\"https://www." << target << "/story/" << rng.below(1000) << "\">"
              << words(profile, 3, 0.0, rng) << "</a>\n";
        }
        if (page_index == 0) {
            for (const auto& peer : profile.clone_peers) h << "<a href=\"https://" << peer << "/\">" << peer << "</a>\n";
        }
        h << "</aside>\n<footer><a href=\"mailto:editor@" << profile.domain << "\">Contact</a> "
          << "<a href=\"javascript:void(0)\">Share</a></footer>\n</body>\n</html>\n";
        return h.str();
    }
};

std::vector<double> zipf_cdf(std::size_t n) {
    std::vector<double> cdf(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), 0.9);
        cdf[r] = total;
    }
    for (auto& c : cdf) c /= total;
    return cdf;
}

std::vector<std::string> pick_signal(const SyntheticCorpus& corpus, Label label, Rng& rng) {
    const std::size_t own = label == Label::Disinfo ? 1 : 0;
    std::vector<std::string> chosen;
    for (std::size_t cls = 0; cls < 2; ++cls) {
        double rate = cls == own ? corpus.config.signal_rate : corpus.config.cross_signal_rate;
        for (const auto& w : corpus.signal_words[cls])
            if (rng.bernoulli(rate)) chosen.push_back(w);
    }
    return chosen;
}

std::array<std::vector<std::string>, 2> targets_of(const SyntheticCorpus& corpus) {
    std::array<std::vector<std::string>, 2> targets;
    for (const auto& [domain, entry] : corpus.labels.entries())
        targets[entry.label == Label::Disinfo ? 1 : 0].push_back(domain);
    return targets;
}

}  // namespace

void SyntheticCorpusConfig::validate() const {
    auto fail = [](const std::string& why) { throw config_error("InvalidConfig", why); };
    if (n_info == 0 || n_disinfo == 0) fail("n_info and n_disinfo must be > 0");
    if (vocab_size == 0 || signal_terms_per_class == 0 || pages_per_domain == 0) fail("counts must be > 0");
    if (pages_per_domain > kMaxPagesPerDomain) fail("pages_per_domain exceeds 100");
    if (!(homophily >= 0.0 && homophily <= 1.0)) fail("homophily must lie in [0,1]");
    for (double r : {signal_rate, cross_signal_rate, signal_density})
        if (!(r >= 0.0 && r <= 1.0)) fail("rates must lie in [0,1]");
    std::size_t cloned = 0;
    for (auto s : clone_networks) {
        if (s < 2) fail("clone networks need at least 2 domains");
        cloned += s;
    }
    if (cloned > n_disinfo) fail("clone networks exceed n_disinfo");
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SyntheticCorpus corpus;
    corpus.config = cfg;

    std::set<std::string> taken;
    corpus.background_words = unique_words(rng, cfg.vocab_size, taken);
    corpus.signal_words[0] = unique_words(rng, cfg.signal_terms_per_class, taken);
    corpus.signal_words[1] = unique_words(rng, cfg.signal_terms_per_class, taken);

    // Domain names, then a random class assignment so names carry no signal.
    const std::size_t total = cfg.n_info + cfg.n_disinfo;
    std::set<std::string> names;
    std::vector<std::string> domains;
    while (domains.size() < total) {
        std::string name = make_word(rng, 2 + rng.below(2)) + "." + std::string(kTlds[rng.below(std::size(kTlds))]);
        if (names.insert(name).second) domains.push_back(name);
    }
    rng.shuffle(domains);

    std::vector<DomainProfile> profiles(total);
    for (std::size_t i = 0; i < total; ++i) {
        profiles[i].domain = domains[i];
        profiles[i].label = i < cfg.n_disinfo ? Label::Disinfo : Label::Info;
    }
    std::vector<long> ranks(cfg.n_info);
    for (std::size_t i = 0; i < cfg.n_info; ++i) ranks[i] = static_cast<long>(i + 1);
    rng.shuffle(ranks);
    for (std::size_t i = 0; i < total; ++i) {
        LabelEntry e;
        if (profiles[i].label == Label::Disinfo) {
            e.label = Label::Disinfo;
            e.source = "synthetic-rating";
            e.score = static_cast<int>(rng.below(kDisinfoScoreCutoff));
        } else {
            e.label = Label::Info;
            e.source = "synthetic-popularity";
            e.popularity_rank = ranks[i - cfg.n_disinfo];
        }
        corpus.labels.add(profiles[i].domain, std::move(e));
    }

    for (auto& p : profiles) p.signal = pick_signal(corpus, p.label, rng);

    // Clone networks share one signal profile and link each other mutually.
    std::size_t next = 0;
    for (std::size_t n = 0; n < cfg.clone_networks.size(); ++n) {
        const std::size_t size = cfg.clone_networks[n];
        const std::string id = "network-" + std::to_string(n + 1);
        for (std::size_t k = 0; k < size; ++k) {
            auto& member = profiles[next + k];
            member.signal = profiles[next].signal;
            corpus.network_of[member.domain] = id;
            for (std::size_t o = 0; o < size; ++o)
                if (o != k) member.clone_peers.push_back(profiles[next + o].domain);
        }
        next += size;
    }
    for (const auto& p : profiles)
        if (p.label == Label::Disinfo && !corpus.network_of.count(p.domain)) corpus.network_of[p.domain] = p.domain;

    const auto cdf = zipf_cdf(cfg.vocab_size);
    const auto targets = targets_of(corpus);
    PageWriter writer(corpus, cdf, targets);
    for (const auto& p : profiles) corpus.records.push_back(writer.make_record(p, rng));
    std::sort(corpus.records.begin(), corpus.records.end(),
              [](const DomainRecord& a, const DomainRecord& b) { return a.domain < b.domain; });
    return corpus;
}

DomainRecord generate_extra_domain(const SyntheticCorpus& corpus, const std::string& domain, Label label,
                                   std::uint64_t seed) {
    Rng rng(seed);
    DomainProfile profile;
    profile.domain = domain;
    profile.label = label == Label::Disinfo ? Label::Disinfo : Label::Info;
    profile.signal = pick_signal(corpus, profile.label, rng);
    const auto cdf = zipf_cdf(corpus.config.vocab_size);
    const auto targets = targets_of(corpus);
    PageWriter writer(corpus, cdf, targets);
    DomainRecord rec = writer.make_record(profile, rng);
    rec.label = Label::Unlabeled;
    return rec;
}

}  // namespace domainlens
