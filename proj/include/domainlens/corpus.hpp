#pragma once

#include "domainlens/common.hpp"
#include "domainlens/text.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace domainlens {

inline constexpr std::size_t kMaxPagesPerDomain = 100;
inline constexpr int kDisinfoScoreCutoff = 60;

struct LabelEntry {
    Label label = Label::Unlabeled;
    std::string source;
    std::optional<int> score;            // 0..100
    std::optional<long> popularity_rank; // >= 1
};

// Keyed by normalized registrable domain. A std::map keeps iteration
// order canonical.
class LabelSet {
public:
    // Throws Data/DuplicateDomain.
    void add(const std::string& domain, LabelEntry entry);

    const LabelEntry* find(std::string_view domain) const;
    Label label_of(std::string_view domain) const;
    bool contains(std::string_view domain) const { return find(domain) != nullptr; }

    std::size_t size() const { return entries_.size(); }
    std::size_t count(Label l) const;
    const std::map<std::string, LabelEntry, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, LabelEntry, std::less<>> entries_;
};

enum class LabelMode { ExplicitLabels, ScoreThreshold };

// Lowercase, strip scheme, path, port and a leading "www.".
std::string normalize_domain_key(std::string_view raw);

// CSV with header `domain,label,source,score,popularity_rank`.
// ScoreThreshold derives Disinfo iff score < 60; rows without a score keep
// their explicit label and only fail (MissingScore) when they have neither.
LabelSet load_label_list(const std::filesystem::path& path, LabelMode mode);
LabelSet parse_label_list(std::istream& in, LabelMode mode);
void write_label_list(const std::filesystem::path& path, const LabelSet& labels);

struct PageDocument {
    std::string url;
    int depth = 1;     // 1 = landing page
    std::string html;  // valid UTF-8 (invalid input bytes replaced)
};

enum class RecordStatus { Ok, Excluded };
enum class ExclusionReason { None, HttpError, ScrapeBlocked, NonEnglish, Empty };

std::string_view to_string(ExclusionReason r);

struct DomainRecord {
    std::string domain;
    Label label = Label::Unlabeled;
    std::vector<PageDocument> pages;
    RecordStatus status = RecordStatus::Ok;
    ExclusionReason reason = ExclusionReason::None;
    std::size_t unreadable_pages = 0;

    bool ok() const { return status == RecordStatus::Ok; }
    void exclude(ExclusionReason why) {
        status = RecordStatus::Excluded;
        reason = why;
        pages.clear();
    }
};

struct LoadStats {
    std::size_t domains = 0;
    std::size_t unreadable_pages = 0;
};

// <root>/<domain>/manifest.json + <root>/<domain>/pages/*.html.
// Records come back sorted by domain. http_status >= 400 excludes the
// domain (HttpError), `scrape_blocked: true` excludes it (ScrapeBlocked),
// and zero readable pages excludes it (Empty). Pages beyond 100 are
// dropped from the tail of the manifest list.
std::vector<DomainRecord> load_corpus(const std::filesystem::path& root, const LabelSet& labels,
                                      std::size_t workers = 1, LoadStats* stats = nullptr);

// Reads one domain directory; throws Data/MissingManifest.
DomainRecord load_domain(const std::filesystem::path& dir, const LabelSet& labels);

// Writes records in the on-disk layout that load_corpus reads. Excluded
// records get a manifest with their status and no pages.
void write_corpus(const std::filesystem::path& root, const std::vector<DomainRecord>& records);

inline constexpr double kMinStopwordCoverage = 0.05;

// Marks Ok records whose visible text has stopword coverage below 5% as
// Excluded(NonEnglish). Returns the number of records flagged.
std::size_t flag_non_english(std::vector<DomainRecord>& records, const StopwordSet& stopwords,
                             double min_coverage = kMinStopwordCoverage);

}  // namespace domainlens
