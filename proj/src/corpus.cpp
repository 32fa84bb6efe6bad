#include "domainlens/corpus.hpp"

#include "domainlens/error.hpp"
#include "domainlens/html.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace domainlens {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back().push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back().push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back().push_back(c);
        }
    }
    return fields;
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    T value{};
    std::istringstream in{std::string(s)};
    in >> value;
    if (!in || !in.eof()) throw std::invalid_argument("not an integer");
    return value;
}

std::string read_file(const fs::path& p, bool& ok) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    ok = static_cast<bool>(in) || in.eof();
    return ss.str();
}

}  // namespace

std::string_view to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::HttpError: return "http_error";
        case ExclusionReason::ScrapeBlocked: return "scrape_blocked";
        case ExclusionReason::NonEnglish: return "non_english";
        case ExclusionReason::Empty: return "empty";
        default: return "none";
    }
}

void LabelSet::add(const std::string& domain, LabelEntry entry) {
    if (!entries_.emplace(domain, std::move(entry)).second) throw data_error("DuplicateDomain", domain);
}

const LabelEntry* LabelSet::find(std::string_view domain) const {
    auto it = entries_.find(domain);
    return it == entries_.end() ? nullptr : &it->second;
}

Label LabelSet::label_of(std::string_view domain) const {
    const auto* e = find(domain);
    return e ? e->label : Label::Unlabeled;
}

std::size_t LabelSet::count(Label l) const {
    std::size_t n = 0;
    for (const auto& [_, e] : entries_) n += e.label == l;
    return n;
}

std::string normalize_domain_key(std::string_view raw) {
    std::string s = to_lower_ascii(trim(raw));
    if (auto p = s.find("://"); p != std::string::npos) s.erase(0, p + 3);
    if (auto p = s.find_first_of("/?#"); p != std::string::npos) s.erase(p);
    if (auto p = s.rfind('@'); p != std::string::npos) s.erase(0, p + 1);
    if (auto p = s.find(':'); p != std::string::npos) s.erase(p);
    while (!s.empty() && s.back() == '.') s.pop_back();
    if (s.rfind("www.", 0) == 0) s.erase(0, 4);
    return s;
}

LabelSet parse_label_list(std::istream& in, LabelMode mode) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("MalformedRow", "line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line) != "domain,label,source,score,popularity_rank")
        throw data_error("MalformedRow", "line 1: header must be domain,label,source,score,popularity_rank");

    LabelSet set;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        const std::string where = "line " + std::to_string(lineno);
        if (f.size() != 5) throw data_error("MalformedRow", where + ": expected 5 fields");
        std::string domain = normalize_domain_key(f[0]);
        if (domain.empty()) throw data_error("MalformedRow", where + ": empty domain");

        LabelEntry e;
        e.source = std::string(trim(f[2]));
        try {
            e.score = parse_integer<int>(f[3]);
            e.popularity_rank = parse_integer<long>(f[4]);
        } catch (const std::invalid_argument&) {
            throw data_error("MalformedRow", where + ": non-integer score or rank");
        }
        if (e.score && (*e.score < 0 || *e.score > 100)) throw data_error("MalformedRow", where + ": score outside 0..100");
        if (e.popularity_rank && *e.popularity_rank < 1) throw data_error("MalformedRow", where + ": rank must be >= 1");

        std::string label = to_lower_ascii(trim(f[1]));
        Label explicit_label = Label::Unlabeled;
        if (label == "info") {
            explicit_label = Label::Info;
        } else if (label == "disinfo") {
            explicit_label = Label::Disinfo;
        } else if (!label.empty()) {
            throw data_error("MalformedRow", where + ": label must be info, disinfo or empty");
        }

        if (mode == LabelMode::ScoreThreshold) {
            if (e.score) {
                e.label = *e.score < kDisinfoScoreCutoff ? Label::Disinfo : Label::Info;
            } else if (is_labeled(explicit_label)) {
                e.label = explicit_label;
            } else {
                throw data_error("MissingScore", where + ": " + domain);
            }
        } else {
            if (!is_labeled(explicit_label)) throw data_error("MalformedRow", where + ": missing label");
            e.label = explicit_label;
        }
        set.add(domain, std::move(e));
    }
    return set;
}

LabelSet load_label_list(const fs::path& path, LabelMode mode) {
    std::ifstream in(path);
    if (!in) throw config_error("MissingFile", path.string());
    return parse_label_list(in, mode);
}

void write_label_list(const fs::path& path, const LabelSet& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("UnwritablePath", path.string());
    out << "domain,label,source,score,popularity_rank\n";
    for (const auto& [domain, e] : labels.entries()) {
        out << domain << ',' << (is_labeled(e.label) ? to_string(e.label) : "") << ',' << e.source << ',';
        if (e.score) out << *e.score;
        out << ',';
        if (e.popularity_rank) out << *e.popularity_rank;
        out << '\n';
    }
}

DomainRecord load_domain(const fs::path& dir, const LabelSet& labels) {
    const fs::path manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw data_error("MissingManifest", dir.filename().string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw data_error("MalformedManifest", manifest_path.string() + ": " + e.what());
    }

    DomainRecord rec;
    rec.domain = normalize_domain_key(manifest.value("domain", dir.filename().string()));
    rec.label = labels.label_of(rec.domain);

    int status = manifest.value("http_status", 200);
    if (status >= 400) {
        rec.exclude(ExclusionReason::HttpError);
        return rec;
    }
    if (manifest.value("scrape_blocked", false)) {
        rec.exclude(ExclusionReason::ScrapeBlocked);
        return rec;
    }
    for (const auto& p : manifest.value("pages", json::array())) {
        if (rec.pages.size() >= kMaxPagesPerDomain) break;
        PageDocument page;
        page.url = p.value("url", std::string{});
        page.depth = p.value("depth", 1);
        bool ok = false;
        std::string bytes = read_file(dir / p.value("file", std::string{}), ok);
        if (!ok || page.url.empty()) {
            ++rec.unreadable_pages;
            continue;
        }
        page.html = sanitize_utf8(bytes);
        rec.pages.push_back(std::move(page));
    }
    if (rec.pages.empty()) rec.exclude(ExclusionReason::Empty);
    return rec;
}

std::vector<DomainRecord> load_corpus(const fs::path& root, const LabelSet& labels, std::size_t workers,
                                      LoadStats* stats) {
    if (!fs::is_directory(root)) throw config_error("MissingCorpusRoot", root.string());
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());

    std::vector<DomainRecord> records(dirs.size());
    parallel_for(dirs.size(), workers, [&](std::size_t i) { records[i] = load_domain(dirs[i], labels); });
    std::stable_sort(records.begin(), records.end(),
                     [](const DomainRecord& a, const DomainRecord& b) { return a.domain < b.domain; });
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].domain == records[i - 1].domain) throw data_error("DuplicateDomain", records[i].domain);
    if (stats) {
        stats->domains = records.size();
        stats->unreadable_pages = 0;
        for (const auto& r : records) stats->unreadable_pages += r.unreadable_pages;
    }
    return records;
}

void write_corpus(const fs::path& root, const std::vector<DomainRecord>& records) {
    fs::create_directories(root);
    for (const auto& rec : records) {
        fs::path dir = root / rec.domain;
        fs::create_directories(dir / "pages");
        json manifest;
        manifest["domain"] = rec.domain;
        manifest["http_status"] = rec.reason == ExclusionReason::HttpError ? 404 : 200;
        if (rec.reason == ExclusionReason::ScrapeBlocked) manifest["scrape_blocked"] = true;
        json pages = json::array();
        for (std::size_t i = 0; i < rec.pages.size(); ++i) {
            std::ostringstream name;
            name << "pages/" << std::setw(4) << std::setfill('0') << i + 1 << ".html";
            std::ofstream out(dir / name.str(), std::ios::binary);
            out << rec.pages[i].html;
            pages.push_back({{"url", rec.pages[i].url}, {"depth", rec.pages[i].depth}, {"file", name.str()}});
        }
        manifest["pages"] = std::move(pages);
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << '\n';
    }
}

std::size_t flag_non_english(std::vector<DomainRecord>& records, const StopwordSet& stopwords, double min_coverage) {
    std::size_t flagged = 0;
    for (auto& rec : records) {
        if (!rec.ok()) continue;
        std::string text;
        for (const auto& page : rec.pages) {
            text += extract_visible_text(page.html);
            text.push_back(' ');
        }
        if (stopword_coverage(text, stopwords) < min_coverage) {
            rec.exclude(ExclusionReason::NonEnglish);
            ++flagged;
        }
    }
    return flagged;
}

}  // namespace domainlens
