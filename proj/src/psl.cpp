#include "domainlens/psl.hpp"

#include "domainlens/common.hpp"
#include "domainlens/error.hpp"
#include "domainlens/url.hpp"

#include <cstdlib>
#include <fstream>
#include <vector>

namespace domainlens {

PublicSuffixList PublicSuffixList::parse(std::istream& in) { return parse(in, Options{}); }

PublicSuffixList PublicSuffixList::load(const std::filesystem::path& file) { return load(file, Options{}); }

namespace {

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    for (;;) {
        auto dot = host.find('.', start);
        labels.push_back(host.substr(start, dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return labels;
}

std::string join_from(const std::vector<std::string_view>& labels, std::size_t first) {
    std::string out;
    for (std::size_t i = first; i < labels.size(); ++i) {
        if (i > first) out.push_back('.');
        out.append(labels[i]);
    }
    return out;
}

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    for (std::size_t i = 0; i < s.size();) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
        char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
        for (int k = 1; k < len && i + k < s.size(); ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

bool has_non_ascii(std::string_view s) {
    for (unsigned char c : s)
        if (c >= 0x80) return true;
    return false;
}

std::string punycode_host(std::string_view host) {
    std::string out;
    for (auto label : split_labels(host)) {
        if (!out.empty()) out.push_back('.');
        out += punycode_label(label);
    }
    return out;
}

bool is_ip_literal(std::string_view host) {
    if (!host.empty() && host.front() == '[') return true;
    for (char c : host)
        if (!(c == '.' || (c >= '0' && c <= '9'))) return false;
    return !host.empty();
}

}  // namespace

std::string punycode_label(std::string_view utf8_label) {
    if (!has_non_ascii(utf8_label)) return std::string(utf8_label);
    constexpr std::uint32_t base = 36, tmin = 1, tmax = 26, skew = 38, damp = 700;
    auto digit = [](std::uint32_t d) { return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26)); };
    auto adapt = [&](std::uint32_t delta, std::uint32_t points, bool first) {
        delta = first ? delta / damp : delta / 2;
        delta += delta / points;
        std::uint32_t k = 0;
        while (delta > ((base - tmin) * tmax) / 2) {
            delta /= base - tmin;
            k += base;
        }
        return k + (base - tmin + 1) * delta / (delta + skew);
    };

    const auto input = decode_utf8(utf8_label);
    std::string output;
    for (char32_t c : input)
        if (c < 0x80) output.push_back(static_cast<char>(c));
    const auto basic = static_cast<std::uint32_t>(output.size());
    std::uint32_t handled = basic;
    if (basic > 0) output.push_back('-');

    std::uint32_t n = 0x80, delta = 0, bias = 72;
    while (handled < input.size()) {
        std::uint32_t m = 0xFFFFFFFF;
        for (char32_t c : input)
            if (c >= n && c < m) m = c;
        delta += (m - n) * (handled + 1);
        n = m;
        for (char32_t c : input) {
            if (c < n) ++delta;
            if (c == n) {
                std::uint32_t q = delta;
                for (std::uint32_t k = base;; k += base) {
                    std::uint32_t t = k <= bias ? tmin : (k >= bias + tmax ? tmax : k - bias);
                    if (q < t) break;
                    output.push_back(digit(t + (q - t) % (base - t)));
                    q = (q - t) / (base - t);
                }
                output.push_back(digit(q));
                bias = adapt(delta, handled + 1, handled == basic);
                delta = 0;
                ++handled;
            }
        }
        ++delta;
        ++n;
    }
    return "xn--" + output;
}

PublicSuffixList PublicSuffixList::parse(std::istream& in, Options opts) {
    PublicSuffixList psl;
    std::string line;
    bool in_private = false;
    while (std::getline(in, line)) {
        if (line.find("===BEGIN PRIVATE DOMAINS===") != std::string::npos) in_private = true;
        if (line.find("===END PRIVATE DOMAINS===") != std::string::npos) in_private = false;
        if (in_private && !opts.include_private) continue;
        // A rule is the first whitespace-delimited token of a non-comment line.
        std::string_view rule = trim(line);
        if (rule.empty() || rule.rfind("//", 0) == 0) continue;
        auto space = rule.find_first_of(" \t");
        if (space != std::string_view::npos) rule = rule.substr(0, space);
        std::string r = to_lower_ascii(rule);

        auto add = [&](std::unordered_set<std::string>& set, const std::string& value) {
            set.insert(value);
            if (has_non_ascii(value)) set.insert(punycode_host(value));
        };
        if (r.rfind("!", 0) == 0) {
            add(psl.exception_, r.substr(1));
        } else if (r.rfind("*.", 0) == 0) {
            add(psl.wildcard_, r.substr(2));
        } else {
            add(psl.exact_, r);
        }
    }
    return psl;
}

PublicSuffixList PublicSuffixList::load(const std::filesystem::path& file, Options opts) {
    std::ifstream in(file);
    if (!in) throw config_error("MissingPublicSuffixList", file.string());
    return parse(in, opts);
}

std::filesystem::path bundled_psl_path() {
    if (const char* env = std::getenv("DOMAINLENS_PSL"); env && *env) return env;
    return std::filesystem::path(DOMAINLENS_DATA_DIR) / "public_suffix_list.dat";
}

const PublicSuffixList& PublicSuffixList::bundled() {
    static const PublicSuffixList psl = load(bundled_psl_path());
    return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view host_in) const {
    std::string host = to_lower_ascii(host_in);
    if (host.empty() || host.front() == '.') return {};
    auto labels = split_labels(host);
    for (auto l : labels)
        if (l.empty()) return {};

    // Longest matching rule wins; an exception rule strips its leftmost label.
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string candidate = join_from(labels, i);
        if (exception_.count(candidate)) return join_from(labels, i + 1);
        if (exact_.count(candidate)) return candidate;
        if (i + 1 < labels.size() && wildcard_.count(join_from(labels, i + 1))) return candidate;
    }
    return std::string(labels.back());
}

std::optional<std::string> PublicSuffixList::registrable(std::string_view host_in) const {
    std::string host = to_lower_ascii(host_in);
    std::string suffix = public_suffix(host);
    if (suffix.empty() || suffix.size() >= host.size()) return std::nullopt;
    // host = <prefix>.<suffix>; keep the last label of <prefix>.
    std::string_view prefix(host.data(), host.size() - suffix.size() - 1);
    auto dot = prefix.rfind('.');
    std::string_view label = dot == std::string_view::npos ? prefix : prefix.substr(dot + 1);
    return std::string(label) + "." + suffix;
}

std::string registrable_domain(std::string_view url, const PublicSuffixList& psl) {
    auto host = url_host(url);
    if (!host) throw data_error("NoHost", std::string(url));
    if (is_ip_literal(*host)) return *host;
    if (auto reg = psl.registrable(*host)) return *reg;
    return *host;
}

}  // namespace domainlens
