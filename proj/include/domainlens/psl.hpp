#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace domainlens {

// Public-suffix rule set in the publicsuffix.org text format.
//
// Rules are matched label-wise from the right. Wildcard ("*.ck") and
// exception ("!www.ck") rules are supported. Hosts that match no rule fall
// under the implicit "*" rule, so their registrable domain is the last two
// labels. Non-ASCII rules are also indexed in their punycode (xn--) form.
class PublicSuffixList {
public:
    struct Options {
        // The snapshot carries an ICANN section and a private-registry
        // section (blogspot.com, github.io, ...). Most hyperlink analyses
        // want ICANN-only.
        bool include_private = false;
    };

    static PublicSuffixList parse(std::istream& in, Options opts);
    static PublicSuffixList parse(std::istream& in);
    static PublicSuffixList load(const std::filesystem::path& file, Options opts);
    static PublicSuffixList load(const std::filesystem::path& file);

    // The snapshot shipped in data/ (DOMAINLENS_DATA_DIR at build time, or
    // $DOMAINLENS_PSL when set).
    static const PublicSuffixList& bundled();

    // eTLD of `host`. Empty for an empty or malformed host.
    std::string public_suffix(std::string_view host) const;

    // eTLD+1 of `host`; nullopt when the host is itself a public suffix or
    // is malformed (empty, leading dot, empty label).
    std::optional<std::string> registrable(std::string_view host) const;

    std::size_t rule_count() const { return exact_.size() + wildcard_.size() + exception_.size(); }

private:
    std::unordered_set<std::string> exact_;
    std::unordered_set<std::string> wildcard_;   // stored without "*."
    std::unordered_set<std::string> exception_;  // stored without "!"
};

std::filesystem::path bundled_psl_path();

// Lowercase eTLD+1 of an absolute URL. Throws Data/NoHost when the URL has
// no host. Hosts that are themselves a public suffix, and IP literals, are
// returned unchanged.
std::string registrable_domain(std::string_view url, const PublicSuffixList& psl);

// RFC 3492 encoding of one label ("xn--" prefix included); ASCII labels are
// returned unchanged.
std::string punycode_label(std::string_view utf8_label);

}  // namespace domainlens
