#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace domainlens {

// A parsed absolute or relative URI reference (RFC 3986 component split).
struct UrlParts {
    std::string scheme;                 // lowercase, empty for relative refs
    std::optional<std::string> authority;
    std::string path;
    std::optional<std::string> query;
    std::optional<std::string> fragment;
};

UrlParts split_url(std::string_view ref);

// Normalized absolute URL: lowercase scheme and host, fragment removed,
// empty path rendered as "/".
class Url {
public:
    static std::optional<Url> parse(std::string_view absolute);

    // Reference resolution against this URL as base. Returns nullopt when
    // the result is not a valid absolute URL.
    std::optional<Url> resolve(std::string_view ref) const;

    const std::string& scheme() const { return scheme_; }
    const std::string& host() const { return host_; }
    const std::string& path() const { return path_; }
    std::string str() const;

    bool is_http() const { return scheme_ == "http" || scheme_ == "https"; }

private:
    std::string scheme_;
    std::string userinfo_;
    std::string host_;
    std::string port_;
    std::string path_;
    std::optional<std::string> query_;
};

std::string remove_dot_segments(std::string_view path);

// Host of an absolute URL, lowercase; nullopt if the URL has no host.
std::optional<std::string> url_host(std::string_view absolute);

}  // namespace domainlens
