#include "domainlens/url.hpp"

#include "domainlens/common.hpp"

namespace domainlens {

namespace {

bool is_scheme_char(char c, bool first) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    if (first) return false;
    return (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}

bool valid_host(std::string_view host) {
    if (host.empty()) return false;
    if (host.front() == '[') return host.back() == ']';
    for (unsigned char c : host) {
        if (c >= 0x80) continue;  // IDN labels pass through unchanged
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_') continue;
        return false;
    }
    return host.front() != '.';
}

std::string merge_paths(const std::string& base_path, bool base_has_authority, std::string_view ref_path) {
    if (base_has_authority && base_path.empty()) return "/" + std::string(ref_path);
    auto slash = base_path.rfind('/');
    if (slash == std::string::npos) return std::string(ref_path);
    return base_path.substr(0, slash + 1) + std::string(ref_path);
}

}  // namespace

UrlParts split_url(std::string_view ref) {
    UrlParts parts;
    std::size_t i = 0;
    if (!ref.empty() && is_scheme_char(ref[0], true)) {
        std::size_t j = 1;
        while (j < ref.size() && is_scheme_char(ref[j], false)) ++j;
        if (j < ref.size() && ref[j] == ':') {
            parts.scheme = to_lower_ascii(ref.substr(0, j));
            i = j + 1;
        }
    }
    auto hash = ref.find('#', i);
    if (hash != std::string_view::npos) {
        parts.fragment = std::string(ref.substr(hash + 1));
        ref = ref.substr(0, hash);
    }
    auto question = ref.find('?', i);
    if (question != std::string_view::npos) {
        parts.query = std::string(ref.substr(question + 1));
        ref = ref.substr(0, question);
    }
    std::string_view rest = ref.substr(i);
    if (rest.size() >= 2 && rest[0] == '/' && rest[1] == '/') {
        rest.remove_prefix(2);
        auto slash = rest.find('/');
        parts.authority = std::string(rest.substr(0, slash));
        rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    }
    parts.path = std::string(rest);
    return parts;
}

std::string remove_dot_segments(std::string_view input) {
    std::string in(input);
    std::string out;
    while (!in.empty()) {
        if (in.rfind("../", 0) == 0) {
            in.erase(0, 3);
        } else if (in.rfind("./", 0) == 0) {
            in.erase(0, 2);
        } else if (in.rfind("/./", 0) == 0) {
            in.replace(0, 3, "/");
        } else if (in == "/.") {
            in = "/";
        } else if (in.rfind("/../", 0) == 0 || in == "/..") {
            in = in.size() == 3 ? std::string("/") : in.substr(3);
            auto slash = out.rfind('/');
            out.erase(slash == std::string::npos ? 0 : slash);
        } else if (in == "." || in == "..") {
            in.clear();
        } else {
            std::size_t start = in[0] == '/' ? 1 : 0;
            auto next = in.find('/', start);
            if (next == std::string::npos) next = in.size();
            out += in.substr(0, next);
            in.erase(0, next);
        }
    }
    return out;
}

std::optional<Url> Url::parse(std::string_view absolute) {
    std::string cleaned;
    for (char c : trim(absolute))
        if (c != '\t' && c != '\n' && c != '\r') cleaned.push_back(c);
    UrlParts parts = split_url(cleaned);
    if (parts.scheme.empty()) return std::nullopt;

    Url url;
    url.scheme_ = parts.scheme;
    url.query_ = parts.query;
    if (parts.authority) {
        std::string_view auth = *parts.authority;
        auto at = auth.rfind('@');
        if (at != std::string_view::npos) {
            url.userinfo_ = std::string(auth.substr(0, at));
            auth.remove_prefix(at + 1);
        }
        std::string_view host = auth;
        auto close = auth.rfind(']');
        auto colon = auth.rfind(':');
        if (colon != std::string_view::npos && (close == std::string_view::npos || colon > close)) {
            std::string_view port = auth.substr(colon + 1);
            for (char c : port)
                if (c < '0' || c > '9') return std::nullopt;
            url.port_ = std::string(port);
            host = auth.substr(0, colon);
        }
        std::string h = to_lower_ascii(host);
        while (!h.empty() && h.back() == '.') h.pop_back();
        if (!valid_host(h)) return std::nullopt;
        url.host_ = std::move(h);
        if ((url.scheme_ == "http" && url.port_ == "80") || (url.scheme_ == "https" && url.port_ == "443"))
            url.port_.clear();
        url.path_ = remove_dot_segments(parts.path);
        if (url.path_.empty()) url.path_ = "/";
    } else {
        if (url.is_http()) return std::nullopt;
        url.path_ = parts.path;
    }
    return url;
}

std::optional<Url> Url::resolve(std::string_view ref) const {
    std::string cleaned;
    for (char c : trim(ref))
        if (c != '\t' && c != '\n' && c != '\r') cleaned.push_back(c);
    UrlParts r = split_url(cleaned);
    if (!r.scheme.empty()) return Url::parse(cleaned);

    std::string target = scheme_ + ":";
    if (r.authority) {
        target += "//" + *r.authority + remove_dot_segments(r.path);
        if (r.query) target += "?" + *r.query;
        return Url::parse(target);
    }
    std::string path;
    std::optional<std::string> query;
    if (r.path.empty()) {
        path = path_;
        query = r.query ? r.query : query_;
    } else if (r.path[0] == '/') {
        path = remove_dot_segments(r.path);
        query = r.query;
    } else {
        path = remove_dot_segments(merge_paths(path_, !host_.empty(), r.path));
        query = r.query;
    }
    if (!host_.empty()) {
        target += "//";
        if (!userinfo_.empty()) target += userinfo_ + "@";
        target += host_;
        if (!port_.empty()) target += ":" + port_;
    }
    target += path;
    if (query) target += "?" + *query;
    return Url::parse(target);
}

std::string Url::str() const {
    std::string s = scheme_ + ":";
    if (!host_.empty()) {
        s += "//";
        if (!userinfo_.empty()) s += userinfo_ + "@";
        s += host_;
        if (!port_.empty()) s += ":" + port_;
    }
    s += path_;
    if (query_) s += "?" + *query_;
    return s;
}

std::optional<std::string> url_host(std::string_view absolute) {
    auto url = Url::parse(absolute);
    if (!url || url->host().empty()) return std::nullopt;
    return url->host();
}

}  // namespace domainlens
