#include "domainlens/html.hpp"

#include "domainlens/common.hpp"
#include "domainlens/url.hpp"

#include <unordered_map>

namespace domainlens {

namespace {

constexpr std::array<std::string_view, kMetaTagCount> kMetaNames = {
    "keywords", "description", "og:title", "og:keywords", "og:description", "twitter:description", "twitter:title",
};

struct Attribute {
    std::string name;
    std::string value;
};

struct Tag {
    std::string name;
    std::vector<Attribute> attrs;
    bool end = false;

    const std::string* attr(std::string_view key) const {
        for (const auto& a : attrs)
            if (a.name == key) return &a.value;
        return nullptr;
    }
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool is_raw_text_element(std::string_view name) {
    return name == "script" || name == "style" || name == "title" || name == "textarea";
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
    if (needle.size() > hay.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            char a = hay[i + k];
            if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
            if (a != needle[k]) {
                match = false;
                break;
            }
        }
        if (match) return i;
    }
    return std::string_view::npos;
}

// Forgiving tokenizer: unknown constructs degrade to text, unterminated
// constructs run to end of input. Raw-text elements (script, style, title,
// textarea) swallow everything up to their matching end tag.
template <typename OnText, typename OnTag>
void tokenize(std::string_view html, OnText&& on_text, OnTag&& on_tag) {
    std::size_t i = 0;
    const std::size_t n = html.size();
    std::size_t text_start = 0;
    auto flush_text = [&](std::size_t end) {
        if (end > text_start) on_text(html.substr(text_start, end - text_start), false);
    };

    while (i < n) {
        if (html[i] != '<') {
            ++i;
            continue;
        }
        if (html.compare(i, 4, "<!--") == 0) {
            flush_text(i);
            auto close = html.find("-->", i + 4);
            i = close == std::string_view::npos ? n : close + 3;
            text_start = i;
            continue;
        }
        if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
            flush_text(i);
            auto close = html.find('>', i + 2);
            i = close == std::string_view::npos ? n : close + 1;
            text_start = i;
            continue;
        }
        bool end_tag = i + 1 < n && html[i + 1] == '/';
        std::size_t name_start = i + (end_tag ? 2 : 1);
        if (name_start >= n || !is_alpha(html[name_start])) {
            if (end_tag) {
                flush_text(i);
                auto close = html.find('>', i + 2);
                i = close == std::string_view::npos ? n : close + 1;
                text_start = i;
            } else {
                ++i;
            }
            continue;
        }
        flush_text(i);

        Tag tag;
        tag.end = end_tag;
        std::size_t p = name_start;
        while (p < n && !is_ws(html[p]) && html[p] != '/' && html[p] != '>') ++p;
        tag.name = to_lower_ascii(html.substr(name_start, p - name_start));

        // Attributes.
        while (p < n && html[p] != '>') {
            if (is_ws(html[p]) || html[p] == '/') {
                ++p;
                continue;
            }
            std::size_t an = p;
            while (p < n && !is_ws(html[p]) && html[p] != '=' && html[p] != '>' && html[p] != '/') ++p;
            Attribute attr;
            attr.name = to_lower_ascii(html.substr(an, p - an));
            while (p < n && is_ws(html[p])) ++p;
            if (p < n && html[p] == '=') {
                ++p;
                while (p < n && is_ws(html[p])) ++p;
                if (p < n && (html[p] == '"' || html[p] == '\'')) {
                    char quote = html[p++];
                    auto close = html.find(quote, p);
                    if (close == std::string_view::npos) close = n;
                    attr.value = decode_entities(html.substr(p, close - p));
                    p = close == n ? n : close + 1;
                } else {
                    std::size_t vs = p;
                    while (p < n && !is_ws(html[p]) && html[p] != '>') ++p;
                    attr.value = decode_entities(html.substr(vs, p - vs));
                }
            }
            if (!tag.end) tag.attrs.push_back(std::move(attr));
        }
        i = p < n ? p + 1 : n;
        text_start = i;
        on_tag(tag);

        if (!tag.end && is_raw_text_element(tag.name)) {
            std::string closer = "</" + tag.name;
            auto close = find_ci(html, closer, i);
            std::size_t body_end = close == std::string_view::npos ? n : close;
            if (body_end > i) on_text(html.substr(i, body_end - i), tag.name != "textarea");
            if (close == std::string_view::npos) {
                i = n;
            } else {
                auto gt = html.find('>', close);
                i = gt == std::string_view::npos ? n : gt + 1;
                Tag end;
                end.name = tag.name;
                end.end = true;
                on_tag(end);
            }
            text_start = i;
        }
    }
    flush_text(n);
}

bool allowed_in_head(std::string_view name) {
    static constexpr std::string_view kHeadTags[] = {"base", "link", "meta", "title", "style", "script",
                                                     "noscript", "template", "basefont", "bgsound", "head"};
    for (auto t : kHeadTags)
        if (t == name) return true;
    return false;
}

void append_words(std::string& out, std::string_view text) {
    std::string decoded = decode_entities(text);
    std::size_t i = 0;
    while (i < decoded.size()) {
        while (i < decoded.size() && is_ws(decoded[i])) ++i;
        std::size_t start = i;
        while (i < decoded.size() && !is_ws(decoded[i])) ++i;
        if (i > start) {
            if (!out.empty()) out.push_back(' ');
            out.append(decoded, start, i - start);
        }
    }
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", '&'},      {"lt", '<'},        {"gt", '>'},        {"quot", '"'},      {"apos", '\''},
        {"nbsp", ' '},     {"copy", 0xA9},     {"reg", 0xAE},      {"trade", 0x2122},  {"hellip", 0x2026},
        {"mdash", 0x2014}, {"ndash", 0x2013},  {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
        {"rdquo", 0x201D}, {"laquo", 0xAB},    {"raquo", 0xBB},    {"bull", 0x2022},   {"middot", 0xB7},
        {"deg", 0xB0},     {"euro", 0x20AC},   {"pound", 0xA3},    {"yen", 0xA5},      {"cent", 0xA2},
        {"sect", 0xA7},    {"para", 0xB6},     {"times", 0xD7},    {"divide", 0xF7},   {"eacute", 0xE9},
        {"egrave", 0xE8},  {"agrave", 0xE0},   {"aacute", 0xE1},   {"ccedil", 0xE7},   {"ouml", 0xF6},
        {"uuml", 0xFC},    {"auml", 0xE4},     {"szlig", 0xDF},    {"ntilde", 0xF1},   {"iacute", 0xED},
        {"oacute", 0xF3},  {"uacute", 0xFA},
    };
    return table;
}

struct PageWalker {
    std::string base;
    bool want_links = true;
    bool want_meta = true;
    bool want_text = true;

    ExtractedPage page;
    std::optional<Url> base_url;
    bool base_seen = false;
    bool in_head = false;
    int excluded = 0;  // open title/script/style/head elements

    void text(std::string_view t, bool raw) {
        if (!want_text || raw) return;
        if (in_head) {
            if (trim(t).empty()) return;
            in_head = false;
        }
        if (excluded > 0) return;
        append_words(page.visible_text, t);
    }

    void tag(const Tag& t) {
        if (t.end) {
            if (t.name == "head") in_head = false;
            if ((t.name == "title" || t.name == "script" || t.name == "style") && excluded > 0) --excluded;
            return;
        }
        if (t.name == "head") {
            in_head = true;
        } else if (t.name == "body") {
            in_head = false;
        } else if (in_head && !allowed_in_head(t.name)) {
            in_head = false;
        }
        if (t.name == "title" || t.name == "script" || t.name == "style") ++excluded;

        if (t.name == "base" && !base_seen) {
            if (const auto* href = t.attr("href")) {
                base_seen = true;
                if (base_url) {
                    if (auto resolved = base_url->resolve(*href)) base_url = resolved;
                }
            }
        } else if (t.name == "a" && want_links && base_url) {
            if (const auto* href = t.attr("href")) {
                if (auto target = base_url->resolve(*href); target && target->is_http() && !target->host().empty())
                    page.out_urls.push_back(target->str());
            }
        } else if (t.name == "meta" && want_meta) {
            const std::string* key = t.attr("name");
            if (!key) key = t.attr("property");
            if (!key) return;
            std::string k = to_lower_ascii(trim(*key));
            for (std::size_t m = 0; m < kMetaTagCount; ++m) {
                if (k == kMetaNames[m]) {
                    auto tag_id = static_cast<MetaTag>(m);
                    if (!page.meta.get(tag_id)) {
                        const auto* content = t.attr("content");
                        page.meta.set(tag_id, content ? *content : std::string{});
                    }
                    break;
                }
            }
        }
    }

    void run(std::string_view html) {
        base_url = Url::parse(base);
        tokenize(
            html, [this](std::string_view t, bool raw) { text(t, raw); }, [this](const Tag& t) { tag(t); });
    }
};

}  // namespace

std::string_view meta_tag_name(MetaTag tag) { return kMetaNames[static_cast<std::size_t>(tag)]; }

bool MetaTagBundle::empty() const {
    for (const auto& v : values_)
        if (v) return false;
    return true;
}

std::string MetaTagBundle::joined() const {
    std::string out;
    for (const auto& v : values_) {
        if (!v || v->empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += *v;
    }
    return out;
}

std::string decode_entities(std::string_view text) {
    if (text.find('&') == std::string_view::npos) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t semi = text.find(';', i + 1);
        if (i + 1 < text.size() && text[i + 1] == '#') {
            std::size_t p = i + 2;
            bool hex = p < text.size() && (text[p] == 'x' || text[p] == 'X');
            if (hex) ++p;
            std::size_t digits_start = p;
            char32_t cp = 0;
            bool overflow = false;
            while (p < text.size()) {
                char c = text[p];
                int d = (c >= '0' && c <= '9') ? c - '0'
                        : hex && c >= 'a' && c <= 'f' ? c - 'a' + 10
                        : hex && c >= 'A' && c <= 'F' ? c - 'A' + 10
                                                      : -1;
                if (d < 0) break;
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(d);
                if (cp > 0x10FFFF) overflow = true;
                ++p;
            }
            if (p == digits_start) {
                out.push_back(text[i++]);
                continue;
            }
            if (overflow || cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
            append_utf8(out, cp);
            i = (p < text.size() && text[p] == ';') ? p + 1 : p;
            continue;
        }
        if (semi != std::string_view::npos && semi - i <= 10) {
            auto it = named_entities().find(text.substr(i + 1, semi - i - 1));
            if (it != named_entities().end()) {
                append_utf8(out, it->second);
                i = semi + 1;
                continue;
            }
        }
        // Legacy references without the trailing semicolon.
        bool matched = false;
        for (std::string_view legacy : {"amp", "lt", "gt", "quot", "nbsp"}) {
            if (text.compare(i + 1, legacy.size(), legacy) == 0) {
                append_utf8(out, named_entities().at(legacy));
                i += 1 + legacy.size();
                matched = true;
                break;
            }
        }
        if (!matched) out.push_back(text[i++]);
    }
    return out;
}

std::string sanitize_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        auto c = static_cast<unsigned char>(bytes[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if (c >= 0xC2 && c <= 0xDF) {
            len = 2;
            cp = c & 0x1F;
        } else if (c >= 0xE0 && c <= 0xEF) {
            len = 3;
            cp = c & 0x0F;
        } else if (c >= 0xF0 && c <= 0xF4) {
            len = 4;
            cp = c & 0x07;
        }
        bool ok = len > 0 && i + len <= n;
        for (int k = 1; ok && k < len; ++k) {
            auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) ok = false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (ok) {
            if ((len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) || (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)))
                ok = false;
        }
        if (ok) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out += "\xEF\xBF\xBD";
            ++i;
        }
    }
    return out;
}

ExtractedPage extract_page(std::string_view html, std::string_view base_url) {
    PageWalker w;
    w.base = std::string(base_url);
    w.run(html);
    return std::move(w.page);
}

std::vector<std::string> extract_hyperlinks(std::string_view html, std::string_view base_url) {
    PageWalker w;
    w.base = std::string(base_url);
    w.want_meta = false;
    w.want_text = false;
    w.run(html);
    return std::move(w.page.out_urls);
}

MetaTagBundle extract_meta_tags(std::string_view html) {
    PageWalker w;
    w.want_links = false;
    w.want_text = false;
    w.run(html);
    return std::move(w.page.meta);
}

std::string extract_visible_text(std::string_view html) {
    PageWalker w;
    w.want_links = false;
    w.want_meta = false;
    w.run(html);
    return std::move(w.page.visible_text);
}

}  // namespace domainlens
