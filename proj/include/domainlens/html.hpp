#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace domainlens {

enum class MetaTag {
    Keywords,
    Description,
    OgTitle,
    OgKeywords,
    OgDescription,
    TwitterDescription,
    TwitterTitle,
};

inline constexpr std::size_t kMetaTagCount = 7;

// Attribute value as it appears in name="..." / property="...".
std::string_view meta_tag_name(MetaTag tag);

// The seven descriptive meta tags. An absent tag is nullopt; a tag present
// with content="" is an empty string.
class MetaTagBundle {
public:
    const std::optional<std::string>& get(MetaTag tag) const { return values_[static_cast<std::size_t>(tag)]; }
    void set(MetaTag tag, std::string value) { values_[static_cast<std::size_t>(tag)] = std::move(value); }

    const std::optional<std::string>& keywords() const { return get(MetaTag::Keywords); }
    const std::optional<std::string>& description() const { return get(MetaTag::Description); }
    const std::optional<std::string>& og_title() const { return get(MetaTag::OgTitle); }
    const std::optional<std::string>& og_keywords() const { return get(MetaTag::OgKeywords); }
    const std::optional<std::string>& og_description() const { return get(MetaTag::OgDescription); }
    const std::optional<std::string>& twitter_description() const { return get(MetaTag::TwitterDescription); }
    const std::optional<std::string>& twitter_title() const { return get(MetaTag::TwitterTitle); }

    bool empty() const;
    // Present values joined with single spaces, in tag order.
    std::string joined() const;

    bool operator==(const MetaTagBundle&) const = default;

private:
    std::array<std::optional<std::string>, kMetaTagCount> values_;
};

struct ExtractedPage {
    std::vector<std::string> out_urls;
    MetaTagBundle meta;
    std::string visible_text;
};

// Absolute http(s) targets of every <a href>, resolved against base_url
// (or a <base href> in the document), fragments stripped, document order.
std::vector<std::string> extract_hyperlinks(std::string_view html, std::string_view base_url);

// First occurrence of each of the seven tags, matched case-insensitively on
// the name or property attribute.
MetaTagBundle extract_meta_tags(std::string_view html);

// Text nodes outside head/meta/title/script/style, entity-decoded,
// whitespace-collapsed and joined with single spaces. Comments are skipped.
std::string extract_visible_text(std::string_view html);

// All three signals in one pass over the document.
ExtractedPage extract_page(std::string_view html, std::string_view base_url);

// Decodes named and numeric character references.
std::string decode_entities(std::string_view text);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace domainlens
