#include "domainlens/common.hpp"
#include "domainlens/error.hpp"
#include "domainlens/html.hpp"
#include "domainlens/psl.hpp"
#include "domainlens/url.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

using namespace domainlens;

namespace {

std::string strip_fragment(std::string s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

// RFC 3986 reference-resolution examples (normal and abnormal).
TEST(Url, ResolvesRfcReferenceExamples) {
    const auto base = Url::parse("http://a/b/c/d;p?q");
    ASSERT_TRUE(base);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"g:h", "g:h"},
        {"g", "http://a/b/c/g"},
        {"./g", "http://a/b/c/g"},
        {"g/", "http://a/b/c/g/"},
        {"/g", "http://a/g"},
        {"//g", "http://g/"},
        {"?y", "http://a/b/c/d;p?y"},
        {"g?y", "http://a/b/c/g?y"},
        {"#s", "http://a/b/c/d;p?q#s"},
        {"g#s", "http://a/b/c/g#s"},
        {"g?y#s", "http://a/b/c/g?y#s"},
        {";x", "http://a/b/c/;x"},
        {"g;x", "http://a/b/c/g;x"},
        {"", "http://a/b/c/d;p?q"},
        {".", "http://a/b/c/"},
        {"./", "http://a/b/c/"},
        {"..", "http://a/b/"},
        {"../", "http://a/b/"},
        {"../g", "http://a/b/g"},
        {"../..", "http://a/"},
        {"../../", "http://a/"},
        {"../../g", "http://a/g"},
        {"../../../g", "http://a/g"},
        {"../../../../g", "http://a/g"},
        {"/./g", "http://a/g"},
        {"/../g", "http://a/g"},
        {"g.", "http://a/b/c/g."},
        {".g", "http://a/b/c/.g"},
        {"g..", "http://a/b/c/g.."},
        {"..g", "http://a/b/c/..g"},
        {"./../g", "http://a/b/g"},
        {"./g/.", "http://a/b/c/g/"},
        {"g/./h", "http://a/b/c/g/h"},
        {"g/../h", "http://a/b/c/h"},
        {"g;x=1/./y", "http://a/b/c/g;x=1/y"},
        {"g;x=1/../y", "http://a/b/c/y"},
        {"g?y/./x", "http://a/b/c/g?y/./x"},
        {"g?y/../x", "http://a/b/c/g?y/../x"},
        {"g#s/./x", "http://a/b/c/g#s/./x"},
    };
    for (const auto& [ref, want] : cases) {
        auto got = base->resolve(ref);
        ASSERT_TRUE(got) << ref;
        EXPECT_EQ(got->str(), strip_fragment(want)) << ref;
    }
    // Strict parsing yields "http:g", which has no host; http URLs need one.
    EXPECT_FALSE(base->resolve("http:g"));
}

TEST(Url, RemoveDotSegments) {
    EXPECT_EQ(remove_dot_segments("/a/b/c/./../../g"), "/a/g");
    EXPECT_EQ(remove_dot_segments("mid/content=5/../6"), "mid/6");
}

TEST(Url, NormalizesSchemeAndHost) {
    auto u = Url::parse("HTTPS://WWW.Example.COM");
    ASSERT_TRUE(u);
    EXPECT_EQ(u->str(), "https://www.example.com/");
    EXPECT_EQ(url_host("https://News.bbc.co.uk/x"), "news.bbc.co.uk");
    EXPECT_FALSE(url_host("mailto:x@y.com"));
    EXPECT_FALSE(Url::parse("not a url"));
}

TEST(Psl, OfficialTestVectors) {
    PublicSuffixList::Options opts;
    opts.include_private = true;
    const auto psl = PublicSuffixList::load(bundled_psl_path(), opts);
    std::ifstream in(std::string(DOMAINLENS_TEST_DATA) + "/psl_tests.txt");
    ASSERT_TRUE(in);
    const std::regex line_re(R"(^checkPublicSuffix\((null|'[^']*'),\s*(null|'[^']*')\);)");
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        std::smatch m;
        if (!std::regex_search(line, m, line_re)) continue;
        if (m[1] == "null") continue;
        std::string host = to_lower_ascii(m[1].str().substr(1, m[1].length() - 2));
        std::optional<std::string> want;
        if (m[2] != "null") want = m[2].str().substr(1, m[2].length() - 2);
        EXPECT_EQ(psl.registrable(host), want) << host;
        ++checked;
    }
    EXPECT_GT(checked, 60);
}

TEST(Psl, IcannOnlyByDefault) {
    const auto& psl = PublicSuffixList::bundled();
    EXPECT_EQ(psl.registrable("foo.blogspot.com"), "blogspot.com");
    auto with_private = PublicSuffixList::load(bundled_psl_path(), {true});
    EXPECT_EQ(with_private.registrable("foo.blogspot.com"), "foo.blogspot.com");
}

TEST(Psl, WildcardAndExceptionRules) {
    std::istringstream rules("ck\n*.ck\n!www.ck\ncom\n");
    auto psl = PublicSuffixList::parse(rules);
    EXPECT_EQ(psl.registrable("a.b.ck"), "a.b.ck");
    EXPECT_FALSE(psl.registrable("b.ck"));
    EXPECT_EQ(psl.registrable("www.ck"), "www.ck");
    EXPECT_EQ(psl.registrable("x.www.ck"), "www.ck");
    EXPECT_EQ(psl.public_suffix("a.example.zz"), "zz");
}

TEST(Psl, RegistrableDomainOfUrls) {
    const auto& psl = PublicSuffixList::bundled();
    EXPECT_EQ(registrable_domain("https://www.infowars.com/posts/p1", psl), "infowars.com");
    EXPECT_EQ(registrable_domain("https://news.bbc.co.uk/x", psl), "bbc.co.uk");
    EXPECT_EQ(registrable_domain("https://a.com", psl), "a.com");
    EXPECT_EQ(registrable_domain("http://192.168.0.1/x", psl), "192.168.0.1");
    try {
        registrable_domain("mailto:x@y.com", psl);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "NoHost");
    }
}

TEST(Psl, Punycode) {
    EXPECT_EQ(punycode_label("b\xC3\xBC\x63her"), "xn--bcher-kva");
    EXPECT_EQ(punycode_label("example"), "example");
}

TEST(Html, Hyperlinks) {
    EXPECT_EQ(extract_hyperlinks("<a href=\"/x\">x</a>", "https://a.com/"), std::vector<std::string>{"https://a.com/x"});
    EXPECT_EQ(extract_hyperlinks("<a href=\"https://www.infowars.com/posts/p1\">", "https://rt.com/"),
              std::vector<std::string>{"https://www.infowars.com/posts/p1"});
    EXPECT_TRUE(extract_hyperlinks("<a href=\"mailto:x@y.com\">", "https://a.com/").empty());
    EXPECT_TRUE(extract_hyperlinks("<a href=\"javascript:void(0)\">", "https://a.com/").empty());
    EXPECT_EQ(extract_hyperlinks("<A HREF='p#frag'>", "https://a.com/dir/page"),
              std::vector<std::string>{"https://a.com/dir/p"});
    EXPECT_EQ(extract_hyperlinks("<base href=\"https://cdn.b.org/r/\"><a href=\"q\">", "https://a.com/"),
              std::vector<std::string>{"https://cdn.b.org/r/q"});
    EXPECT_EQ(extract_hyperlinks("<a href=\"/a?x=1&amp;y=2\">", "https://a.com/"),
              std::vector<std::string>{"https://a.com/a?x=1&y=2"});
}

TEST(Html, MetaTags) {
    auto b = extract_meta_tags("<meta name=\"description\" content=\"Daily news\">");
    EXPECT_EQ(b.description(), "Daily news");
    EXPECT_EQ(extract_meta_tags("<meta property=\"og:title\" content=\"T\">").og_title(), "T");
    EXPECT_TRUE(extract_meta_tags("<p>no meta</p>").empty());
    auto all = extract_meta_tags(
        "<meta name=keywords content='k'><META NAME=\"Twitter:Title\" CONTENT=\"tt\">"
        "<meta name=\"description\" content=\"first\"><meta name=\"description\" content=\"second\">"
        "<meta name=\"og:description\" content=\"\">");
    EXPECT_EQ(all.keywords(), "k");
    EXPECT_EQ(all.twitter_title(), "tt");
    EXPECT_EQ(all.description(), "first");
    EXPECT_EQ(all.og_description(), "");
    EXPECT_FALSE(all.og_keywords());
    EXPECT_EQ(all.joined(), "k first tt");
}

TEST(Html, VisibleText) {
    EXPECT_EQ(extract_visible_text("<body><p>Hello <b>world</b></p></body>"), "Hello world");
    EXPECT_EQ(extract_visible_text("<script>var x=1;</script><p>A</p>"), "A");
    EXPECT_EQ(extract_visible_text("<style>p{}</style>"), "");
    EXPECT_EQ(extract_visible_text("<html><head><title>T</title><meta name=a content=b></head><body>x</body>"), "x");
    EXPECT_EQ(extract_visible_text("<p>fish &amp; chips &#8211; &#x41;</p>"), "fish & chips \xE2\x80\x93 A");
    EXPECT_EQ(extract_visible_text("<p>a<!-- hidden --> b</p>"), "a b");
    EXPECT_EQ(extract_visible_text("<script>if (a</b) {}</script>ok"), "ok");
}

TEST(Html, ScriptAndStyleBodiesNeverLeak) {
    const std::vector<std::string> bodies = {"var secret = '<p>x</p>';", "body{color:red}", "document.write('</div>')"};
    for (const auto& body : bodies) {
        std::string doc = "<p>pre</p><script>" + body + "</script><style>" + body + "</style><p>post</p>";
        auto text = extract_visible_text(doc);
        EXPECT_EQ(text.find(body), std::string::npos);
        EXPECT_EQ(text, "pre post");
    }
}

TEST(Html, InvalidUtf8IsReplaced) {
    EXPECT_EQ(sanitize_utf8("a\xFF" "b"), "a\xEF\xBF\xBD" "b");
    EXPECT_EQ(sanitize_utf8("\xC3\xA9"), "\xC3\xA9");
    EXPECT_EQ(decode_entities("&lt;&gt;&quot;&nbsp;"), "<>\" ");
}

TEST(Html, ExtractPageIsPure) {
    const std::string doc = "<head><meta name=description content=d></head><a href=/x>link text</a>";
    auto a = extract_page(doc, "https://s.com/");
    auto b = extract_page(doc, "https://s.com/");
    EXPECT_EQ(a.out_urls, b.out_urls);
    EXPECT_EQ(a.meta, b.meta);
    EXPECT_EQ(a.visible_text, "link text");
    EXPECT_EQ(a.out_urls, std::vector<std::string>{"https://s.com/x"});
}
