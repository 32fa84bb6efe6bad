#include "domainlens/text.hpp"

namespace domainlens {

namespace {

// Porter's stemming algorithm, following the reference ANSI C implementation
// (including its two departures from the original 1980 description: "bli"->"ble" and
// "logi"->"log" in step 2). Operates on lowercase ASCII words.
class PorterStemmer {
public:
    explicit PorterStemmer(std::string word) : b_(std::move(word)) {}

    std::string run() {
        if (b_.size() <= 2) return b_;
        k_ = static_cast<int>(b_.size()) - 1;
        step1ab();
        if (k_ > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        b_.resize(static_cast<std::size_t>(k_ + 1));
        return b_;
    }

private:
    std::string b_;
    int k_ = 0;
    int j_ = 0;

    bool cons(int i) const {
        switch (b_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !cons(i - 1);
            default: return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j].
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool doublec(int j) const {
        if (j < 1) return false;
        if (b_[j] != b_[j - 1]) return false;
        return cons(j);
    }

    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b_[i];
        return !(ch == 'w' || ch == 'x' || ch == 'y');
    }

    bool ends(std::string_view s) {
        int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (b_.compare(static_cast<std::size_t>(k_ - len + 1), s.size(), s) != 0) return false;
        j_ = k_ - len;
        return true;
    }

    void setto(std::string_view s) {
        b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
        k_ = j_ + static_cast<int>(s.size());
        b_.resize(static_cast<std::size_t>(k_ + 1));
    }

    void r(std::string_view s) {
        if (m() > 0) setto(s);
    }

    void step1ab() {
        if (b_[k_] == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                setto("i");
            } else if (b_[k_ - 1] != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                setto("ate");
            } else if (ends("bl")) {
                setto("ble");
            } else if (ends("iz")) {
                setto("ize");
            } else if (doublec(k_)) {
                --k_;
                char ch = b_[k_];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (m() == 1 && cvc(k_)) {
                setto("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
    }

    // Tries each (suffix, replacement) pair in order; the first suffix that
    // matches ends the step whether or not the measure condition held.
    template <std::size_t N>
    void replace_first(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
        for (const auto& [suffix, repl] : rules) {
            if (ends(suffix)) {
                r(repl);
                return;
            }
        }
    }

    void step2() {
        switch (b_[k_ - 1]) {
            case 'a': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"ational", "ate"}, {"tional", "tion"}};
                replace_first(rules);
                break;
            }
            case 'c': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"enci", "ence"}, {"anci", "ance"}};
                replace_first(rules);
                break;
            }
            case 'e': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"izer", "ize"}};
                replace_first(rules);
                break;
            }
            case 'l': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {
                    {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
                replace_first(rules);
                break;
            }
            case 'o': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {
                    {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
                replace_first(rules);
                break;
            }
            case 's': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {
                    {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
                replace_first(rules);
                break;
            }
            case 't': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {
                    {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
                replace_first(rules);
                break;
            }
            case 'g': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"logi", "log"}};
                replace_first(rules);
                break;
            }
            default: break;
        }
    }

    void step3() {
        switch (b_[k_]) {
            case 'e': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {
                    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
                replace_first(rules);
                break;
            }
            case 'i': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"iciti", "ic"}};
                replace_first(rules);
                break;
            }
            case 'l': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"ical", "ic"}, {"ful", ""}};
                replace_first(rules);
                break;
            }
            case 's': {
                static constexpr std::pair<std::string_view, std::string_view> rules[] = {{"ness", ""}};
                replace_first(rules);
                break;
            }
            default: break;
        }
    }

    void step4() {
        auto any = [this](std::initializer_list<std::string_view> suffixes) {
            for (auto s : suffixes)
                if (ends(s)) return true;
            return false;
        };
        bool matched = false;
        switch (b_[k_ - 1]) {
            case 'a': matched = any({"al"}); break;
            case 'c': matched = any({"ance", "ence"}); break;
            case 'e': matched = any({"er"}); break;
            case 'i': matched = any({"ic"}); break;
            case 'l': matched = any({"able", "ible"}); break;
            case 'n': matched = any({"ant", "ement", "ment", "ent"}); break;
            case 'o':
                if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) {
                    matched = true;
                } else {
                    matched = ends("ou");
                }
                break;
            case 's': matched = any({"ism"}); break;
            case 't': matched = any({"ate", "iti"}); break;
            case 'u': matched = any({"ous"}); break;
            case 'v': matched = any({"ive"}); break;
            case 'z': matched = any({"ize"}); break;
            default: break;
        }
        if (matched && m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[k_] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (b_[k_] == 'l' && doublec(k_) && m() > 1) --k_;
    }
};

}  // namespace

std::string porter_stem(std::string_view word) {
    return PorterStemmer(std::string(word)).run();
}

}  // namespace domainlens
