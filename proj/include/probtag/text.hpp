#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "probtag/errors.hpp"

namespace probtag::text {

// ------------------------------------------------------------- labels ----

/// The three target classes, in the fixed order used everywhere (probability
/// vectors, confusion matrices, the predict output columns).
struct LabelSet {
    static constexpr std::size_t count = 3;
    static const std::array<std::string, count>& classes() {
        static const std::array<std::string, count> c{"greedy", "graphs", "implementation"};
        return c;
    }
    static std::optional<std::size_t> index_of(const std::string& tag) {
        const auto& c = classes();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] == tag) return i;
        return std::nullopt;
    }
};

/// Picks the retained class for a problem: the first tag in the problem's own
/// tag order that is one of the three targets. nullopt means the record is
/// dropped.
inline std::optional<std::size_t> filter_label(const std::vector<std::string>& tags_raw) {
    for (const std::string& t : tags_raw) {
        if (auto idx = LabelSet::index_of(t)) return idx;
    }
    return std::nullopt;
}

// ----------------------------------------------------------- cleaning ----

namespace detail {

inline bool is_alnum_lower(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}
inline bool is_ascii_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Drops $...$ and $$...$$ math spans, including their contents. An unmatched
/// $ is dropped on its own.
inline std::string strip_math(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '$') {
            out.push_back(s[i++]);
            continue;
        }
        const bool dbl = i + 1 < s.size() && s[i + 1] == '$';
        const std::string closer = dbl ? "$$" : "$";
        const std::size_t start = i + closer.size();
        const std::size_t end = s.find(closer, start);
        if (end == std::string::npos) {
            i += closer.size();  // unmatched: drop the delimiter only
            continue;
        }
        out.push_back(' ');
        i = end + closer.size();
    }
    return out;
}

/// Drops \word and \word{...} commands, including the brace argument.
inline std::string strip_commands(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '\\') {
            out.push_back(s[i++]);
            continue;
        }
        std::size_t j = i + 1;
        while (j < s.size() && is_ascii_letter(s[j])) ++j;
        if (j == i + 1) {
            ++i;  // lone backslash (or an escape like \{): drop the backslash
            continue;
        }
        if (j < s.size() && s[j] == '{') {
            int depth = 0;
            while (j < s.size()) {
                if (s[j] == '{') ++depth;
                else if (s[j] == '}' && --depth == 0) { ++j; break; }
                ++j;
            }
        }
        out.push_back(' ');
        i = j;
    }
    return out;
}

/// Drops residual HTML entities: &name; and &#123; / &#x1F; forms.
inline std::string strip_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        std::size_t j = i + 1;
        if (j < s.size() && s[j] == '#') {
            ++j;
            if (j < s.size() && (s[j] == 'x' || s[j] == 'X')) ++j;
            const std::size_t digits = j;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            if (j > digits && j < s.size() && s[j] == ';') {
                out.push_back(' ');
                i = j + 1;
                continue;
            }
        } else {
            const std::size_t start = j;
            while (j < s.size() && is_ascii_letter(s[j]) && j - start < 31) ++j;
            if (j > start && j < s.size() && s[j] == ';') {
                out.push_back(' ');
                i = j + 1;
                continue;
            }
        }
        out.push_back(s[i++]);  // bare ampersand, handled by the char filter
    }
    return out;
}

}  // namespace detail

/// Normalizes a raw statement: math spans and backslash commands removed,
/// residual HTML entities removed, lowercased, every byte outside [a-z0-9]
/// and whitespace replaced by a space, whitespace runs collapsed, trimmed.
/// Total and idempotent; empty input yields empty output.
inline std::string clean_text(const std::string& raw) {
    std::string s = detail::strip_math(raw);
    s = detail::strip_commands(s);
    s = detail::strip_entities(s);

    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char ch : s) {
        char c = ch;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (!detail::is_alnum_lower(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

/// Whitespace split of cleaned text; never yields empty tokens.
inline std::vector<std::string> tokenize(const std::string& cleaned) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && detail::is_space(cleaned[i])) ++i;
        std::size_t start = i;
        while (i < cleaned.size() && !detail::is_space(cleaned[i])) ++i;
        if (i > start) tokens.emplace_back(cleaned.substr(start, i - start));
    }
    return tokens;
}

// ---------------------------------------------------------- stop words ----

using StopwordList = std::unordered_set<std::string>;

/// Loads the shipped stopword file: one token per line, '#' comments allowed.
inline StopwordList load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword file " + path);
    StopwordList set;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && detail::is_space(line.back())) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && detail::is_space(line[start])) ++start;
        if (start) line.erase(0, start);
        if (!line.empty()) set.insert(line);
    }
    return set;
}

/// Order-preserving stopword filter.
inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                                 const StopwordList& stopwords) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens)
        if (!stopwords.count(t)) out.push_back(t);
    return out;
}

// ---------------------------------------------------------- lemmatizer ----

using LemmaExceptions = std::unordered_map<std::string, std::string>;

/// Loads the shipped irregular-form table: `form<TAB>lemma` per line,
/// '#' comments allowed. Self-mapped entries block the suffix rules.
inline LemmaExceptions load_lemma_exceptions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lemma exception file " + path);
    LemmaExceptions map;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        map[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return map;
}

namespace detail {

inline bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

inline bool has_vowel(const std::string& s) {
    for (char c : s)
        if (is_vowel(c) || c == 'y') return true;
    return false;
}

/// Letters that commonly double before -ing/-ed.
inline bool undoubles(char c) {
    return c == 'b' || c == 'd' || c == 'g' || c == 'm' || c == 'n' || c == 'p' || c == 'r' ||
           c == 't';
}

inline bool ends_with(const std::string& s, const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

/// Restores a silent e after stripping -ing/-ed: stem ending in
/// consonant-vowel-consonant (final consonant not w/x/y), or a bare
/// vowel-consonant pair, takes the e back ("mak" -> "make", "us" -> "use").
inline bool wants_silent_e(const std::string& stem) {
    const std::size_t n = stem.size();
    if (n < 2) return false;
    const char last = stem[n - 1];
    const char mid = stem[n - 2];
    if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
    if (!is_vowel(mid)) return false;
    if (n == 2) return true;
    return !is_vowel(stem[n - 3]);
}

/// Strips -ing/-ed given the bare stem; applies undoubling and silent-e
/// restoration. Returns the original word when the stem is implausible.
inline std::string strip_verb_suffix(const std::string& word, std::size_t suffix_len) {
    std::string stem = word.substr(0, word.size() - suffix_len);
    if (stem.size() < 2 || !has_vowel(stem)) return word;
    const std::size_t n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && undoubles(stem[n - 1])) {
        stem.pop_back();
        return stem;
    }
    if (wants_silent_e(stem)) stem.push_back('e');
    return stem;
}

inline std::string lemmatize_once(const std::string& word, const LemmaExceptions& exceptions) {
    if (auto it = exceptions.find(word); it != exceptions.end()) return it->second;
    const std::size_t n = word.size();

    if (n >= 5 && ends_with(word, "ies")) return word.substr(0, n - 3) + "y";
    if (n >= 5 && ends_with(word, "ied")) return word.substr(0, n - 3) + "y";
    if (n == 4 && ends_with(word, "ied")) return word.substr(0, n - 3) + "ie";  // tied -> tie

    if (n >= 5 && ends_with(word, "ing")) return strip_verb_suffix(word, 3);

    if (ends_with(word, "eed")) return word;  // need, agreed: left alone
    if (n >= 4 && ends_with(word, "ed")) return strip_verb_suffix(word, 2);

    if (n >= 4 && ends_with(word, "es")) {
        if (ends_with(word, "sses") || ends_with(word, "xes") || ends_with(word, "ches") ||
            ends_with(word, "shes") || ends_with(word, "zzes"))
            return word.substr(0, n - 2);
        return word.substr(0, n - 1);  // edges -> edge
    }
    if (n >= 4 && word.back() == 's' && !ends_with(word, "ss") && !ends_with(word, "us") &&
        !ends_with(word, "is"))
        return word.substr(0, n - 1);

    return word;
}

}  // namespace detail

/// Rule-based suffix lemmatizer over lowercase tokens: plural nouns
/// (-s/-es/-ies), verb forms (-ing/-ed with consonant undoubling and silent-e
/// restoration) and a shipped exception table for irregulars. Unknown forms
/// pass through unchanged. Rules iterate to a fixpoint, so the output is
/// always stable under re-application.
inline std::string lemmatize_token(const std::string& token, const LemmaExceptions& exceptions) {
    std::string cur = token;
    for (int iter = 0; iter < 4; ++iter) {
        std::string next = detail::lemmatize_once(cur, exceptions);
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

inline std::vector<std::string> lemmatize(const std::vector<std::string>& tokens,
                                          const LemmaExceptions& exceptions) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) out.push_back(lemmatize_token(t, exceptions));
    return out;
}

}  // namespace probtag::text
