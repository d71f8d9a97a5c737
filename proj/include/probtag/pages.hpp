#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/html.hpp"

namespace probtag::ingest {

/// One problem pointer scraped from a contest listing.
struct ProblemRef {
    long contest_id = 0;
    std::string index;  // "A", "B1", ...
};

/// One fully scraped problem, the unit the corpus is made of.
struct ProblemRecord {
    long contest_id = 0;
    std::string problem_index;
    std::string statement;
    std::vector<std::string> tags;  // lowercase, deduplicated, ratings dropped
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// lower() comes from html.hpp; both parsers share one detail namespace.

/// Difficulty ratings appear in the tag list as "*1200"; they are metadata,
/// not topics.
inline bool is_rating_tag(const std::string& tag) {
    if (tag.size() < 2 || tag[0] != '*') return false;
    for (std::size_t i = 1; i < tag.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tag[i]))) return false;
    return true;
}

/// Parses "/contest/<id>/problem/<index>" hrefs; returns false for anything
/// else.
inline bool parse_problem_href(const std::string& href, ProblemRef& out) {
    const std::string contest_prefix = "/contest/";
    const std::size_t c = href.find(contest_prefix);
    if (c == std::string::npos) return false;
    std::size_t i = c + contest_prefix.size();
    std::size_t digits = i;
    long id = 0;
    while (i < href.size() && std::isdigit(static_cast<unsigned char>(href[i]))) {
        id = id * 10 + (href[i] - '0');
        ++i;
    }
    if (i == digits) return false;
    const std::string problem_part = "/problem/";
    if (href.compare(i, problem_part.size(), problem_part) != 0) return false;
    i += problem_part.size();
    std::size_t start = i;
    while (i < href.size() && href[i] != '/' && href[i] != '?' && href[i] != '#') ++i;
    if (i == start) return false;
    out.contest_id = id;
    out.index = href.substr(start, i - start);
    return true;
}

}  // namespace detail

/// Extracts the problem list from a contest page: every distinct
/// /contest/<id>/problem/<index> anchor inside the problems table, document
/// order. A page without that table yields an empty list (some contest ids
/// are gaps, not errors).
inline std::vector<ProblemRef> parse_contest_page(const Document& doc) {
    std::vector<ProblemRef> refs;
    const Node* table =
        doc.find([](const Node& n) { return n.tag == "table" && n.has_class("problems"); });
    if (!table) return refs;

    std::vector<const Node*> anchors;
    doc.find_all([](const Node& n) { return n.tag == "a"; }, anchors, doc.index_of(*table));
    for (const Node* a : anchors) {
        const std::string* href = a->attr("href");
        if (!href) continue;
        ProblemRef ref;
        if (!detail::parse_problem_href(*href, ref)) continue;
        bool seen = false;
        for (const ProblemRef& r : refs)
            if (r.contest_id == ref.contest_id && r.index == ref.index) {
                seen = true;
                break;
            }
        if (!seen) refs.push_back(std::move(ref));
    }
    return refs;
}

/// Statement text plus topic tags from a problem page.
struct ProblemContent {
    std::string statement;
    std::vector<std::string> tags;
};

/// Pulls the statement body and tag list out of a problem page.
///
/// The statement lives in div.problem-statement; its first child div that
/// carries no class attribute is the narrative body (the classed siblings are
/// the header, input/output specs and notes, which must not leak into the
/// corpus). Paragraphs are joined with newlines. Tags are the span.tag-box
/// texts, trimmed, lowercased, deduplicated, difficulty ratings removed.
///
/// Throws StatementMissing when the container or body is absent or empty and
/// TagsMissing when no topic tag survives.
inline ProblemContent parse_problem_page(const Document& doc) {
    const Node* container = doc.find(
        [](const Node& n) { return n.tag == "div" && n.has_class("problem-statement"); });
    if (!container) throw StatementMissing("no problem-statement container");

    const Node* body = nullptr;
    for (std::size_t child : container->children) {
        const Node& n = doc.at(child);
        if (n.kind == Node::Kind::element && n.tag == "div" && n.attr("class") == nullptr) {
            body = &n;
            break;
        }
    }
    if (!body) throw StatementMissing("no statement body inside problem-statement");

    std::vector<const Node*> paragraphs;
    doc.find_all([](const Node& n) { return n.tag == "p"; }, paragraphs, doc.index_of(*body));

    std::string statement;
    for (const Node* p : paragraphs) {
        const std::string para = detail::trim(doc.text_content(*p));
        if (para.empty()) continue;
        if (!statement.empty()) statement.push_back('\n');
        statement += para;
    }
    if (statement.empty()) {
        // Pages without <p> markup still count if the body has bare text.
        statement = detail::trim(doc.text_content(*body));
    }
    if (statement.empty()) throw StatementMissing("statement body is empty");

    std::vector<const Node*> boxes;
    doc.find_all([](const Node& n) { return n.tag == "span" && n.has_class("tag-box"); }, boxes);

    ProblemContent out;
    out.statement = std::move(statement);
    for (const Node* box : boxes) {
        std::string tag = detail::lower(detail::trim(doc.text_content(*box)));
        if (tag.empty() || detail::is_rating_tag(tag)) continue;
        bool seen = false;
        for (const std::string& t : out.tags)
            if (t == tag) {
                seen = true;
                break;
            }
        if (!seen) out.tags.push_back(std::move(tag));
    }
    if (out.tags.empty()) throw TagsMissing("no topic tags on problem page");
    return out;
}

/// String-level entry points: parse the HTML first, then extract.

inline std::vector<ProblemRef> parse_contest_page(const std::string& html) {
    return parse_contest_page(parse_html(html));
}

inline ProblemRecord parse_problem_page(const std::string& html, long contest_id,
                                        const std::string& problem_index) {
    ProblemContent content = parse_problem_page(parse_html(html));
    ProblemRecord rec;
    rec.contest_id = contest_id;
    rec.problem_index = problem_index;
    rec.statement = std::move(content.statement);
    rec.tags = std::move(content.tags);
    return rec;
}

}  // namespace probtag::ingest
