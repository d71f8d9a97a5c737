#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "probtag/errors.hpp"

namespace probtag::ingest {

/// Minimal DOM for the tolerant parser below. Nodes live in a flat arena
/// owned by Document; children/parent are arena indices.
struct Node {
    enum class Kind { element, text };
    Kind kind = Kind::element;
    std::string tag;                 // lowercase; empty for text nodes
    std::string text;                // entity-decoded; text nodes only
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::size_t> children;
    std::size_t parent = 0;

    const std::string* attr(const std::string& name) const {
        for (const auto& [k, v] : attributes)
            if (k == name) return &v;
        return nullptr;
    }

    /// True when the class attribute contains `cls` as a whitespace-separated
    /// word.
    bool has_class(const std::string& cls) const {
        const std::string* a = attr("class");
        if (!a) return false;
        std::size_t i = 0;
        while (i < a->size()) {
            while (i < a->size() && std::isspace(static_cast<unsigned char>((*a)[i]))) ++i;
            std::size_t start = i;
            while (i < a->size() && !std::isspace(static_cast<unsigned char>((*a)[i]))) ++i;
            if (a->compare(start, i - start, cls) == 0) return true;
        }
        return false;
    }
};

class Document {
public:
    std::vector<Node> nodes;  // nodes[0] is the synthetic root

    const Node& root() const { return nodes[0]; }
    const Node& at(std::size_t idx) const { return nodes[idx]; }

    /// Depth-first search for the first element matching a predicate.
    template <typename Pred>
    const Node* find(Pred&& pred, std::size_t from = 0) const {
        for (std::size_t child : nodes[from].children) {
            const Node& n = nodes[child];
            if (n.kind == Node::Kind::element) {
                if (pred(n)) return &n;
                if (const Node* hit = find(pred, child)) return hit;
            }
        }
        return nullptr;
    }

    /// Depth-first collection of all elements matching a predicate.
    template <typename Pred>
    void find_all(Pred&& pred, std::vector<const Node*>& out, std::size_t from = 0) const {
        for (std::size_t child : nodes[from].children) {
            const Node& n = nodes[child];
            if (n.kind == Node::Kind::element) {
                if (pred(n)) out.push_back(&n);
                find_all(pred, out, child);
            }
        }
    }

    std::size_t index_of(const Node& n) const { return static_cast<std::size_t>(&n - nodes.data()); }

    /// Concatenated text content of a subtree, document order.
    std::string text_content(const Node& n) const {
        std::string out;
        collect_text(index_of(n), out);
        return out;
    }

private:
    void collect_text(std::size_t idx, std::string& out) const {
        const Node& n = nodes[idx];
        if (n.kind == Node::Kind::text) {
            out += n.text;
            return;
        }
        for (std::size_t child : n.children) collect_text(child, out);
    }
};

namespace detail {

inline bool is_void_element(const std::string& tag) {
    static const char* const names[] = {"area", "base", "br",    "col",  "embed", "hr",
                                        "img",  "input", "link", "meta", "param", "source",
                                        "track", "wbr"};
    return std::find(std::begin(names), std::end(names), tag) != std::end(names);
}

/// Tags that close an open sibling of the same kind when a new one starts.
inline bool closes_same_tag(const std::string& tag) {
    return tag == "p" || tag == "li" || tag == "tr" || tag == "td" || tag == "th" ||
           tag == "option";
}

inline std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

/// Decodes the five named entities plus numeric references; anything else is
/// kept verbatim (clean_text drops residual entities later anyway).
inline std::string decode_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const std::size_t semi = s.find(';', i + 1);
        if (semi == std::string::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        const std::string name = s.substr(i + 1, semi - i - 1);
        if (name == "amp") out.push_back('&');
        else if (name == "lt") out.push_back('<');
        else if (name == "gt") out.push_back('>');
        else if (name == "quot") out.push_back('"');
        else if (name == "apos") out.push_back('\'');
        else if (name == "nbsp") out.push_back(' ');
        else if (name.size() > 1 && name[0] == '#') {
            long code = 0;
            try {
                code = (name[1] == 'x' || name[1] == 'X') ? std::stol(name.substr(2), nullptr, 16)
                                                          : std::stol(name.substr(1));
            } catch (...) { code = 0; }
            if (code > 0 && code < 128) out.push_back(static_cast<char>(code));
            else out.push_back(' ');
        } else {
            out.push_back(s[i++]);  // unknown entity: keep the ampersand as text
            continue;
        }
        i = semi + 1;
    }
    return out;
}

struct Parser {
    const std::string& src;
    Document doc;
    std::vector<std::size_t> stack;  // open element indices; stack[0] is root

    explicit Parser(const std::string& html) : src(html) {
        doc.nodes.emplace_back();  // synthetic root
        stack.push_back(0);
    }

    std::size_t append_node(Node n) {
        n.parent = stack.back();
        doc.nodes.push_back(std::move(n));
        const std::size_t idx = doc.nodes.size() - 1;
        doc.nodes[stack.back()].children.push_back(idx);
        return idx;
    }

    void append_text(const std::string& raw) {
        if (raw.empty()) return;
        Node n;
        n.kind = Node::Kind::text;
        n.text = decode_entities(raw);
        append_node(std::move(n));
    }

    /// Parses attributes between `i` and the closing '>' of a start tag.
    void parse_attributes(std::size_t& i, Node& n) {
        while (i < src.size() && src[i] != '>') {
            while (i < src.size() && (std::isspace(static_cast<unsigned char>(src[i])) || src[i] == '/'))
                ++i;
            if (i >= src.size() || src[i] == '>') break;
            std::size_t start = i;
            while (i < src.size() && src[i] != '=' && src[i] != '>' && src[i] != '/' &&
                   !std::isspace(static_cast<unsigned char>(src[i])))
                ++i;
            std::string name = lower(src.substr(start, i - start));
            std::string value;
            while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '=') {
                ++i;
                while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
                if (i < src.size() && (src[i] == '"' || src[i] == '\'')) {
                    const char quote = src[i++];
                    start = i;
                    while (i < src.size() && src[i] != quote) ++i;
                    value = src.substr(start, i - start);
                    if (i < src.size()) ++i;
                } else {
                    start = i;
                    while (i < src.size() && src[i] != '>' &&
                           !std::isspace(static_cast<unsigned char>(src[i])))
                        ++i;
                    value = src.substr(start, i - start);
                }
            }
            if (!name.empty()) n.attributes.emplace_back(std::move(name), decode_entities(value));
        }
    }

    /// script/style content is raw text up to the matching end tag.
    void consume_raw_text(std::size_t& i, const std::string& tag) {
        const std::string closer = "</" + tag;
        std::size_t end = i;
        for (;;) {
            end = src.find(closer, end);
            if (end == std::string::npos) {
                end = src.size();
                break;
            }
            const std::size_t after = end + closer.size();
            if (after >= src.size() || src[after] == '>' ||
                std::isspace(static_cast<unsigned char>(src[after])))
                break;
            ++end;
        }
        i = end;  // content is discarded; scripts never feed the pipeline
        if (i < src.size()) {
            i = src.find('>', i);
            i = i == std::string::npos ? src.size() : i + 1;
        }
    }

    void open_tag(const std::string& tag, std::size_t node_idx) {
        (void)tag;
        stack.push_back(node_idx);
    }

    void close_tag(const std::string& tag) {
        // Close the nearest matching open element; a stray close is ignored.
        for (std::size_t d = stack.size(); d-- > 1;) {
            if (doc.nodes[stack[d]].tag == tag) {
                stack.resize(d);
                return;
            }
        }
    }

    void run() {
        std::size_t i = 0;
        std::size_t text_start = 0;
        while (i < src.size()) {
            if (src[i] != '<') {
                ++i;
                continue;
            }
            // '<' not opening a tag/comment/doctype is literal text.
            if (i + 1 >= src.size() ||
                (!std::isalpha(static_cast<unsigned char>(src[i + 1])) && src[i + 1] != '/' &&
                 src[i + 1] != '!' && src[i + 1] != '?')) {
                ++i;
                continue;
            }
            append_text(src.substr(text_start, i - text_start));

            if (src.compare(i, 4, "<!--") == 0) {
                const std::size_t end = src.find("-->", i + 4);
                i = end == std::string::npos ? src.size() : end + 3;
            } else if (src[i + 1] == '!' || src[i + 1] == '?') {
                const std::size_t end = src.find('>', i);
                i = end == std::string::npos ? src.size() : end + 1;
            } else if (src[i + 1] == '/') {
                std::size_t j = i + 2;
                std::size_t start = j;
                while (j < src.size() && src[j] != '>' &&
                       !std::isspace(static_cast<unsigned char>(src[j])))
                    ++j;
                close_tag(lower(src.substr(start, j - start)));
                while (j < src.size() && src[j] != '>') ++j;
                i = j < src.size() ? j + 1 : src.size();
            } else {
                std::size_t j = i + 1;
                std::size_t start = j;
                while (j < src.size() && src[j] != '>' && src[j] != '/' &&
                       !std::isspace(static_cast<unsigned char>(src[j])))
                    ++j;
                Node n;
                n.tag = lower(src.substr(start, j - start));
                parse_attributes(j, n);
                const bool self_closing = j > i && src[j - 1] == '/';
                i = j < src.size() ? j + 1 : src.size();

                // A new p/li/tr/td implicitly closes an open sibling of the
                // same tag (real-world pages omit those end tags).
                if (closes_same_tag(n.tag) && doc.nodes[stack.back()].tag == n.tag)
                    stack.pop_back();

                const std::string tag = n.tag;
                const std::size_t idx = append_node(std::move(n));
                if (tag == "script" || tag == "style") {
                    consume_raw_text(i, tag);
                } else if (!self_closing && !is_void_element(tag)) {
                    open_tag(tag, idx);
                }
            }
            text_start = i;
        }
        append_text(src.substr(text_start));
    }
};

}  // namespace detail

/// Parses HTML leniently: unknown tags nest normally, unmatched closers are
/// ignored, p/li/tr/td close implicitly, script/style bodies are dropped.
/// Throws InputNotHtml when the input contains no markup at all.
inline Document parse_html(const std::string& html) {
    detail::Parser p(html);
    p.run();
    bool has_element = false;
    for (const Node& n : p.doc.nodes)
        if (&n != &p.doc.nodes[0] && n.kind == Node::Kind::element) {
            has_element = true;
            break;
        }
    if (!has_element) throw InputNotHtml("input contains no HTML elements");
    return std::move(p.doc);
}

}  // namespace probtag::ingest
