// Text pipeline tests: statement cleaning, tokenization, stopword filtering,
// the suffix lemmatizer, vocabulary construction and id encoding, plus the
// label filter that decides which problems enter the corpus.
#include <catch2/catch_amalgamated.hpp>

#include "probtag/probtag.hpp"
#include "support.hpp"

using namespace probtag;
using text::LemmaExceptions;
using text::StopwordList;

namespace {

const StopwordList& stopwords() {
    static const StopwordList s = text::load_stopwords(std::string(DATA_DIR) + "/stopwords.txt");
    return s;
}

const LemmaExceptions& lemma_exceptions() {
    static const LemmaExceptions e =
        text::load_lemma_exceptions(std::string(DATA_DIR) + "/lemma_exceptions.txt");
    return e;
}

std::string random_bytes(nn::Rng& rng, std::size_t max_len) {
    // printable ASCII plus a sprinkling of the markup the cleaner strips
    static const std::string pool =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        " \t\n$\\{}&;#.,!?()-_<>/\"'";
    std::string s;
    const std::size_t len = rng.uniform_index(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) s.push_back(pool[rng.uniform_index(pool.size())]);
    return s;
}

}  // namespace

// ------------------------------------------------------------- cleaning ----

TEST_CASE("clean_text normalizes a formula-laden statement") {
    CHECK(text::clean_text("Given $n$ vertices, find\\emph{shortest} path!") ==
          "given vertices find path");
}

TEST_CASE("clean_text basics") {
    CHECK(text::clean_text("") == "");
    CHECK(text::clean_text("ABC") == "abc");
    CHECK(text::clean_text("  lots   of\t\nspace  ") == "lots of space");
    CHECK(text::clean_text("semi-connected (graph)") == "semi connected graph");
    CHECK(text::clean_text("123 apples") == "123 apples");
}

TEST_CASE("clean_text strips math spans") {
    CHECK(text::clean_text("sum $a+b$ values") == "sum values");
    CHECK(text::clean_text("$$\\max_i x_i$$ done") == "done");
    CHECK(text::clean_text("price is 5$ today") == "price is 5 today");  // unmatched $
    CHECK(text::clean_text("$a$b$c$") == "b");
}

TEST_CASE("clean_text strips commands and entities") {
    CHECK(text::clean_text("\\textbf{bold} word") == "word");
    CHECK(text::clean_text("a \\le b") == "a b");
    CHECK(text::clean_text("x&lt;y and a&#60;b") == "x y and a b");
    CHECK(text::clean_text("rock& roll") == "rock roll");  // bare ampersand
    CHECK(text::clean_text("caf\xc3\xa9") == "caf");        // non-ascii bytes drop out
}

TEST_CASE("clean_text is idempotent on arbitrary input") {
    nn::Rng rng(101);
    for (int trial = 0; trial < 500; ++trial) {
        const std::string raw = random_bytes(rng, 120);
        const std::string once = text::clean_text(raw);
        CHECK(text::clean_text(once) == once);
    }
}

TEST_CASE("clean_text output alphabet is lowercase alphanumerics and single spaces") {
    nn::Rng rng(102);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string out = text::clean_text(random_bytes(rng, 120));
        bool prev_space = true;  // also catches a leading space
        for (char c : out) {
            const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ';
            CHECK(ok);
            if (c == ' ') CHECK_FALSE(prev_space);
            prev_space = c == ' ';
        }
        if (!out.empty()) CHECK(out.back() != ' ');
    }
}

// ------------------------------------------------------------- tokenize ----

TEST_CASE("tokenize splits cleaned text") {
    CHECK(text::tokenize("given vertices find path") ==
          std::vector<std::string>{"given", "vertices", "find", "path"});
    CHECK(text::tokenize("") == std::vector<std::string>{});
    CHECK(text::tokenize("  one  ") == std::vector<std::string>{"one"});
}

// ------------------------------------------------------------ stopwords ----

TEST_CASE("shipped stopword list has the fixed size and expected members") {
    const StopwordList& s = stopwords();
    CHECK(s.size() == 179);
    for (const char* w : {"the", "is", "a", "of", "and"}) CHECK(s.count(w) == 1);
    for (const char* w : {"graph", "big", "find"}) CHECK(s.count(w) == 0);
}

TEST_CASE("remove_stopwords keeps order and content words") {
    CHECK(text::remove_stopwords({"the", "graph", "is", "big"}, stopwords()) ==
          std::vector<std::string>{"graph", "big"});
    CHECK(text::remove_stopwords({}, stopwords()).empty());
    CHECK(text::remove_stopwords({"the", "of", "and"}, stopwords()).empty());
}

TEST_CASE("stopword loader rejects a missing file") {
    CHECK_THROWS_AS(text::load_stopwords("/nonexistent/stopwords.txt"), IoError);
}

// ----------------------------------------------------------- lemmatizer ----

TEST_CASE("lemmatize handles the documented irregulars and suffix rules") {
    CHECK(text::lemmatize({"vertices", "edges"}, lemma_exceptions()) ==
          std::vector<std::string>{"vertex", "edge"});
    CHECK(text::lemmatize({"running"}, lemma_exceptions()) == std::vector<std::string>{"run"});
    CHECK(text::lemmatize({"graph"}, lemma_exceptions()) == std::vector<std::string>{"graph"});
}

TEST_CASE("lemmatize_token covers every rule family") {
    const LemmaExceptions& ex = lemma_exceptions();
    const std::pair<const char*, const char*> cases[] = {
        {"children", "child"},   // exception table
        {"series", "series"},    // self-mapped exception blocks the -s rule
        {"string", "string"},    // self-mapped exception blocks the -ing rule
        {"queries", "query"},    // -ies -> y
        {"tries", "try"},
        {"tied", "tie"},         // short -ied
        {"applied", "apply"},    // long -ied -> y
        {"making", "make"},      // -ing with silent-e restoration
        {"running", "run"},      // -ing with undoubling
        {"sorting", "sort"},     // plain -ing
        {"needed", "need"},      // plain -ed
        {"agreed", "agreed"},    // -eed left alone
        {"stopped", "stop"},     // -ed with undoubling
        {"used", "use"},         // -ed with silent-e restoration
        {"classes", "class"},    // -sses
        {"boxes", "box"},        // -xes
        {"matches", "match"},    // -ches
        {"buzzes", "buzz"},      // -zzes
        {"sizes", "size"},       // generic -es drops one letter
        {"edges", "edge"},
        {"graphs", "graph"},     // plain -s
        {"class", "class"},      // -ss guard
        {"radius", "radius"},    // -us guard
        {"this", "this"},        // -is guard
        {"bus", "bus"},          // too short for the -s rule
    };
    for (const auto& [word, want] : cases) {
        INFO(word);
        CHECK(text::lemmatize_token(word, ex) == want);
    }
}

TEST_CASE("lemmatize_token reaches a fixpoint") {
    const LemmaExceptions& ex = lemma_exceptions();
    // natural-ish words, including stacked suffixes that need several passes
    const char* words[] = {"vertices",  "edges",   "running",  "classes", "queries",
                           "stopped",   "makings", "sortings", "agreed",  "series",
                           "children",  "matches", "applied",  "uses",    "graphs",
                           "needed",    "tries",   "buzzes",   "boxes",   "tied"};
    for (const char* w : words) {
        const std::string once = text::lemmatize_token(w, ex);
        CHECK(text::lemmatize_token(once, ex) == once);
    }
}

TEST_CASE("lemma exception loader") {
    const LemmaExceptions& ex = lemma_exceptions();
    CHECK(ex.at("vertices") == "vertex");
    CHECK(ex.at("children") == "child");
    CHECK_THROWS_AS(text::load_lemma_exceptions("/nonexistent/lemmas.txt"), IoError);
}

// ------------------------------------------------------------ vocabulary ----

TEST_CASE("build_vocab assigns ids by descending frequency") {
    const text::Vocabulary v = text::build_vocab({{"a", "b", "a"}});
    CHECK(v.size() == 4);
    CHECK(v.token_to_id.at("a") == 2);
    CHECK(v.token_to_id.at("b") == 3);
    CHECK(v.id_to_token[text::kPadId] == "<pad>");
    CHECK(v.id_to_token[text::kOovId] == "<oov>");
    CHECK(v.id_to_frequency[2] == 2);
    CHECK(v.id_to_frequency[3] == 1);
}

TEST_CASE("build_vocab breaks frequency ties lexicographically") {
    const text::Vocabulary v = text::build_vocab({{"b", "a"}, {"c", "a", "b"}});
    // a:2 b:2 c:1 -> a before b by lex order, c last
    CHECK(v.token_to_id.at("a") == 2);
    CHECK(v.token_to_id.at("b") == 3);
    CHECK(v.token_to_id.at("c") == 4);
}

TEST_CASE("build_vocab honors the frequency floor") {
    const text::Vocabulary v = text::build_vocab({{"a", "a", "b"}}, 2);
    CHECK(v.size() == 3);
    CHECK(v.token_to_id.count("b") == 0);
    CHECK(v.lookup("b") == text::kOovId);
    CHECK(v.lookup("a") == 2);
}

TEST_CASE("vocabulary maps are mutually inverse") {
    nn::Rng rng(103);
    std::vector<std::vector<std::string>> corpus;
    for (int doc = 0; doc < 30; ++doc) {
        std::vector<std::string> seq;
        const std::size_t len = rng.uniform_index(40);
        for (std::size_t i = 0; i < len; ++i)
            seq.push_back("w" + std::to_string(rng.uniform_index(60)));
        corpus.push_back(std::move(seq));
    }
    const text::Vocabulary v = text::build_vocab(corpus);
    REQUIRE(v.id_to_token.size() == v.id_to_frequency.size());
    for (std::size_t id = text::kFirstRealId; id < v.size(); ++id) {
        CHECK(v.token_to_id.at(v.id_to_token[id]) == id);
        CHECK(v.lookup(v.id_to_token[id]) == id);
        if (id + 1 < v.size())  // frequencies never increase along ids
            CHECK(v.id_to_frequency[id] >= v.id_to_frequency[id + 1]);
    }
    CHECK(v.token_to_id.size() + 2 == v.size());
}

// --------------------------------------------------------------- encode ----

TEST_CASE("encode_and_pad maps, pads and truncates") {
    const text::Vocabulary v = text::build_vocab({{"a", "b", "a"}});
    CHECK(text::encode_and_pad({"a", "b"}, v, 4) == std::vector<text::TokenId>{2, 3, 0, 0});
    CHECK(text::encode_and_pad({"z"}, v, 2) == std::vector<text::TokenId>{1, 0});
    CHECK(text::encode_and_pad({"a", "b", "a", "b", "a"}, v, 3) ==
          std::vector<text::TokenId>{2, 3, 2});
    CHECK(text::encode_and_pad({}, v, 3) == std::vector<text::TokenId>{0, 0, 0});
}

TEST_CASE("encoded sequences have exact length and valid id range") {
    nn::Rng rng(104);
    std::vector<std::vector<std::string>> corpus;
    for (int doc = 0; doc < 20; ++doc) {
        std::vector<std::string> seq;
        const std::size_t len = rng.uniform_index(30);
        for (std::size_t i = 0; i < len; ++i)
            seq.push_back("w" + std::to_string(rng.uniform_index(25)));
        corpus.push_back(std::move(seq));
    }
    const text::Vocabulary v = text::build_vocab(corpus);
    for (const std::size_t max_len : {1UL, 7UL, 951UL}) {
        for (const auto& seq : corpus) {
            const std::vector<text::TokenId> ids = text::encode_and_pad(seq, v, max_len);
            CHECK(ids.size() == max_len);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                CHECK(ids[i] < v.size());
                if (i < std::min(seq.size(), max_len))
                    CHECK(ids[i] >= text::kFirstRealId);  // all tokens are in-vocab here
                else
                    CHECK(ids[i] == text::kPadId);
            }
        }
    }
}

TEST_CASE("compute_max_len floors at one") {
    CHECK(text::compute_max_len({{}}) == 1);
    CHECK(text::compute_max_len({}) == 1);
    CHECK(text::compute_max_len({{"a"}, {"a", "b", "c"}, {"a", "b"}}) == 3);
}

// ---------------------------------------------------------------- labels ----

TEST_CASE("label set is fixed and ordered") {
    CHECK(text::LabelSet::count == 3);
    CHECK(text::LabelSet::classes()[0] == "greedy");
    CHECK(text::LabelSet::classes()[1] == "graphs");
    CHECK(text::LabelSet::classes()[2] == "implementation");
    CHECK(text::LabelSet::index_of("graphs") == std::optional<std::size_t>{1});
    CHECK_FALSE(text::LabelSet::index_of("math").has_value());
}

TEST_CASE("filter_label keeps the first matching target tag") {
    CHECK(text::filter_label({"math", "greedy"}) == std::optional<std::size_t>{0});
    CHECK(text::filter_label({"graphs", "greedy"}) == std::optional<std::size_t>{1});
    CHECK_FALSE(text::filter_label({"math", "dp"}).has_value());
    CHECK_FALSE(text::filter_label({}).has_value());
    CHECK(text::filter_label({"implementation"}) == std::optional<std::size_t>{2});
}

// --------------------------------------------------------- full pipeline ----

TEST_CASE("preprocess_statement composes the stages deterministically") {
    text::PipelineConfig pipeline;
    pipeline.stopwords = stopwords();
    pipeline.lemma_exceptions = lemma_exceptions();

    const std::string raw =
        "You are given a graph with $n$ vertices and $m$ edges. "
        "Find the \\emph{longest} of all shortest paths!";
    const std::vector<std::string> tokens = text::preprocess_statement(raw, pipeline);
    // \emph{longest} disappears with its argument, just like math spans
    CHECK(tokens == std::vector<std::string>{"given", "graph", "vertex", "edge", "find",
                                             "shortest", "path"});

    // stage composition matches doing it by hand
    const std::vector<std::string> manual = text::lemmatize(
        text::remove_stopwords(text::tokenize(text::clean_text(raw)), pipeline.stopwords),
        pipeline.lemma_exceptions);
    CHECK(tokens == manual);
    CHECK(text::preprocess_statement(raw, pipeline) == tokens);  // pure function
}
