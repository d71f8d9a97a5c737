#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/text.hpp"

namespace probtag::text {

using TokenId = std::uint32_t;

constexpr TokenId kPadId = 0;
constexpr TokenId kOovId = 1;
constexpr TokenId kFirstRealId = 2;

inline const std::string kPadToken = "<pad>";
inline const std::string kOovToken = "<oov>";

/// Knobs for the statement-to-ids pipeline plus the lexical tables it needs.
struct PipelineConfig {
    std::size_t max_len = 951;
    std::size_t min_token_freq = 1;  // tokens rarer than this stay out of the vocabulary
    StopwordList stopwords;
    LemmaExceptions lemma_exceptions;
};

/// Token-to-id table built from the training split only. Id 0 is padding,
/// id 1 the out-of-vocabulary bucket, real tokens start at 2 ordered by
/// descending frequency with lexicographic tie-break.
struct Vocabulary {
    std::unordered_map<std::string, TokenId> token_to_id;
    std::vector<std::string> id_to_token;       // index == id
    std::vector<std::uint64_t> id_to_frequency; // counts in the build corpus; 0 for sentinels

    std::size_t size() const { return id_to_token.size(); }

    TokenId lookup(const std::string& token) const {
        auto it = token_to_id.find(token);
        return it == token_to_id.end() ? kOovId : it->second;
    }
};

/// Builds the vocabulary from already-preprocessed token sequences. Tokens
/// seen fewer than min_token_freq times are excluded (they encode as OOV).
inline Vocabulary build_vocab(const std::vector<std::vector<std::string>>& token_seqs,
                              std::size_t min_token_freq = 1) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& seq : token_seqs)
        for (const std::string& t : seq) ++counts[t];

    // Descending frequency, ties broken lexicographically, so the id
    // assignment is a pure function of the corpus.
    std::vector<std::pair<std::string, std::uint64_t>> order;
    order.reserve(counts.size());
    for (auto& kv : counts)
        if (kv.second >= min_token_freq) order.emplace_back(kv.first, kv.second);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary v;
    v.id_to_token = {kPadToken, kOovToken};
    v.id_to_frequency = {0, 0};
    v.token_to_id.reserve(order.size() + 2);
    for (const auto& [token, count] : order) {
        v.token_to_id.emplace(token, static_cast<TokenId>(v.id_to_token.size()));
        v.id_to_token.push_back(token);
        v.id_to_frequency.push_back(count);
    }
    return v;
}

/// Longest token sequence in a corpus, floored at 1 so padding stays
/// well-defined even for a degenerate all-empty corpus.
inline std::size_t compute_max_len(const std::vector<std::vector<std::string>>& token_seqs) {
    std::size_t m = 1;
    for (const auto& seq : token_seqs) m = std::max(m, seq.size());
    return m;
}

/// Maps tokens to ids and right-pads with id 0 up to max_len. Sequences
/// longer than max_len keep their first max_len tokens.
inline std::vector<TokenId> encode_and_pad(const std::vector<std::string>& tokens,
                                           const Vocabulary& vocab, std::size_t max_len) {
    std::vector<TokenId> ids;
    ids.reserve(max_len);
    for (const std::string& t : tokens) {
        if (ids.size() == max_len) break;
        ids.push_back(vocab.lookup(t));
    }
    ids.resize(max_len, kPadId);
    return ids;
}

/// One labeled example after the full text pipeline.
struct EncodedExample {
    std::vector<TokenId> ids;  // length == max_len
    std::size_t label = 0;     // index into LabelSet::classes()
};

/// Raw statement to final token sequence, in the fixed stage order.
inline std::vector<std::string> preprocess_statement(const std::string& raw,
                                                     const PipelineConfig& pipeline) {
    std::vector<std::string> tokens = tokenize(clean_text(raw));
    tokens = remove_stopwords(tokens, pipeline.stopwords);
    return lemmatize(tokens, pipeline.lemma_exceptions);
}

}  // namespace probtag::text
