#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/model.hpp"
#include "probtag/vocab.hpp"

namespace probtag {

using Dataset = std::vector<text::EncodedExample>;

// ---------------------------------------------------------------- split ----

struct SplitSpec {
    std::size_t train_count = 950;
    std::size_t test_count = 42;
    std::uint64_t seed = 0;
    bool stratified = false;
};

/// train_count proportioned like the reference 950/992 split, test gets the
/// rest; every corpus keeps at least one test example.
inline SplitSpec proportioned_split(std::size_t corpus_size, std::uint64_t seed,
                                    bool stratified = false) {
    SplitSpec s;
    s.seed = seed;
    s.stratified = stratified;
    const double frac = 950.0 / 992.0;
    std::size_t train = static_cast<std::size_t>(
        std::llround(frac * static_cast<double>(corpus_size)));
    if (train >= corpus_size) train = corpus_size == 0 ? 0 : corpus_size - 1;
    s.train_count = train;
    s.test_count = corpus_size - train;
    return s;
}

namespace detail {

/// Largest-remainder apportionment of `total` across weights; deterministic
/// tie-break by larger weight then lower index.
inline std::vector<std::size_t> apportion(std::size_t total,
                                          const std::vector<std::size_t>& weights) {
    const double sum = static_cast<double>(std::accumulate(weights.begin(), weights.end(),
                                                           std::size_t{0}));
    std::vector<std::size_t> out(weights.size(), 0);
    if (sum == 0.0 || total == 0) return out;
    std::vector<double> remainders(weights.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        const double exact = static_cast<double>(total) * static_cast<double>(weights[c]) / sum;
        out[c] = static_cast<std::size_t>(exact);
        remainders[c] = exact - static_cast<double>(out[c]);
        assigned += out[c];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return a < b;
    });
    for (std::size_t k = 0; assigned < total; ++k) {
        ++out[order[k % order.size()]];
        ++assigned;
    }
    return out;
}

}  // namespace detail

/// Seeded shuffle then head/tail split. Stratified mode instead apportions
/// each class across the two splits (largest remainder, so per-class counts
/// stay within one example of exact proportionality). Examples beyond
/// train_count+test_count are left out of both splits.
/// Index-level core of the split: takes only the class labels, returns the
/// example indices of (train, test). Splitting by index lets callers divide
/// a corpus before encoding it, which matters because the vocabulary must be
/// built from the training portion alone.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<std::size_t>& labels, const SplitSpec& spec) {
    const std::size_t n = labels.size();
    if (n < spec.train_count + spec.test_count)
        throw SizeMismatch("corpus has " + std::to_string(n) + " examples, split needs " +
                           std::to_string(spec.train_count + spec.test_count));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    nn::Rng rng(nn::Rng::mix(spec.seed, 1));
    rng.shuffle(order);

    std::vector<std::size_t> train, test;
    train.reserve(spec.train_count);
    test.reserve(spec.test_count);

    if (!spec.stratified) {
        for (std::size_t k = 0; k < spec.train_count; ++k) train.push_back(order[k]);
        for (std::size_t k = spec.train_count; k < spec.train_count + spec.test_count; ++k)
            test.push_back(order[k]);
        return {std::move(train), std::move(test)};
    }

    std::size_t num_classes = 0;
    for (std::size_t lab : labels) num_classes = std::max(num_classes, lab + 1);
    std::vector<std::size_t> class_sizes(num_classes, 0);
    for (std::size_t lab : labels) ++class_sizes[lab];

    std::vector<std::size_t> test_quota = detail::apportion(spec.test_count, class_sizes);
    for (std::size_t c = 0; c < num_classes; ++c)
        test_quota[c] = std::min(test_quota[c], class_sizes[c]);
    std::vector<std::size_t> train_quota = detail::apportion(spec.train_count, class_sizes);

    // Cap the train quota at what the test quota leaves and push any excess
    // to the classes with the most headroom (deterministic order).
    std::size_t excess = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        const std::size_t avail = class_sizes[c] - test_quota[c];
        if (train_quota[c] > avail) {
            excess += train_quota[c] - avail;
            train_quota[c] = avail;
        }
    }
    while (excess > 0) {
        std::size_t best = num_classes;
        std::size_t best_room = 0;
        for (std::size_t c = 0; c < num_classes; ++c) {
            const std::size_t room = class_sizes[c] - test_quota[c] - train_quota[c];
            if (room > best_room) {
                best_room = room;
                best = c;
            }
        }
        if (best == num_classes) throw SizeMismatch("stratified split cannot place all examples");
        ++train_quota[best];
        --excess;
    }

    // Walk the shuffled order once, filling test quotas first, so membership
    // is a pure function of (corpus, seed).
    std::vector<std::size_t> test_taken(num_classes, 0), train_taken(num_classes, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lab = labels[order[k]];
        if (test_taken[lab] < test_quota[lab]) {
            test.push_back(order[k]);
            ++test_taken[lab];
        } else if (train_taken[lab] < train_quota[lab]) {
            train.push_back(order[k]);
            ++train_taken[lab];
        }
    }
    return {std::move(train), std::move(test)};
}

inline std::pair<Dataset, Dataset> split_dataset(const Dataset& examples, const SplitSpec& spec) {
    std::vector<std::size_t> labels;
    labels.reserve(examples.size());
    for (const auto& e : examples) labels.push_back(e.label);
    auto [train_idx, test_idx] = split_indices(labels, spec);

    Dataset train, test;
    train.reserve(train_idx.size());
    test.reserve(test_idx.size());
    for (std::size_t i : train_idx) train.push_back(examples[i]);
    for (std::size_t i : test_idx) test.push_back(examples[i]);
    return {std::move(train), std::move(test)};
}

// -------------------------------------------------------------- metrics ----

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Metrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    std::vector<std::vector<std::size_t>> confusion;  // rows: true class, cols: predicted
};

/// Confusion matrix and derived scores; every 0/0 ratio is defined as 0.
inline Metrics compute_metrics(const std::vector<std::size_t>& truth,
                               const std::vector<std::size_t>& predicted,
                               std::size_t num_classes) {
    if (truth.size() != predicted.size())
        throw SizeMismatch("metrics need matching label vectors");
    Metrics m;
    m.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= num_classes || predicted[i] >= num_classes)
            throw SizeMismatch("label out of range in metrics");
        ++m.confusion[truth[i]][predicted[i]];
        if (truth[i] == predicted[i]) ++correct;
    }
    m.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / truth.size();
    m.per_class.resize(num_classes);
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t tp = m.confusion[c][c], row = 0, col = 0;
        for (std::size_t k = 0; k < num_classes; ++k) {
            row += m.confusion[c][k];
            col += m.confusion[k][c];
        }
        ClassMetrics& cm = m.per_class[c];
        cm.precision = col ? static_cast<double>(tp) / col : 0.0;
        cm.recall = row ? static_cast<double>(tp) / row : 0.0;
        cm.f1 = (cm.precision + cm.recall) > 0.0
                    ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                    : 0.0;
        f1_sum += cm.f1;
    }
    m.macro_f1 = num_classes ? f1_sum / num_classes : 0.0;
    return m;
}

// ------------------------------------------------------- train/evaluate ----

struct EpochStats {
    double loss = 0.0;      // mean of mini-batch losses (train mode)
    double accuracy = 0.0;  // eval-mode pass over the whole training set
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    Metrics test;  // filled by evaluate()
    double wall_seconds = 0.0;
    nn::ModelConfig config;
    std::uint64_t seed = 0;
};

namespace detail {

inline nn::BatchIds make_spans(const Dataset& ds, const std::vector<std::size_t>& idx,
                               std::size_t begin, std::size_t end) {
    nn::BatchIds spans;
    spans.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k)
        spans.emplace_back(ds[idx[k]].ids.data(), ds[idx[k]].ids.size());
    return spans;
}

}  // namespace detail

/// Eval-mode argmax predictions for a whole dataset, processed in chunks.
inline std::vector<std::size_t> predict_labels(const nn::ModelGraph& graph, const Dataset& ds,
                                               std::size_t batch_size = 32) {
    std::vector<std::size_t> out;
    out.reserve(ds.size());
    std::vector<std::size_t> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    nn::Rng unused(0);  // eval mode draws nothing
    for (std::size_t start = 0; start < ds.size(); start += batch_size) {
        const std::size_t end = std::min(ds.size(), start + batch_size);
        nn::BatchIds spans = detail::make_spans(ds, idx, start, end);
        nn::ForwardCache cache = nn::model_forward(graph, spans, nn::Mode::eval, unused);
        for (std::size_t r = 0; r < cache.probs.rows(); ++r) {
            const double* p = cache.probs.row(r);
            std::size_t best = 0;
            for (std::size_t c = 1; c < cache.probs.cols(); ++c)
                if (p[c] > p[best]) best = c;
            out.push_back(best);
        }
    }
    return out;
}

inline double dataset_accuracy(const nn::ModelGraph& graph, const Dataset& ds) {
    const std::vector<std::size_t> pred = predict_labels(graph, ds);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (pred[i] == ds[i].label) ++correct;
    return ds.empty() ? 0.0 : static_cast<double>(correct) / ds.size();
}

/// Mini-batch training loop: one seeded reshuffle per epoch, one RMSProp
/// update per batch. The report's epoch list carries mean batch loss and an
/// eval-mode accuracy over the full training set. A NumericError mid-epoch
/// is rethrown with the offending epoch attached.
/// Called after every finished epoch with (1-based epoch number, its stats).
using EpochCallback = std::function<void(std::size_t, const EpochStats&)>;

inline TrainReport train(nn::ModelGraph& graph, const Dataset& train_set, std::size_t epochs,
                         std::size_t batch_size, nn::Rng& rng, nn::RmsProp& opt,
                         const EpochCallback& on_epoch = {}) {
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (train_set.empty() && epochs > 0) throw SizeMismatch("training set is empty");

    TrainReport report;
    report.config = graph.config;
    report.seed = graph.config.seed;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> labels;

    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        try {
            rng.shuffle(order);
            double loss_sum = 0.0;
            std::size_t batches = 0;
            for (std::size_t start = 0; start < order.size(); start += batch_size) {
                const std::size_t end = std::min(order.size(), start + batch_size);
                nn::BatchIds spans = detail::make_spans(train_set, order, start, end);
                labels.clear();
                for (std::size_t k = start; k < end; ++k)
                    labels.push_back(train_set[order[k]].label);

                graph.zero_grads();
                nn::ForwardCache cache = nn::model_forward(graph, spans, nn::Mode::train, rng);
                const nn::Tensor2D onehot = nn::make_onehot(labels, graph.config.num_classes);
                nn::CrossEntropyResult ce = nn::cross_entropy(cache.probs, onehot);
                nn::model_backward(graph, spans, cache, ce.dlogits);
                nn::apply_gradients(graph, opt);
                loss_sum += ce.loss;
                ++batches;
            }
            EpochStats stats;
            stats.loss = batches ? loss_sum / batches : 0.0;
            stats.accuracy = dataset_accuracy(graph, train_set);
            report.epochs.push_back(stats);
            if (on_epoch) on_epoch(epoch, stats);
        } catch (const NumericError& e) {
            throw NumericError("training aborted in epoch " + std::to_string(epoch) + ": " +
                               e.what());
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

inline TrainReport train(nn::ModelGraph& graph, const Dataset& train_set, std::size_t epochs,
                         std::size_t batch_size, nn::Rng& rng) {
    nn::RmsProp opt;
    return train(graph, train_set, epochs, batch_size, rng, opt);
}

/// Pure: runs eval-mode forward passes and computes metrics.
inline Metrics evaluate(const nn::ModelGraph& graph, const Dataset& test_set) {
    std::vector<std::size_t> truth;
    truth.reserve(test_set.size());
    for (const auto& e : test_set) truth.push_back(e.label);
    return compute_metrics(truth, predict_labels(graph, test_set), graph.config.num_classes);
}

/// Accuracy of always predicting the most frequent training class
/// (ties broken toward the lower class index).
inline double baseline_majority(const Dataset& train_set, const Dataset& test_set) {
    std::vector<std::size_t> counts;
    for (const auto& e : train_set) {
        if (e.label >= counts.size()) counts.resize(e.label + 1, 0);
        ++counts[e.label];
    }
    std::size_t majority = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[majority]) majority = c;
    std::size_t correct = 0;
    for (const auto& e : test_set)
        if (e.label == majority) ++correct;
    return test_set.empty() ? 0.0 : static_cast<double>(correct) / test_set.size();
}

// -------------------------------------------------------------- predict ----

struct Prediction {
    std::string tag;
    std::vector<double> probabilities;  // LabelSet order
    bool empty_after_preprocessing = false;
};

/// Full pipeline on one raw statement: clean, tokenize, stopwords, lemmas,
/// encode, pad, eval-mode forward. A statement that preprocesses to zero
/// tokens is still classified (all-PAD input) with the warning flag set.
inline Prediction predict(const nn::ModelGraph& graph, const text::Vocabulary& vocab,
                          const text::PipelineConfig& pipeline,
                          const std::string& raw_statement) {
    const std::vector<std::string> tokens = text::preprocess_statement(raw_statement, pipeline);
    const std::vector<text::TokenId> ids =
        text::encode_and_pad(tokens, vocab, graph.config.max_len);

    nn::BatchIds spans;
    spans.emplace_back(ids.data(), ids.size());
    nn::Rng unused(0);
    nn::ForwardCache cache = nn::model_forward(graph, spans, nn::Mode::eval, unused);

    Prediction p;
    p.empty_after_preprocessing = tokens.empty();
    p.probabilities.assign(cache.probs.row(0), cache.probs.row(0) + cache.probs.cols());
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.probabilities.size(); ++c)
        if (p.probabilities[c] > p.probabilities[best]) best = c;
    p.tag = text::LabelSet::classes()[best];
    return p;
}

// ------------------------------------------------------------- reports ----

/// Machine-readable summary. Fixed key order and fixed 6-decimal formatting
/// keep the file byte-stable for a given (config, seed, corpus).
inline void write_metrics(std::ostream& out, nn::Arch arch, std::uint64_t seed,
                          const Metrics& test, double train_acc_final, std::size_t epochs) {
    out << "arch=" << nn::arch_name(arch) << "\n";
    out << "seed=" << seed << "\n";
    out << std::fixed << std::setprecision(6);
    out << "test_accuracy=" << test.accuracy << "\n";
    out << "macro_f1=" << test.macro_f1 << "\n";
    out << "train_acc_final=" << train_acc_final << "\n";
    out << "epochs=" << epochs << "\n";
}

inline void write_metrics(std::ostream& out, const TrainReport& report) {
    const double final_acc = report.epochs.empty() ? 0.0 : report.epochs.back().accuracy;
    write_metrics(out, report.config.arch, report.seed, report.test, final_acc,
                  report.epochs.size());
}

/// Human-readable run report. Wall-clock time lives here, not in
/// metrics.txt, so the metrics file stays deterministic.
inline void write_report(std::ostream& out, const TrainReport& report) {
    const nn::ModelConfig& cfg = report.config;
    out << "architecture: " << nn::arch_name(cfg.arch) << "\n";
    out << "seed: " << report.seed << "\n";
    out << "vocab_size: " << cfg.vocab_size << "\n";
    out << "max_len: " << cfg.max_len << "\n";
    out << "emb_dim: " << cfg.emb_dim << "\n";
    out << "hidden: " << cfg.hidden << "\n";
    out << "depth: " << cfg.depth << "\n";
    out << "pooling: " << nn::pooling_name(cfg.pooling) << "\n";
    out << "dropout_rate: " << cfg.dropout_rate << "\n";
    out << "wall_seconds: " << report.wall_seconds << "\n\n";

    out << std::fixed << std::setprecision(6);
    out << "epoch\tloss\ttrain_acc\n";
    for (std::size_t i = 0; i < report.epochs.size(); ++i)
        out << (i + 1) << "\t" << report.epochs[i].loss << "\t" << report.epochs[i].accuracy
            << "\n";
    out << "\n";

    out << "test_accuracy: " << report.test.accuracy << "\n";
    out << "macro_f1: " << report.test.macro_f1 << "\n\n";

    const auto& classes = text::LabelSet::classes();
    out << "class\tprecision\trecall\tf1\n";
    for (std::size_t c = 0; c < report.test.per_class.size(); ++c) {
        const char* name = c < classes.size() ? classes[c].c_str() : "?";
        const ClassMetrics& cm = report.test.per_class[c];
        out << name << "\t" << cm.precision << "\t" << cm.recall << "\t" << cm.f1 << "\n";
    }
    out << "\nconfusion (rows: true, cols: predicted)\n";
    for (const auto& row : report.test.confusion) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
        out << "\n";
    }
}

}  // namespace probtag
