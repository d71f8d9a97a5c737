// System-level tests on top of the library: splitting, metrics, the majority
// baseline, the training loop's contracts (determinism, descent, failure
// modes), prediction, and the vocab/dataset file formats.
#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include "probtag/probtag.hpp"
#include "support.hpp"

using namespace probtag;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

/// Encodes a synthetic corpus with vocab and max_len drawn from all of it.
/// Fine for tests that train and evaluate on the same pool.
struct EncodedCorpus {
    Dataset examples;
    text::Vocabulary vocab;
    std::size_t max_len = 0;
};

EncodedCorpus encode_corpus(const testsup::SyntheticCorpus& corpus) {
    EncodedCorpus out;
    out.vocab = text::build_vocab(corpus.tokens);
    out.max_len = text::compute_max_len(corpus.tokens);
    for (std::size_t i = 0; i < corpus.tokens.size(); ++i) {
        text::EncodedExample e;
        e.ids = text::encode_and_pad(corpus.tokens[i], out.vocab, out.max_len);
        e.label = corpus.labels[i];
        out.examples.push_back(std::move(e));
    }
    return out;
}

testsup::SyntheticCorpus small_corpus(std::uint64_t seed = 0) {
    testsup::SyntheticSpec spec;
    spec.per_class = {8, 8, 8};
    spec.len_min = 20;
    spec.len_max = 40;
    spec.marker_fraction = 0.8;
    spec.noise = 0.0;
    spec.markers_per_class = 10;
    spec.filler_vocab = 50;
    spec.seed = seed;
    return testsup::make_synthetic_corpus(spec);
}

nn::ModelConfig config_for(nn::Arch arch, const EncodedCorpus& enc, std::uint64_t seed,
                           double dropout = 0.0) {
    nn::ModelConfig cfg;
    cfg.arch = arch;
    cfg.vocab_size = enc.vocab.size();
    cfg.max_len = enc.max_len;
    cfg.emb_dim = 16;
    cfg.hidden = 8;
    cfg.dropout_rate = dropout;
    cfg.seed = seed;
    return cfg;
}

struct Run {
    std::string model_bytes;
    std::string metrics_text;
    TrainReport report;
};

/// Mirrors the CLI wiring: init stream for parameters, train stream for
/// shuffles and dropout, fresh optimizer.
Run run_training(const nn::ModelConfig& cfg, const Dataset& train_set,
                 const Dataset& test_set, std::size_t epochs, std::size_t batch_size) {
    nn::ModelGraph graph = nn::build_model(cfg);
    nn::Rng rng(nn::Rng::mix(cfg.seed, 3));
    nn::RmsProp opt;
    Run r;
    r.report = probtag::train(graph, train_set, epochs, batch_size, rng, opt);
    r.report.test = evaluate(graph, test_set);
    r.model_bytes = serialize_model(graph);
    std::ostringstream m;
    write_metrics(m, r.report);
    r.metrics_text = m.str();
    return r;
}

std::vector<std::size_t> label_pattern(std::size_t n) {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (i * 7) % 3;
    return labels;
}

Dataset labels_only(const std::vector<std::size_t>& labels) {
    Dataset ds;
    for (std::size_t lab : labels) ds.push_back({{1, 0}, lab});
    return ds;
}

}  // namespace

// ---------------------------------------------------------------- splits ----

TEST_CASE("default split partitions 992 examples into 950 and 42") {
    const std::vector<std::size_t> labels = label_pattern(992);
    SplitSpec spec;
    spec.seed = 7;
    const auto [tr, te] = split_indices(labels, spec);
    CHECK(tr.size() == 950);
    CHECK(te.size() == 42);

    std::vector<std::size_t> all;
    all.insert(all.end(), tr.begin(), tr.end());
    all.insert(all.end(), te.begin(), te.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> want(992);
    std::iota(want.begin(), want.end(), 0);
    CHECK(all == want);  // exact partition, no duplicates, no gaps

    const auto [tr2, te2] = split_indices(labels, spec);
    CHECK(tr == tr2);
    CHECK(te == te2);

    SplitSpec other = spec;
    other.seed = 8;
    CHECK(split_indices(labels, other).second != te);
}

TEST_CASE("split leaves surplus examples out of both halves") {
    const std::vector<std::size_t> labels = label_pattern(1000);
    SplitSpec spec;
    spec.seed = 1;
    const auto [tr, te] = split_indices(labels, spec);
    CHECK(tr.size() == 950);
    CHECK(te.size() == 42);
    std::set<std::size_t> seen(tr.begin(), tr.end());
    seen.insert(te.begin(), te.end());
    CHECK(seen.size() == 992);  // disjoint
    CHECK(*seen.rbegin() < 1000);
}

TEST_CASE("split rejects a corpus smaller than the requested counts") {
    SplitSpec spec;  // 950 + 42
    CHECK_THROWS_AS(split_indices(label_pattern(991), spec), SizeMismatch);
    CHECK_THROWS_AS(split_indices({}, spec), SizeMismatch);
}

TEST_CASE("stratified split keeps per-class proportions within one example") {
    // class sizes 90 / 60 / 42
    std::vector<std::size_t> labels;
    labels.insert(labels.end(), 90, 0);
    labels.insert(labels.end(), 60, 1);
    labels.insert(labels.end(), 42, 2);
    nn::Rng scramble(11);
    scramble.shuffle(labels);
    const std::size_t n = labels.size();  // 192

    const SplitSpec spec = proportioned_split(n, 5, true);
    REQUIRE(spec.stratified);
    REQUIRE(spec.train_count + spec.test_count == n);
    const auto [tr, te] = split_indices(labels, spec);
    CHECK(tr.size() == spec.train_count);
    CHECK(te.size() == spec.test_count);

    const std::size_t class_sizes[3] = {90, 60, 42};
    auto class_counts = [&](const std::vector<std::size_t>& idx) {
        std::array<std::size_t, 3> c{0, 0, 0};
        for (std::size_t i : idx) ++c.at(labels[i]);
        return c;
    };
    const auto tr_c = class_counts(tr);
    const auto te_c = class_counts(te);
    for (std::size_t c = 0; c < 3; ++c) {
        const double frac = static_cast<double>(class_sizes[c]) / static_cast<double>(n);
        CHECK(std::abs(static_cast<double>(tr_c[c]) -
                       frac * static_cast<double>(spec.train_count)) <= 1.0);
        CHECK(std::abs(static_cast<double>(te_c[c]) -
                       frac * static_cast<double>(spec.test_count)) <= 1.0);
        CHECK(tr_c[c] + te_c[c] == class_sizes[c]);  // nothing dropped
    }

    // plain split with the same seed lands elsewhere; stratified is its own mode
    SplitSpec plain = spec;
    plain.stratified = false;
    CHECK(split_indices(labels, plain).second != te);
}

TEST_CASE("proportioned_split reference points") {
    const SplitSpec full = proportioned_split(992, 3);
    CHECK(full.train_count == 950);
    CHECK(full.test_count == 42);
    CHECK(full.seed == 3);

    const SplitSpec half = proportioned_split(496, 3);
    CHECK(half.train_count == 475);
    CHECK(half.test_count == 21);

    const SplitSpec tiny = proportioned_split(10, 3);
    CHECK(tiny.train_count == 9);  // keeps one test example
    CHECK(tiny.test_count == 1);

    const SplitSpec one = proportioned_split(1, 3);
    CHECK(one.train_count == 0);
    CHECK(one.test_count == 1);
}

TEST_CASE("split_dataset carries whole examples") {
    // encode the example's own position into ids[0] to track identity
    Dataset ds;
    for (std::size_t i = 0; i < 30; ++i)
        ds.push_back({{static_cast<text::TokenId>(i + 2), 0}, i % 3});
    SplitSpec spec;
    spec.train_count = 24;
    spec.test_count = 6;
    spec.seed = 2;
    const auto [tr, te] = split_dataset(ds, spec);
    REQUIRE(tr.size() == 24);
    REQUIRE(te.size() == 6);
    std::set<text::TokenId> seen;
    for (const auto& e : tr) seen.insert(e.ids[0]);
    for (const auto& e : te) {
        seen.insert(e.ids[0]);
        CHECK(e.label == (e.ids[0] - 2) % 3);  // label still belongs to its ids
    }
    CHECK(seen.size() == 30);
}

// --------------------------------------------------------------- metrics ----

TEST_CASE("metrics match the hand-computed fixture") {
    const std::vector<std::size_t> truth{0, 0, 0, 0, 1, 1, 1, 2, 2, 2};
    const std::vector<std::size_t> pred{0, 0, 1, 2, 1, 1, 0, 2, 2, 1};
    const Metrics m = compute_metrics(truth, pred, 3);

    const std::vector<std::vector<std::size_t>> confusion{{2, 1, 1}, {1, 2, 0}, {0, 1, 2}};
    CHECK(m.confusion == confusion);
    CHECK(m.accuracy == Approx(0.6).margin(1e-12));

    REQUIRE(m.per_class.size() == 3);
    CHECK(m.per_class[0].precision == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(m.per_class[0].recall == Approx(0.5).margin(1e-12));
    CHECK(m.per_class[0].f1 == Approx(4.0 / 7.0).margin(1e-12));
    CHECK(m.per_class[1].f1 == Approx(4.0 / 7.0).margin(1e-12));
    CHECK(m.per_class[2].f1 == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(m.macro_f1 == Approx(38.0 / 63.0).margin(1e-12));
}

TEST_CASE("metrics degenerate cases") {
    const std::vector<std::size_t> perfect{0, 1, 2, 1, 0};
    const Metrics all = compute_metrics(perfect, perfect, 3);
    CHECK(all.accuracy == 1.0);
    CHECK(all.macro_f1 == Approx(1.0).margin(1e-12));

    // constant predictor on a balanced set: 14 of each class, all predicted 0
    std::vector<std::size_t> truth;
    for (std::size_t c = 0; c < 3; ++c) truth.insert(truth.end(), 14, c);
    const std::vector<std::size_t> constant(truth.size(), 0);
    const Metrics m = compute_metrics(truth, constant, 3);
    CHECK(m.accuracy == Approx(1.0 / 3.0).margin(1e-12));
    // class 0: precision 1/3, recall 1 -> f1 = 1/2; absent classes score 0
    CHECK(m.per_class[0].f1 == Approx(0.5).margin(1e-12));
    CHECK(m.per_class[1].f1 == 0.0);
    CHECK(m.per_class[2].f1 == 0.0);
    CHECK(m.macro_f1 == Approx(1.0 / 6.0).margin(1e-12));

    CHECK_THROWS_AS(compute_metrics({0, 1}, {0}, 3), SizeMismatch);
}

TEST_CASE("confusion marginals add up") {
    nn::Rng rng(41);
    std::vector<std::size_t> truth(200), pred(200);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        truth[i] = rng.uniform_index(3);
        pred[i] = rng.uniform_index(3);
    }
    const Metrics m = compute_metrics(truth, pred, 3);
    std::size_t diag = 0;
    for (std::size_t r = 0; r < 3; ++r) {
        std::size_t row_sum = 0, truth_count = 0, col_sum = 0, pred_count = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            row_sum += m.confusion[r][c];
            col_sum += m.confusion[c][r];
        }
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth_count += truth[i] == r;
            pred_count += pred[i] == r;
        }
        CHECK(row_sum == truth_count);
        CHECK(col_sum == pred_count);
        diag += m.confusion[r][r];
    }
    CHECK(m.accuracy == Approx(static_cast<double>(diag) / 200.0).margin(1e-12));
}

// -------------------------------------------------------------- baseline ----

TEST_CASE("majority baseline") {
    // balanced training: tie broken toward class 0
    std::vector<std::size_t> balanced;
    for (std::size_t c = 0; c < 3; ++c) balanced.insert(balanced.end(), 14, c);
    std::vector<std::size_t> test_labels;
    for (std::size_t c = 0; c < 3; ++c) test_labels.insert(test_labels.end(), 14, c);
    CHECK(baseline_majority(labels_only(balanced), labels_only(test_labels)) ==
          Approx(1.0 / 3.0).margin(1e-12));

    // clear majority: predicting it hits exactly its share of the test set
    std::vector<std::size_t> skewed;
    skewed.insert(skewed.end(), 5, 0);
    skewed.insert(skewed.end(), 32, 2);
    std::vector<std::size_t> half;
    half.insert(half.end(), 21, 2);
    half.insert(half.end(), 21, 0);
    CHECK(baseline_majority(labels_only(skewed), labels_only(half)) ==
          Approx(0.5).margin(1e-12));

    // tie 10/10 prefers the lower class index
    std::vector<std::size_t> tie;
    tie.insert(tie.end(), 10, 0);
    tie.insert(tie.end(), 10, 1);
    tie.insert(tie.end(), 5, 2);
    CHECK(baseline_majority(labels_only(tie), labels_only({0, 0})) == 1.0);
    CHECK(baseline_majority(labels_only(tie), labels_only({1, 1})) == 0.0);

    // brute-force recount on random labels
    nn::Rng rng(55);
    std::vector<std::size_t> tr(100), te(40);
    for (auto& l : tr) l = rng.uniform_index(3);
    for (auto& l : te) l = rng.uniform_index(3);
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t l : tr) ++counts[l];
    std::size_t best = 0;
    for (std::size_t c = 1; c < 3; ++c)
        if (counts[c] > counts[best]) best = c;
    std::size_t hits = 0;
    for (std::size_t l : te) hits += l == best;
    CHECK(baseline_majority(labels_only(tr), labels_only(te)) ==
          Approx(static_cast<double>(hits) / 40.0).margin(1e-12));
}

// -------------------------------------------------------------- training ----

TEST_CASE("zero epochs leave the model untouched") {
    const EncodedCorpus enc = encode_corpus(small_corpus());
    nn::ModelGraph graph = nn::build_model(config_for(nn::Arch::mlp, enc, 4));
    const std::string before = serialize_model(graph);

    nn::Rng rng(nn::Rng::mix(4, 3));
    const TrainReport report = probtag::train(graph, enc.examples, 0, 8, rng);
    CHECK(report.epochs.empty());
    CHECK(serialize_model(graph) == before);

    // rng untouched too: a zero-epoch run must not perturb downstream draws
    nn::Rng fresh(nn::Rng::mix(4, 3));
    CHECK(rng.next_u64() == fresh.next_u64());
}

TEST_CASE("training rejects unusable inputs") {
    const EncodedCorpus enc = encode_corpus(small_corpus());
    nn::ModelGraph graph = nn::build_model(config_for(nn::Arch::mlp, enc, 4));
    nn::Rng rng(1);
    CHECK_THROWS_AS(probtag::train(graph, enc.examples, 1, 0, rng), ConfigError);
    CHECK_THROWS_AS(probtag::train(graph, {}, 1, 8, rng), SizeMismatch);
    CHECK_NOTHROW(probtag::train(graph, {}, 0, 8, rng));  // nothing to do is fine
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    const EncodedCorpus enc = encode_corpus(small_corpus());
    const Dataset& ds = enc.examples;
    for (nn::Arch arch : {nn::Arch::mlp, nn::Arch::lstm, nn::Arch::gru}) {
        INFO(nn::arch_name(arch));
        const nn::ModelConfig cfg =
            config_for(arch, enc, 11, arch == nn::Arch::mlp ? 0.5 : 0.0);
        const Run a = run_training(cfg, ds, ds, 3, 8);
        const Run b = run_training(cfg, ds, ds, 3, 8);
        CHECK(a.model_bytes == b.model_bytes);
        CHECK(a.metrics_text == b.metrics_text);

        nn::ModelConfig other = cfg;
        other.seed = 12;
        const Run c = run_training(other, ds, ds, 3, 8);
        CHECK(a.model_bytes != c.model_bytes);
    }
}

TEST_CASE("fifty optimizer steps cut the loss on a tiny batch") {
    testsup::SyntheticSpec spec;
    spec.per_class = {2, 1, 1};
    spec.len_min = 10;
    spec.len_max = 14;
    spec.marker_fraction = 0.8;
    spec.noise = 0.0;
    spec.markers_per_class = 5;
    spec.filler_vocab = 20;
    spec.seed = 9;
    const EncodedCorpus enc = encode_corpus(testsup::make_synthetic_corpus(spec));
    REQUIRE(enc.examples.size() == 4);

    for (nn::Arch arch : {nn::Arch::mlp, nn::Arch::lstm, nn::Arch::gru}) {
        INFO(nn::arch_name(arch));
        nn::ModelGraph graph = nn::build_model(config_for(arch, enc, 21));
        nn::Rng rng(nn::Rng::mix(21, 3));
        // batch == dataset, so one epoch is exactly one optimizer step
        const TrainReport report = probtag::train(graph, enc.examples, 50, 4, rng);
        REQUIRE(report.epochs.size() == 50);
        CHECK(report.epochs.back().loss < report.epochs.front().loss);
        for (const auto& e : report.epochs) CHECK(std::isfinite(e.loss));
    }
}

TEST_CASE("numeric blowups abort with the failing epoch in the message") {
    const EncodedCorpus enc = encode_corpus(small_corpus());
    nn::ModelGraph graph = nn::build_model(config_for(nn::Arch::mlp, enc, 4));
    nn::Rng rng(nn::Rng::mix(4, 3));
    nn::RmsProp opt;
    opt.lr = 1e155;  // first update catapults the weights beyond recovery
    CHECK_THROWS_AS(
        [&] {
            nn::ModelGraph g2 = nn::build_model(config_for(nn::Arch::mlp, enc, 4));
            nn::Rng r2(nn::Rng::mix(4, 3));
            nn::RmsProp o2;
            o2.lr = 1e155;
            probtag::train(g2, enc.examples, 3, 8, r2, o2);
        }(),
        NumericError);
    CHECK_THROWS_WITH(probtag::train(graph, enc.examples, 3, 8, rng, opt),
                      ContainsSubstring("epoch 1"));
}

TEST_CASE("overfitting a separable subset: smooth loss descent, perfect accuracy") {
    const EncodedCorpus enc = encode_corpus(small_corpus(3));
    nn::ModelGraph graph = nn::build_model(config_for(nn::Arch::mlp, enc, 13));
    nn::Rng rng(nn::Rng::mix(13, 3));
    const TrainReport report = probtag::train(graph, enc.examples, 160, 8, rng);

    // 5-epoch moving average of the loss never increases
    std::vector<double> losses;
    for (const auto& e : report.epochs) losses.push_back(e.loss);
    REQUIRE(losses.size() == 160);
    auto window = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t k = i; k < i + 5; ++k) s += losses[k];
        return s / 5.0;
    };
    for (std::size_t i = 0; i + 6 <= losses.size(); ++i)
        CHECK(window(i + 1) <= window(i) + 1e-9);

    CHECK(report.epochs.back().accuracy == 1.0);
}

// --------------------------------------------------------------- predict ----

TEST_CASE("predict runs the full pipeline and returns a distribution") {
    const testsup::SyntheticCorpus corpus = small_corpus(17);
    const EncodedCorpus enc = encode_corpus(corpus);
    nn::ModelGraph graph = nn::build_model(config_for(nn::Arch::mlp, enc, 19));
    nn::Rng rng(nn::Rng::mix(19, 3));
    probtag::train(graph, enc.examples, 280, 8, rng);

    text::PipelineConfig pipeline;  // synthetic tokens sail through untouched
    pipeline.max_len = enc.max_len;

    std::size_t agree = 0;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        const Prediction p =
            predict(graph, enc.vocab, pipeline, corpus.records[i].statement);
        CHECK_FALSE(p.empty_after_preprocessing);
        REQUIRE(p.probabilities.size() == 3);
        double sum = 0.0;
        for (double q : p.probabilities) {
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            sum += q;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(text::LabelSet::index_of(p.tag).has_value());
        agree += p.tag == corpus.records[i].tags[0];
    }
    // the model overfits this pool to 100% in eval mode (same data it trained on)
    CHECK(agree == corpus.records.size());

    const Prediction empty = predict(graph, enc.vocab, pipeline, "$x$");
    CHECK(empty.empty_after_preprocessing);
    CHECK(empty.probabilities.size() == 3);
}

TEST_CASE("a reloaded model predicts bit-identically") {
    const EncodedCorpus enc = encode_corpus(small_corpus(23));
    for (nn::Arch arch : {nn::Arch::mlp, nn::Arch::lstm, nn::Arch::gru}) {
        INFO(nn::arch_name(arch));
        nn::ModelGraph graph = nn::build_model(config_for(arch, enc, 29));
        nn::Rng rng(nn::Rng::mix(29, 3));
        probtag::train(graph, enc.examples, 2, 8, rng);

        const nn::ModelGraph back = deserialize_model(serialize_model(graph));
        nn::Rng idgen(31);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<text::TokenId> ids(enc.max_len);
            for (auto& id : ids)
                id = static_cast<text::TokenId>(idgen.uniform_index(enc.vocab.size()));
            nn::BatchIds batch{std::span<const text::TokenId>(ids.data(), ids.size())};
            nn::Rng r1(0), r2(0);
            CHECK(nn::model_forward(graph, batch, nn::Mode::eval, r1).probs ==
                  nn::model_forward(back, batch, nn::Mode::eval, r2).probs);
        }
    }
}

// ------------------------------------------------------------ vocab files ----

TEST_CASE("vocab file round-trips") {
    const EncodedCorpus enc = encode_corpus(small_corpus(37));
    testsup::TempDir tmp;
    save_vocab(enc.vocab, enc.max_len, tmp.str("vocab.tsv"));
    const LoadedVocab back = load_vocab(tmp.str("vocab.tsv"));
    CHECK(back.max_len == enc.max_len);
    CHECK(back.vocab.id_to_token == enc.vocab.id_to_token);
    CHECK(back.vocab.id_to_frequency == enc.vocab.id_to_frequency);
    CHECK(back.vocab.token_to_id == enc.vocab.token_to_id);
}

TEST_CASE("a ten-thousand token vocab survives the trip") {
    std::vector<std::vector<std::string>> seqs(1);
    for (std::size_t i = 0; i < 10000; ++i)
        // descending frequency by construction: token k appears once, but
        // distinct names keep the table large
        seqs[0].push_back("tok" + std::to_string(i));
    const text::Vocabulary v = text::build_vocab(seqs);
    REQUIRE(v.size() == 10002);
    testsup::TempDir tmp;
    save_vocab(v, 951, tmp.str("big.tsv"));
    const LoadedVocab back = load_vocab(tmp.str("big.tsv"));
    CHECK(back.vocab.id_to_token == v.id_to_token);
    CHECK(back.vocab.token_to_id.size() == 10000);
}

TEST_CASE("vocab file validation") {
    testsup::TempDir tmp;

    // tokens with separator bytes cannot be written at all
    text::Vocabulary bad;
    bad.id_to_token = {"<pad>", "<oov>", "has\ttab"};
    bad.id_to_frequency = {0, 0, 1};
    CHECK_THROWS_AS(save_vocab(bad, 5, tmp.str("bad.tsv")), InvalidToken);

    testsup::spit(tmp.str("magic.tsv"), "something-else v1 size=2 max_len=5\n");
    CHECK_THROWS_AS(load_vocab(tmp.str("magic.tsv")), BadMagic);

    testsup::spit(tmp.str("vnext.tsv"), "probtag-vocab v2 size=2 max_len=5\n");
    CHECK_THROWS_AS(load_vocab(tmp.str("vnext.tsv")), VersionUnsupported);

    const std::string header = "probtag-vocab v1 size=3 max_len=5\n";
    testsup::spit(tmp.str("gap.tsv"), header + "0\t<pad>\t0\n2\t<oov>\t0\n");
    CHECK_THROWS_AS(load_vocab(tmp.str("gap.tsv")), InvalidToken);

    testsup::spit(tmp.str("short.tsv"), header + "0\t<pad>\t0\n1\t<oov>\t0\n");
    CHECK_THROWS_AS(load_vocab(tmp.str("short.tsv")), InvalidToken);  // declares 3, has 2

    testsup::spit(tmp.str("nosentinel.tsv"),
                  "probtag-vocab v1 size=2 max_len=5\n0\tfoo\t0\n1\tbar\t0\n");
    CHECK_THROWS_AS(load_vocab(tmp.str("nosentinel.tsv")), InvalidToken);

    CHECK_THROWS_AS(load_vocab(tmp.str("missing.tsv")), IoError);
}

// ---------------------------------------------------------- dataset files ----

TEST_CASE("dataset file round-trips") {
    const EncodedCorpus enc = encode_corpus(small_corpus(43));
    testsup::TempDir tmp;
    save_dataset(enc.examples, enc.max_len, tmp.str("train.ds"));
    const LoadedDataset back = load_dataset(tmp.str("train.ds"));
    CHECK(back.max_len == enc.max_len);
    REQUIRE(back.examples.size() == enc.examples.size());
    for (std::size_t i = 0; i < back.examples.size(); ++i) {
        CHECK(back.examples[i].label == enc.examples[i].label);
        CHECK(back.examples[i].ids == enc.examples[i].ids);
    }
}

TEST_CASE("dataset file validation") {
    testsup::TempDir tmp;
    Dataset ds;
    ds.push_back({{2, 3, 0}, 1});
    ds.push_back({{2, 3}, 0});  // wrong length
    CHECK_THROWS_AS(save_dataset(ds, 3, tmp.str("bad.ds")), SizeMismatch);

    testsup::spit(tmp.str("magic.ds"), "not-a-dataset v1 count=0 max_len=3\n");
    CHECK_THROWS_AS(load_dataset(tmp.str("magic.ds")), BadMagic);

    testsup::spit(tmp.str("vnext.ds"), "probtag-dataset v9 count=0 max_len=3\n");
    CHECK_THROWS_AS(load_dataset(tmp.str("vnext.ds")), VersionUnsupported);

    testsup::spit(tmp.str("shortline.ds"), "probtag-dataset v1 count=1 max_len=3\n1\t2 3\n");
    CHECK_THROWS_AS(load_dataset(tmp.str("shortline.ds")), SizeMismatch);

    testsup::spit(tmp.str("count.ds"), "probtag-dataset v1 count=2 max_len=2\n1\t2 3\n");
    CHECK_THROWS_AS(load_dataset(tmp.str("count.ds")), SizeMismatch);
}

// --------------------------------------------------------------- reports ----

TEST_CASE("metrics file has fixed keys, order and formatting") {
    Metrics test;
    test.accuracy = 0.5;
    test.macro_f1 = 38.0 / 63.0;
    std::ostringstream out;
    write_metrics(out, nn::Arch::gru, 9, test, 0.98, 30);
    CHECK(out.str() ==
          "arch=gru\n"
          "seed=9\n"
          "test_accuracy=0.500000\n"
          "macro_f1=0.603175\n"
          "train_acc_final=0.980000\n"
          "epochs=30\n");

    // byte-stable across repeated calls
    std::ostringstream again;
    write_metrics(again, nn::Arch::gru, 9, test, 0.98, 30);
    CHECK(again.str() == out.str());
}

TEST_CASE("human report mentions every section") {
    const EncodedCorpus enc = encode_corpus(small_corpus(47));
    const Run run = run_training(config_for(nn::Arch::mlp, enc, 51), enc.examples,
                                 enc.examples, 2, 8);
    std::ostringstream out;
    write_report(out, run.report);
    const std::string text = out.str();
    for (const char* needle :
         {"architecture: mlp", "seed: 51", "epoch\tloss\ttrain_acc", "test_accuracy:",
          "macro_f1:", "class\tprecision\trecall\tf1", "greedy", "graphs", "implementation",
          "confusion"}) {
        CHECK_THAT(text, ContainsSubstring(needle));
    }
}
