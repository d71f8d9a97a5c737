// Shared helpers for the test binaries: scratch directories, subprocess
// capture, finite-difference gradient checking, and the seeded synthetic
// corpus generator used by the overfit and reproduction suites.
#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "probtag/pages.hpp"
#include "probtag/rng.hpp"
#include "probtag/tensor.hpp"
#include "probtag/text.hpp"

namespace testsup {

namespace fs = std::filesystem;

// ------------------------------------------------------------ scratch fs ----

/// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "probtag-test-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string str(const std::string& child = "") const {
        return child.empty() ? path_.string() : (path_ / child).string();
    }

private:
    fs::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path);
}

// ------------------------------------------------------------ subprocess ----

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

/// Runs a shell command, capturing stdout; stderr goes to /dev/null unless
/// the caller redirects it inside `cmd`.
inline CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// ---------------------------------------------------------- golden reader ----

inline std::map<std::string, std::string> read_golden(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open golden file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

// ------------------------------------------------------ gradient checking ----

/// |a-b| relative to the larger magnitude, floored at 1 so near-zero pairs
/// compare absolutely.
inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Central finite differences over every element of `param`, compared with
/// the already-computed analytic `grad`. `loss` must re-run the forward pass
/// and must not depend on any RNG. Returns the worst relative error.
template <typename LossFn>
double check_param_grads(probtag::nn::Tensor2D& param, const probtag::nn::Tensor2D& grad,
                         LossFn loss, double step = 1e-5) {
    double worst = 0.0;
    for (std::size_t i = 0, n = param.size(); i < n; ++i) {
        const double saved = param.data()[i];
        param.data()[i] = saved + step;
        const double up = loss();
        param.data()[i] = saved - step;
        const double down = loss();
        param.data()[i] = saved;
        const double fd = (up - down) / (2.0 * step);
        worst = std::max(worst, rel_err(fd, grad.data()[i]));
    }
    return worst;
}

// ------------------------------------------------- synthetic corpus maker ----

/// Knobs of the seeded document generator. Statements are space-joined
/// synthetic tokens chosen so the text pipeline passes them through
/// unchanged: no stopword hits, no lemmatizer rule fires (every token ends
/// in 'q'), nothing for clean_text to rewrite.
struct SyntheticSpec {
    std::array<std::size_t, 3> per_class{0, 0, 0};
    std::size_t len_min = 90;
    std::size_t len_max = 150;
    double marker_fraction = 0.35;   // positions carrying a class marker
    double noise = 0.25;             // marker drawn from a random class instead
    std::size_t markers_per_class = 40;
    std::size_t filler_vocab = 600;
    std::uint64_t seed = 0;
};

struct SyntheticCorpus {
    std::vector<std::vector<std::string>> tokens;
    std::vector<std::size_t> labels;
    std::vector<probtag::ingest::ProblemRecord> records;  // same data as a scraped corpus
};

inline std::string marker_token(std::size_t cls, std::size_t k) {
    static const char* cls_letter[3] = {"a", "b", "c"};
    return std::string("m") + cls_letter[cls] + std::to_string(k) + "q";
}

inline std::string filler_token(std::size_t k) { return "f" + std::to_string(k) + "q"; }

inline SyntheticCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
    const auto& classes = probtag::text::LabelSet::classes();
    probtag::nn::Rng rng(spec.seed);
    SyntheticCorpus out;

    // Interleave classes so a head/tail split sees all of them everywhere.
    std::vector<std::size_t> sequence;
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < spec.per_class[c]; ++i) sequence.push_back(c);
    rng.shuffle(sequence);

    long next_id = 9000;
    for (std::size_t c : sequence) {
        const std::size_t len =
            spec.len_min + rng.uniform_index(spec.len_max - spec.len_min + 1);
        std::vector<std::string> doc;
        doc.reserve(len);
        for (std::size_t t = 0; t < len; ++t) {
            if (rng.next_double() < spec.marker_fraction) {
                const std::size_t src =
                    rng.next_double() < spec.noise ? rng.uniform_index(3) : c;
                doc.push_back(marker_token(src, rng.uniform_index(spec.markers_per_class)));
            } else {
                // Quadratic skew: low indices are common, the tail is rare,
                // which spreads filler across the frequency-ranked id space.
                const double u = rng.next_double();
                doc.push_back(filler_token(
                    static_cast<std::size_t>(u * u * static_cast<double>(spec.filler_vocab))));
            }
        }

        probtag::ingest::ProblemRecord rec;
        rec.contest_id = next_id++;
        rec.problem_index = "A";
        std::string statement;
        for (std::size_t t = 0; t < doc.size(); ++t) {
            if (t) statement += ' ';
            statement += doc[t];
        }
        rec.statement = statement;
        rec.tags = {classes[c]};
        out.records.push_back(std::move(rec));
        out.tokens.push_back(std::move(doc));
        out.labels.push_back(c);
    }
    return out;
}

}  // namespace testsup
