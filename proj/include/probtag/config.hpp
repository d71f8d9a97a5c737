#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "probtag/errors.hpp"
#include "probtag/model.hpp"

namespace probtag {

/// Flat key=value run configuration. Every knob of the pipeline, model,
/// split and optimizer lives here; command-line flags override file values.
struct RunConfig {
    std::string arch = "mlp";
    std::uint64_t seed = 0;
    std::size_t epochs = 30;
    std::size_t batch_size = 32;

    std::size_t max_len = 0;  // 0: computed from the training split
    std::size_t min_token_freq = 1;

    std::size_t emb_dim = 64;
    std::size_t hidden = 32;
    std::size_t depth = 1;
    std::string pooling = "last";
    double dropout_rate = 0.5;

    std::size_t train_count = 0;  // 0: proportioned like the 950/992 reference split
    std::size_t test_count = 0;
    bool stratified = false;

    double lr = 0.001;
    double rho = 0.9;
    double eps = 1e-7;
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size() || value[0] == '-') throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + " must be a non-negative integer, got '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + " must be a number, got '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + " must be true|false, got '" + value + "'");
}

}  // namespace detail

/// Applies one key=value pair; unknown keys are rejected outright.
inline void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "arch") c.arch = value;
    else if (key == "seed") c.seed = detail::parse_u64(key, value);
    else if (key == "epochs") c.epochs = detail::parse_u64(key, value);
    else if (key == "batch_size") c.batch_size = detail::parse_u64(key, value);
    else if (key == "max_len") c.max_len = detail::parse_u64(key, value);
    else if (key == "min_token_freq") c.min_token_freq = detail::parse_u64(key, value);
    else if (key == "emb_dim") c.emb_dim = detail::parse_u64(key, value);
    else if (key == "hidden") c.hidden = detail::parse_u64(key, value);
    else if (key == "depth") c.depth = detail::parse_u64(key, value);
    else if (key == "pooling") c.pooling = value;
    else if (key == "dropout_rate") c.dropout_rate = detail::parse_double(key, value);
    else if (key == "train_count") c.train_count = detail::parse_u64(key, value);
    else if (key == "test_count") c.test_count = detail::parse_u64(key, value);
    else if (key == "stratified") c.stratified = detail::parse_bool(key, value);
    else if (key == "lr") c.lr = detail::parse_double(key, value);
    else if (key == "rho") c.rho = detail::parse_double(key, value);
    else if (key == "eps") c.eps = detail::parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Range-checks every field; called once after file and flag values land.
inline void validate_config(const RunConfig& c) {
    nn::arch_from_name(c.arch);        // throws on bad names
    nn::pooling_from_name(c.pooling);
    if (c.batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (c.emb_dim == 0) throw ConfigError("emb_dim must be >= 1");
    if (c.hidden == 0) throw ConfigError("hidden must be >= 1");
    if (c.depth == 0) throw ConfigError("depth must be >= 1");
    if (c.dropout_rate < 0.0 || c.dropout_rate >= 1.0)
        throw ConfigError("dropout_rate must lie in [0,1)");
    if (c.lr <= 0.0) throw ConfigError("lr must be positive");
    if (c.rho < 0.0 || c.rho >= 1.0) throw ConfigError("rho must lie in [0,1)");
    if (c.eps <= 0.0) throw ConfigError("eps must be positive");
    if ((c.train_count == 0) != (c.test_count == 0))
        throw ConfigError("train_count and test_count must be set together");
}

/// Loads key=value lines ('#' comments and blank lines allowed) on top of
/// the defaults.
inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    RunConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start) line.erase(0, start);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + " is not key=value: " + line);
        apply_config_key(c, line.substr(0, eq), line.substr(eq + 1));
    }
    return c;
}

}  // namespace probtag
