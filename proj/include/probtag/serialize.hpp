#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/model.hpp"
#include "probtag/vocab.hpp"

namespace probtag {

// --------------------------------------------------------------- crc32 ----

namespace detail {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k) c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
        table[n] = c;
    }
    return table;
}

inline constexpr std::array<std::uint32_t, 256> kCrcTable = make_crc_table();

}  // namespace detail

/// Plain IEEE CRC-32 (the zlib/PNG polynomial, reflected form).
inline std::uint32_t crc32(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        crc = detail::kCrcTable[(crc ^ p[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

// ------------------------------------------------- little-endian buffers ----

namespace detail {

struct ByteWriter {
    std::string buf;

    void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void bytes(const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); }
    void short_string(const std::string& s) {
        if (s.size() > 0xFFFF) throw ShapeInconsistent("name too long");
        u16(static_cast<std::uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

struct ByteReader {
    const std::string& buf;
    std::size_t pos = 0;

    explicit ByteReader(const std::string& b) : buf(b) {}

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw ShapeInconsistent("record extends past end of file");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= std::uint16_t(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::string short_string() {
        const std::uint16_t n = u16();
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

}  // namespace detail

// ----------------------------------------------------------- model file ----

inline constexpr char kModelMagic[4] = {'P', 'T', 'A', 'G'};
inline constexpr std::uint16_t kModelVersion = 1;

/// Serializes a graph to the PTAG binary layout (see docs/formats.md):
/// magic, version, config block, tensor records in canonical order, CRC-32
/// of everything before it. Optimizer state is deliberately not part of the
/// file; a loaded model is for inference or training from a fresh optimizer.
inline std::string serialize_model(const nn::ModelGraph& m) {
    detail::ByteWriter w;
    w.bytes(kModelMagic, 4);
    w.u16(kModelVersion);

    const nn::ModelConfig& c = m.config;
    w.u8(static_cast<std::uint8_t>(c.arch));
    w.u64(c.vocab_size);
    w.u64(c.max_len);
    w.u64(c.emb_dim);
    w.u64(c.hidden);
    w.u64(c.num_classes);
    w.u64(c.depth);
    w.u8(static_cast<std::uint8_t>(c.pooling));
    w.u64(c.seed);
    w.f64(c.dropout_rate);

    std::uint32_t count = 0;
    for_each_param(m, [&](const std::string&, const nn::Tensor2D&, const nn::Tensor2D&) { ++count; });
    w.u32(count);
    for_each_param(m, [&](const std::string& name, const nn::Tensor2D& p, const nn::Tensor2D&) {
        w.short_string(name);
        w.u32(static_cast<std::uint32_t>(p.rows()));
        w.u32(static_cast<std::uint32_t>(p.cols()));
        for (std::size_t i = 0, n = p.size(); i < n; ++i) w.f64(p.data()[i]);
    });

    w.u32(crc32(w.buf.data(), w.buf.size()));
    return std::move(w.buf);
}

inline void save_model(const nn::ModelGraph& m, const std::string& path) {
    const std::string bytes = serialize_model(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

/// Parses the PTAG layout back into a graph. Validation order: magic, CRC
/// over the whole prefix, version, then field-by-field parsing where every
/// tensor must appear in canonical order with the exact shape the config
/// dictates.
inline nn::ModelGraph deserialize_model(const std::string& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0)
        throw BadMagic();
    if (bytes.size() < 4 + 2 + 4) throw CrcMismatch("file too short");
    const std::uint32_t stored = [&] {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(static_cast<unsigned char>(bytes[bytes.size() - 4 + i])) << (8 * i);
        return v;
    }();
    if (crc32(bytes.data(), bytes.size() - 4) != stored) throw CrcMismatch();

    detail::ByteReader r(bytes);
    r.pos = 4;
    const std::uint16_t version = r.u16();
    if (version != kModelVersion)
        throw VersionUnsupported("model format v" + std::to_string(version));

    nn::ModelConfig c;
    const std::uint8_t arch_tag = r.u8();
    if (arch_tag > 2) throw ShapeInconsistent("unknown arch tag " + std::to_string(arch_tag));
    c.arch = static_cast<nn::Arch>(arch_tag);
    c.vocab_size = r.u64();
    c.max_len = r.u64();
    c.emb_dim = r.u64();
    c.hidden = r.u64();
    c.num_classes = r.u64();
    c.depth = r.u64();
    const std::uint8_t pooling_tag = r.u8();
    if (pooling_tag > 1) throw ShapeInconsistent("unknown pooling tag");
    c.pooling = static_cast<nn::Pooling>(pooling_tag);
    c.seed = r.u64();
    c.dropout_rate = r.f64();

    nn::ModelGraph m;
    try {
        nn::Rng throwaway(0);  // weights are overwritten below
        m = nn::build_model(c, throwaway);
    } catch (const ConfigError& e) {
        throw ShapeInconsistent(std::string("config rejected: ") + e.what());
    }

    const std::uint32_t count = r.u32();
    std::uint32_t expected = 0;
    for_each_param(m, [&](const std::string&, const nn::Tensor2D&, const nn::Tensor2D&) { ++expected; });
    if (count != expected)
        throw ShapeInconsistent("file has " + std::to_string(count) + " tensors, layout needs " +
                                std::to_string(expected));

    for_each_param(m, [&](const std::string& name, nn::Tensor2D& p, nn::Tensor2D&) {
        const std::string file_name = r.short_string();
        if (file_name != name)
            throw ShapeInconsistent("tensor '" + file_name + "' where '" + name + "' expected");
        const std::uint32_t rows = r.u32();
        const std::uint32_t cols = r.u32();
        if (rows != p.rows() || cols != p.cols())
            throw ShapeInconsistent("tensor '" + name + "' is " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + ", layout needs " + shape_str(p));
        for (std::size_t i = 0, n = p.size(); i < n; ++i) p.data()[i] = r.f64();
    });
    if (r.pos != bytes.size() - 4) throw ShapeInconsistent("trailing bytes after tensor records");
    return m;
}

inline nn::ModelGraph load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

// ----------------------------------------------------------- vocab file ----

/// Text format, one line per id:
///   probtag-vocab v1 size=<N> max_len=<L>
///   0\t<pad>\t0
///   1\t<oov>\t0
///   2\t<token>\t<frequency>   ... sorted by id
inline void save_vocab(const text::Vocabulary& v, std::size_t max_len, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "probtag-vocab v1 size=" << v.size() << " max_len=" << max_len << "\n";
    for (std::size_t id = 0; id < v.size(); ++id) {
        const std::string& tok = v.id_to_token[id];
        if (tok.find('\t') != std::string::npos || tok.find('\n') != std::string::npos ||
            tok.find('\r') != std::string::npos)
            throw InvalidToken("token for id " + std::to_string(id) + " contains a delimiter");
        out << id << "\t" << tok << "\t" << v.id_to_frequency[id] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

struct LoadedVocab {
    text::Vocabulary vocab;
    std::size_t max_len = 0;
};

inline LoadedVocab load_vocab(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vocab file " + path);

    std::string header;
    if (!std::getline(in, header)) throw BadMagic("empty vocab file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.rfind("probtag-vocab ", 0) != 0) throw BadMagic("not a vocab file");

    std::istringstream hs(header.substr(std::string("probtag-vocab ").size()));
    std::string version_tok, size_tok, len_tok;
    hs >> version_tok >> size_tok >> len_tok;
    if (version_tok != "v1") throw VersionUnsupported("vocab format " + version_tok);
    if (size_tok.rfind("size=", 0) != 0 || len_tok.rfind("max_len=", 0) != 0)
        throw BadMagic("malformed vocab header: " + header);

    LoadedVocab result;
    std::size_t declared = 0;
    try {
        declared = std::stoul(size_tok.substr(5));
        result.max_len = std::stoul(len_tok.substr(8));
    } catch (const std::exception&) {
        throw BadMagic("malformed vocab header: " + header);
    }

    text::Vocabulary& v = result.vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw InvalidToken("malformed vocab line: " + line);
        std::size_t id = 0;
        std::uint64_t freq = 0;
        try {
            id = std::stoul(line.substr(0, t1));
            freq = std::stoull(line.substr(t2 + 1));
        } catch (const std::exception&) {
            throw InvalidToken("malformed vocab line: " + line);
        }
        if (id != v.id_to_token.size())
            throw InvalidToken("vocab ids not contiguous at line: " + line);
        v.id_to_token.push_back(line.substr(t1 + 1, t2 - t1 - 1));
        v.id_to_frequency.push_back(freq);
    }
    if (v.id_to_token.size() != declared)
        throw InvalidToken("vocab header declares " + std::to_string(declared) + " entries, file has " +
                           std::to_string(v.id_to_token.size()));
    if (declared < 2 || v.id_to_token[0] != text::kPadToken || v.id_to_token[1] != text::kOovToken)
        throw InvalidToken("vocab must start with the <pad> and <oov> sentinels");
    for (std::size_t id = text::kFirstRealId; id < v.id_to_token.size(); ++id)
        v.token_to_id.emplace(v.id_to_token[id], static_cast<text::TokenId>(id));
    return result;
}

// --------------------------------------------------------- dataset file ----

/// Encoded dataset, one example per line: `<label>\t<id> <id> ...` after a
/// `probtag-dataset v1 count=<N> max_len=<L>` header.
inline void save_dataset(const std::vector<text::EncodedExample>& ds, std::size_t max_len,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "probtag-dataset v1 count=" << ds.size() << " max_len=" << max_len << "\n";
    for (const auto& e : ds) {
        if (e.ids.size() != max_len) throw SizeMismatch("example length != max_len");
        out << e.label << "\t";
        for (std::size_t i = 0; i < e.ids.size(); ++i) out << (i ? " " : "") << e.ids[i];
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

struct LoadedDataset {
    std::vector<text::EncodedExample> examples;
    std::size_t max_len = 0;
};

inline LoadedDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file " + path);
    std::string header;
    if (!std::getline(in, header)) throw BadMagic("empty dataset file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.rfind("probtag-dataset ", 0) != 0) throw BadMagic("not a dataset file");
    std::istringstream hs(header.substr(std::string("probtag-dataset ").size()));
    std::string version_tok, count_tok, len_tok;
    hs >> version_tok >> count_tok >> len_tok;
    if (version_tok != "v1") throw VersionUnsupported("dataset format " + version_tok);
    LoadedDataset result;
    std::size_t declared = 0;
    try {
        declared = std::stoul(count_tok.substr(count_tok.find('=') + 1));
        result.max_len = std::stoul(len_tok.substr(len_tok.find('=') + 1));
    } catch (const std::exception&) {
        throw BadMagic("malformed dataset header: " + header);
    }

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        text::EncodedExample e;
        if (!(ls >> e.label)) throw Error("malformed dataset line: " + line);
        text::TokenId id;
        while (ls >> id) e.ids.push_back(id);
        if (e.ids.size() != result.max_len)
            throw SizeMismatch("dataset line has " + std::to_string(e.ids.size()) +
                               " ids, header says " + std::to_string(result.max_len));
        result.examples.push_back(std::move(e));
    }
    if (result.examples.size() != declared)
        throw SizeMismatch("dataset header declares " + std::to_string(declared) +
                           " examples, file has " + std::to_string(result.examples.size()));
    return result;
}

}  // namespace probtag
