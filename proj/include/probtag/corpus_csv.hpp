#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/pages.hpp"

namespace probtag::ingest {

inline const std::string kCsvHeader = "contest_id,problem_index,statement,tags";

// ----------------------------------------------------------- manifest ----

/// Sidecar written next to corpus.csv recording where the data came from.
struct CorpusManifest {
    std::size_t record_count = 0;
    std::string source;      // "fixtures" or "live"
    std::string created_at;  // UTC, ISO 8601
    std::map<std::string, std::size_t> tag_histogram;
};

/// Builds the manifest fields that derive from the records themselves.
inline CorpusManifest make_manifest(const std::vector<ProblemRecord>& records,
                                    const std::string& source, const std::string& created_at) {
    CorpusManifest m;
    m.record_count = records.size();
    m.source = source;
    m.created_at = created_at;
    for (const ProblemRecord& r : records)
        for (const std::string& t : r.tags) ++m.tag_histogram[t];
    return m;
}

inline void write_manifest(const CorpusManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "record_count=" << m.record_count << "\n";
    out << "source=" << m.source << "\n";
    out << "created_at=" << m.created_at << "\n";
    for (const auto& [tag, count] : m.tag_histogram) out << "tag:" << tag << "=" << count << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline CorpusManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);
    CorpusManifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "record_count") m.record_count = std::stoul(value);
        else if (key == "source") m.source = value;
        else if (key == "created_at") m.created_at = value;
        else if (key.rfind("tag:", 0) == 0) m.tag_histogram[key.substr(4)] = std::stoul(value);
    }
    return m;
}

namespace detail {

/// RFC 4180 quoting: fields containing comma, quote or newline are wrapped in
/// quotes with inner quotes doubled.
inline std::string csv_quote(const std::string& field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace detail

/// Writes the corpus as RFC 4180 CSV with CRLF line endings and the fixed
/// header. Tags are semicolon-joined inside the last field, so no tag may
/// itself contain ';'.
inline void export_csv(const std::vector<ProblemRecord>& records, std::ostream& out) {
    out << kCsvHeader << "\r\n";
    for (const ProblemRecord& r : records) {
        std::string tags;
        for (const std::string& t : r.tags) {
            if (t.find(';') != std::string::npos)
                throw Error("tag contains ';', cannot serialize: " + t);
            if (!tags.empty()) tags.push_back(';');
            tags += t;
        }
        out << r.contest_id << ',' << detail::csv_quote(r.problem_index) << ','
            << detail::csv_quote(r.statement) << ',' << detail::csv_quote(tags) << "\r\n";
    }
}

/// File variant; returns the manifest skeleton (counts and histogram filled,
/// source and timestamp left for the caller to stamp).
inline CorpusManifest export_csv(const std::vector<ProblemRecord>& records,
                                 const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    export_csv(records, out);
    if (!out) throw IoError("write failed: " + path);
    return make_manifest(records, "", "");
}

namespace detail {

/// Splits the full CSV text into records of fields, honoring quoted fields
/// that span commas and line breaks. Accepts both CRLF and LF on input.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    while (i < text.size()) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"' && !field_started && field.empty()) {
            in_quotes = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_row();
            i += 2;
        } else if (c == '\n') {
            end_row();
            ++i;
        } else {
            field.push_back(c);
            field_started = true;
            ++i;
        }
    }
    if (field_started || !field.empty() || !row.empty()) end_row();
    if (in_quotes) throw CsvSchemaMismatch("unterminated quoted field");
    return rows;
}

}  // namespace detail

/// Loads a corpus CSV, rejecting files whose header does not match the
/// expected schema exactly and files containing a duplicated
/// (contest_id, problem_index) pair.
inline std::vector<ProblemRecord> load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::vector<std::vector<std::string>> rows = detail::parse_csv(text);
    if (rows.empty()) throw CsvSchemaMismatch("empty file, expected header " + kCsvHeader);
    {
        std::string header;
        for (const std::string& f : rows[0]) {
            if (!header.empty()) header.push_back(',');
            header += f;
        }
        if (header != kCsvHeader)
            throw CsvSchemaMismatch("header is '" + header + "', expected '" + kCsvHeader + "'");
    }

    std::vector<ProblemRecord> records;
    std::set<std::pair<long, std::string>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::vector<std::string>& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        if (row.size() != 4)
            throw CsvSchemaMismatch("row " + std::to_string(r + 1) + " has " +
                                    std::to_string(row.size()) + " fields, expected 4");
        ProblemRecord rec;
        try {
            std::size_t pos = 0;
            rec.contest_id = std::stol(row[0], &pos);
            if (pos != row[0].size()) throw std::invalid_argument(row[0]);
        } catch (const std::exception&) {
            throw CsvSchemaMismatch("row " + std::to_string(r + 1) +
                                    " has non-numeric contest_id '" + row[0] + "'");
        }
        rec.problem_index = row[1];
        rec.statement = row[2];
        std::stringstream tags(row[3]);
        std::string tag;
        while (std::getline(tags, tag, ';'))
            if (!tag.empty()) rec.tags.push_back(tag);
        if (!seen.emplace(rec.contest_id, rec.problem_index).second)
            throw Error("duplicate problem " + row[0] + row[1] + " in corpus");
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace probtag::ingest
