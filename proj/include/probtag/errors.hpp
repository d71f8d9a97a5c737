#pragma once

#include <stdexcept>
#include <string>

namespace probtag {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- ingest ---
struct InputNotHtml : Error {
    explicit InputNotHtml(const std::string& msg = "input is not an HTML document") : Error(msg) {}
};
struct StatementMissing : Error {
    explicit StatementMissing(const std::string& msg = "problem statement section missing") : Error(msg) {}
};
struct TagsMissing : Error {
    explicit TagsMissing(const std::string& msg = "no topic tags found") : Error(msg) {}
};
struct HttpError : Error {
    int status;
    explicit HttpError(int status_, const std::string& what = "")
        : Error("http status " + std::to_string(status_) + (what.empty() ? "" : " for " + what)),
          status(status_) {}
};
struct NetworkError : Error {
    explicit NetworkError(const std::string& msg) : Error("network error: " + msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};
struct CsvSchemaMismatch : Error {
    explicit CsvSchemaMismatch(const std::string& msg) : Error("csv schema mismatch: " + msg) {}
};

// --- numerics ---
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error("shape mismatch: " + msg) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error("numeric error: " + msg) {}
};

// --- datasets ---
struct SizeMismatch : Error {
    explicit SizeMismatch(const std::string& msg) : Error("size mismatch: " + msg) {}
};

// --- persistence ---
struct BadMagic : Error {
    explicit BadMagic(const std::string& msg = "bad magic bytes") : Error(msg) {}
};
struct VersionUnsupported : Error {
    explicit VersionUnsupported(const std::string& msg = "unsupported format version") : Error(msg) {}
};
struct CrcMismatch : Error {
    explicit CrcMismatch(const std::string& msg = "checksum mismatch") : Error(msg) {}
};
struct ShapeInconsistent : Error {
    explicit ShapeInconsistent(const std::string& msg) : Error("inconsistent tensor layout: " + msg) {}
};
struct InvalidToken : Error {
    explicit InvalidToken(const std::string& msg) : Error("invalid token: " + msg) {}
};

// --- configuration ---
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace probtag
