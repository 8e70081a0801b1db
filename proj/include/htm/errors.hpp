#pragma once

#include <stdexcept>
#include <string>

namespace htm {

/// Base class for every error raised by the library.
class HtmError : public std::runtime_error {
public:
    explicit HtmError(const std::string& what) : std::runtime_error(what) {}
};

/// A Cartesian input was too close to (0, 0, 0) to define a direction.
class ZeroVectorError : public HtmError {
public:
    explicit ZeroVectorError(const std::string& what = "vector is too close to (0, 0, 0)")
        : HtmError(what) {}
};

/// A requested subdivision depth is outside [1, 31].
class DepthExceededError : public HtmError {
public:
    explicit DepthExceededError(const std::string& what) : HtmError(what) {}
};

/// A 64-bit key does not encode a trixel.
class InvalidHtmIdError : public HtmError {
public:
    explicit InvalidHtmIdError(const std::string& what) : HtmError(what) {}
};

/// A trixel string (or other textual key) is malformed.
class ParseError : public HtmError {
public:
    explicit ParseError(const std::string& what) : HtmError(what) {}
};

/// Region text that does not follow the grammar.
class RegionSyntaxError : public HtmError {
public:
    RegionSyntaxError(const std::string& what, std::size_t offset)
        : HtmError(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Region text that parses but describes an invalid shape
/// (bad radius, reversed latitudes, bowtie polygon, ...).
class RegionSemanticError : public HtmError {
public:
    explicit RegionSemanticError(const std::string& what) : HtmError(what) {}
};

/// Two index rows share the same (htmId, objId) key.
class DuplicateKeyError : public HtmError {
public:
    explicit DuplicateKeyError(const std::string& what) : HtmError(what) {}
};

/// An index row's stored key or coordinates disagree with its lat/lon.
class InvariantViolationError : public HtmError {
public:
    explicit InvariantViolationError(const std::string& what) : HtmError(what) {}
};

/// A CSV record that cannot be ingested; carries the 1-based line number.
class BadRecordError : public HtmError {
public:
    BadRecordError(const std::string& what, std::size_t line)
        : HtmError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A persisted index file is missing, truncated, or not an index at all.
class DataError : public HtmError {
public:
    explicit DataError(const std::string& what) : HtmError(what) {}
};

}  // namespace htm
