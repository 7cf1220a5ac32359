#pragma once
#include <stdexcept>
#include <string>

namespace fis {

// Domain error hierarchy. Commands map FormatError/ParamError to usage
// exit codes; everything else is a caller bug surfaced loudly.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundsError : Error {
    explicit BoundsError(const std::string& msg) : Error(msg) {}
};

struct ParamError : Error {
    explicit ParamError(const std::string& msg) : Error(msg) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Carries the 1-based line number of the offending record.
struct FormatError : Error {
    FormatError(const std::string& msg, std::size_t line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

// Hypothesis grammar violation at a 0-based byte offset.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

} // namespace fis
