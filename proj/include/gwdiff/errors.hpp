#pragma once

#include <stdexcept>
#include <string>

namespace gwdiff {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct ZeroRowError : Error {
    int row;
    explicit ZeroRowError(int r)
        : Error("row " + std::to_string(r) + " has zero sum"), row(r) {}
};

struct NotIrreducible : Error {
    using Error::Error;
};

struct NotRegular : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& what, int line_number)
        : Error(what + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
};

struct RaggedRows : ParseError {
    using ParseError::ParseError;
};

struct NegativeWeight : ParseError {
    using ParseError::ParseError;
};

struct RecursionDepthExceeded : Error {
    using Error::Error;
};

}  // namespace gwdiff
