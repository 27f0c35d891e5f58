#pragma once

#include <stdexcept>
#include <string>

namespace coshom {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad argument, wrong
/// shape, simplex not in the complex, ...).
struct InvalidInput : Error {
    using Error::Error;
};

/// inverse() was asked to invert a singular matrix.
struct NotInvertible : Error {
    using Error::Error;
};

/// A law guaranteed by a theorem failed to hold, i.e. the library itself
/// has a bug. The message names the offending block or degree.
struct InternalCheckFailure : Error {
    using Error::Error;
};

/// A parsed input file is malformed. what() is "source:line: message".
struct ParseError : Error {
    ParseError(std::string src, int line_number, const std::string& message)
        : Error(src + ":" + std::to_string(line_number) + ": " + message),
          source(std::move(src)),
          line(line_number) {}

    std::string source;
    int line;
};

/// Input data is well-formed but fails a semantic validation (cosheaf
/// functoriality, matching laws, decomposition laws).
struct ValidationError : Error {
    using Error::Error;
};

} // namespace coshom
