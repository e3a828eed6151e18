#pragma once

#include <stdexcept>
#include <string>

namespace latfm {

// Error taxonomy mirrors the CLI exit-code contract:
//   ParseError -> 2, ValidationError -> 3, PreconditionError -> 4.
// Semantic "false" results (a failed check) are ordinary return values, not errors.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Group-size / rank caps. A limit overrun is a refused precondition, not a wrong answer.
class LimitError : public PreconditionError {
public:
    explicit LimitError(const std::string& msg) : PreconditionError(msg) {}
};

} // namespace latfm
