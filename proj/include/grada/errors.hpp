#pragma once

#include <stdexcept>
#include <string>

namespace grada {

// Malformed input file contents (bad JSON line, bad vector component).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Duplicate ids, colliding injections, index inconsistencies.
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Required ids absent from a table (embeddings, answers, contexts).
class CoverageError : public std::runtime_error {
public:
    explicit CoverageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Lookup of an id that is not in an index.
class LookupError : public std::runtime_error {
public:
    explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

// Out-of-range or inconsistent caller arguments.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace grada
