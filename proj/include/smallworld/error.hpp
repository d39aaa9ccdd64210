#pragma once

#include <stdexcept>
#include <string>

namespace smallworld {

// Invalid model/run parameters (CLI exit code 2).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Out-of-range node, bad coordinates, mismatched inputs (CLI exit code 2).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A router was asked to run on an instance of the wrong model.
class PolicyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Generation produced an unusable instance (e.g. RH drew zero highway nodes).
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

// Input file is well-formed but internally inconsistent (dangling ids, ...).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be opened/written (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Something that must never happen did (CLI exit code 4), e.g. a greedy
// route getting stuck on a grid.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace smallworld
