#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embrel {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid input line/row. `line` is 1-based and refers to the
// physical line where the offending record starts.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A label field that is not 0 or 1.
class BadLabel : public ParseError {
public:
    using ParseError::ParseError;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteComponent : public Error {
public:
    using Error::Error;
};

// Empty table / judgment set / dataset after parsing.
class EmptyInput : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

// Constant sequence (or too short to rank).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

class NoPositives : public Error {
public:
    using Error::Error;
};

class AllPairsDropped : public Error {
public:
    using Error::Error;
};

class MissingPcaModel : public Error {
public:
    using Error::Error;
};

class TooFewRows : public Error {
public:
    using Error::Error;
};

class TooFewTrainingPoints : public Error {
public:
    using Error::Error;
};

class TooFewInstances : public Error {
public:
    using Error::Error;
};

class SingleClassData : public Error {
public:
    using Error::Error;
};

class EvenAnnotatorCount : public Error {
public:
    using Error::Error;
};

}  // namespace embrel
