#pragma once

#include <stdexcept>
#include <string>

namespace topo {

// Base class for every error raised by the library. Input-side errors derive
// from InputError so callers (the CLI in particular) can separate malformed
// input from numerical failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class DimensionError : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class FormatError : public InputError {
public:
    using InputError::InputError;
};

// Writing output failed.
class IoError : public Error {
public:
    using Error::Error;
};

// An input file is missing or unreadable.
class ReadError : public InputError {
public:
    using InputError::InputError;
};

// Numerical / runtime failures.
class NumericError : public Error {
public:
    using Error::Error;
};

class GuardError : public Error {
public:
    using Error::Error;
};

class UndefinedError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularGradientError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace topo
