#pragma once

#include <stdexcept>
#include <string>

namespace lct {

/// Base of every error raised by the library. The CLI maps each subclass to
/// a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant or precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A regression had too few usable points.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Weight sum does not exceed the degree, so -K_X is not ample.
class NotFano : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// An internal consistency check failed. Always a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace lct
