#pragma once

#include <stdexcept>
#include <string>

namespace picard {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A buffer, enumeration or integer range cannot be materialized.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid user input (inseparable curve, malformed coefficients, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed; always indicates a bug upstream.
class InternalError : public Error {
public:
    using Error::Error;
};

class WeilBoundViolation : public InternalError {
public:
    using InternalError::InternalError;
};

class ZetaMatchFailure : public InternalError {
public:
    using InternalError::InternalError;
};

class NonRealProduct : public InternalError {
public:
    using InternalError::InternalError;
};

class CrtOutOfRange : public InternalError {
public:
    using InternalError::InternalError;
};

class DivisionFailure : public InternalError {
public:
    using InternalError::InternalError;
};

class NotSquarefree : public Error {
public:
    using Error::Error;
};

}  // namespace picard
