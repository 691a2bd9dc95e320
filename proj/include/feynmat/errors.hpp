#pragma once

#include <stdexcept>
#include <string>

namespace feynmat {

// Base of every error raised by the library.  The CLI maps IntegrityError to
// exit status 2 and everything else to 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape mismatch (non-square determinant, ragged rows, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Object is in the wrong state for the operation (e.g. not in standard form).
class StateError : public Error {
public:
    using Error::Error;
};

// Unknown label.
class LookupError : public Error {
public:
    using Error::Error;
};

// Symbolic data that cannot be made consistent (momentum conservation, ...).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Malformed input document.
class SchemaError : public Error {
public:
    using Error::Error;
};

// A guarantee of the construction was violated: an entry of magnitude 2 in a
// safe row combination, a disagreement between two routes, and so on.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace feynmat
