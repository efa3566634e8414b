#pragma once

#include <stdexcept>
#include <string>

namespace segnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Parameters violate a structural invariant.
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// One of the effective labor supplies is zero, so a marginal product is undefined.
class SingularSupply : public Error {
public:
    using Error::Error;
};

/// A bracketing search found no sign change.
class NoRoot : public Error {
public:
    using Error::Error;
};

/// Occupation A is the worse job at equal supplies; swap labels before classifying.
class RelabelRequired : public Error {
public:
    using Error::Error;
};

/// Calibration targets admit no parameter set.
class InfeasibleTarget : public Error {
public:
    using Error::Error;
};

/// The tie probabilities are not a valid explicit split (needed for network sampling).
class InvalidSplit : public Error {
public:
    using Error::Error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace segnet
