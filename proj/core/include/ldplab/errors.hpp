#pragma once

#include <stdexcept>
#include <string>

namespace ldplab {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto its exit-code contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver did not converge, or a matrix that must be invertible
// was (numerically) singular.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class RecoveryFailure : public Error {
public:
    using Error::Error;
};

class UnsupportedLaw : public Error {
public:
    using Error::Error;
};

// A Monte Carlo experiment whose target probability is too small to be
// resolved with the requested number of samples.
class InfeasibleExperiment : public Error {
public:
    using Error::Error;
};

}  // namespace ldplab
