#pragma once

#include <stdexcept>
#include <string>

namespace nlcorr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together (dimension mismatch, wrong subsystem).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// An argument lies outside the domain of the operation (non-Hermitian input,
/// non-unit direction, invalid probability distribution, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A numerical tolerance was breached at run time (norm drift, failed
/// convergence, imaginary residue).
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace nlcorr
