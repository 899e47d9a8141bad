#pragma once

#include <stdexcept>
#include <string>

namespace qiopa {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Operands that do not share a layout (trigger presence, dimension, labels).
class StructuralError : public Error {
  public:
    using Error::Error;
};

// Automatic truncation could not reach the tail tolerance below the index bound.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

// The post-selection event has zero probability.
class DegenerateEventError : public Error {
  public:
    using Error::Error;
};

// Input too large for an exhaustive computation.
class RefusalError : public Error {
  public:
    using Error::Error;
};

// Density matrix with eigenvalues below the physical tolerance.
class NonPhysicalError : public Error {
  public:
    using Error::Error;
};

// Tomographic data that does not cover the requested scheme.
class IncompleteDataError : public Error {
  public:
    using Error::Error;
};

// Invalid argument values (ranges, labels, sizes).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

}  // namespace qiopa
