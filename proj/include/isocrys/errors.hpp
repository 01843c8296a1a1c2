#pragma once

#include <stdexcept>
#include <string>

namespace isocrys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A decision could not be certified at the working precision.
class PrecisionFailure : public Error {
 public:
  using Error::Error;
};

// Exact enumeration of sub-objects asked for on a module with repeated simple factors.
class MultiplicityError : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// A postcondition that theory guarantees was violated.
class InternalContradiction : public Error {
 public:
  using Error::Error;
};

// The base field lacks roots of unity required by the request.
class FieldIncompatibility : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace isocrys
