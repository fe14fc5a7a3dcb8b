#pragma once

#include <stdexcept>
#include <string>

namespace ccmatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad lengths, out-of-range
// parameters, non-finite samples, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Template with zero norm: the estimator denominator vanishes.
class DegenerateTemplateError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Sequence with zero norm cannot be normalized.
class DegenerateSequenceError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Malformed input file; the message names the offending byte or line.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Filesystem-level failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccmatch
