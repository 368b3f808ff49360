#pragma once

#include <stdexcept>
#include <string>

namespace orbitcodes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-prime characteristic, mixed towers, bad vector
// lengths, witnesses that do not reconstruct their subspace.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A mathematical hypothesis does not hold: wrong dimension, divisibility
// violated, zero subspace where a nonzero one is required, theorem
// preconditions not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured size or enumeration cap would be exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitcodes
