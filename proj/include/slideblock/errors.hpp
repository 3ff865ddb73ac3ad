#pragma once

#include <stdexcept>
#include <string>

namespace slideblock {

// Base for every error raised by the library. Callers that only need a
// diagnostic can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pattern or symbol is not valid for the alphabet/model in use.
class InvalidPattern : public Error {
 public:
  using Error::Error;
};

// Polynomials or points with different numbers of variables.
class ArityMismatch : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (bad theta range, empty histogram, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input (cache files, polynomial text, specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace slideblock
