#pragma once

#include <stdexcept>
#include <string>

namespace qmlab {

// Malformed or inconsistent input (bad token, wrong alphabet, bad length).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid walk or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An experiment declined to run because its input cannot support it
// (e.g. no twisted triangle was found for the cocycle).
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmlab
