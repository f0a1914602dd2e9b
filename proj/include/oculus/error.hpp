#pragma once

#include <stdexcept>
#include <string>

namespace oculus {

// A value fell outside its documented domain (state bounds, universes, grades).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed rule base or intent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Center-of-area of an identically zero fuzzy set: no rule fired.
class DegenerateSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bus message that cannot be decoded or fails payload validation.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sockets, ports, files.
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oculus
