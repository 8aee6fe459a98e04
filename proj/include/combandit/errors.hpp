#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace combandit {

// Raised when a family is too large to list explicitly.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::uint64_t cardinality, std::uint64_t cap);

  std::uint64_t cardinality() const { return cardinality_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cardinality_;
  std::uint64_t cap_;
};

// A learner broke the game protocol (e.g. played an action outside S).
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown inside a learner (singular second-moment matrix).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace combandit
