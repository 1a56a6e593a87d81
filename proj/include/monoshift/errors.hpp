#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace monoshift {

/// Malformed or out-of-range input (CLI exit code 2).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured enumeration or memory cap would be exceeded (CLI exit code 3).
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t attempted = 0)
      : std::runtime_error(what), attempted_(attempted) {}
  std::uint64_t attempted() const noexcept { return attempted_; }

 private:
  std::uint64_t attempted_;
};

/// Operation requires a presentation whose representation graph F is finite.
class InfiniteRepresentation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative numerics failed to converge, or an exact division was inexact.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resource caps shared by the enumeration routines.
struct Limits {
  std::uint64_t ball_nodes = 10'000'000;
  std::uint64_t labelings = 100'000'000;
  std::uint64_t periodic_words = 1'000'000;
  std::uint64_t matrices = 10'000'000;
  unsigned threads = 1;
};

}  // namespace monoshift
