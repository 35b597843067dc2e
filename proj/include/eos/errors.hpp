#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eos {

// Malformed text input. `position` is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Well-formed input that does not denote a valid object (e.g. an infinite
// index without a tail, or the dense type).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-side requirement does not hold (e.g. endpoints in the same orbit class).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The constructor could not produce a family (budget, rank bound, allocation).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interval refinement could not separate a distance from its threshold.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bounded orbit search ran past its cap. Signals an insufficient cap, not
// the absence of a hit.
class SearchCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eos
