#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ufam {

// Natural number type used throughout; -1 appears only as the max-of-empty
// sentinel and in "tail above k" arguments.
using Nat = std::int64_t;

// Input text could not be parsed; pos is a byte offset into the input.
struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : std::runtime_error(msg), pos(at) {}
};

// A ground-set expression (or a builder/ground-set pair) whose normal form
// cannot support an exact answer. Rejected rather than approximated.
struct RejectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation was invoked outside its stated precondition.
struct PrecondError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ufam
