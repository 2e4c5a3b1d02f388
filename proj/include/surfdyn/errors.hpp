#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surfdyn {

// Failure taxonomy.  The CLI maps these onto exit codes:
//   input_error / precondition_error -> 1
//   genericity_error                 -> 2
//   budget_error                     -> 3
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: syntax, bad file shapes, variable mismatches.
struct input_error : error {
  using error::error;
};

// Syntax error with a 0-based character offset into the source text.
struct parse_error : input_error {
  parse_error(const std::string& msg, std::size_t pos)
      : input_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// An operation's stated precondition does not hold for the given values.
struct precondition_error : error {
  using error::error;
};

// Randomized trials disagreed or produced an empty generic fiber.
struct genericity_error : error {
  using error::error;
};

// Iteration degree budget exhausted; carries the last finished iterate.
struct budget_error : error {
  budget_error(const std::string& msg, int last)
      : error(msg), last_completed(last) {}
  int last_completed;
};

// Composition collapsed a factor to zero (target lands in indeterminacy).
struct degenerate_composition_error : error {
  using error::error;
};

// Nef cone has no usable description for the requested test.
struct unsupported_cone_error : error {
  using error::error;
};

}  // namespace surfdyn
