#pragma once

#include <stdexcept>
#include <string>

namespace qfslice {

// tanh(lambda/2) vanishes or e^{lambda/2} hits {+-1, +-i}.
class DegenerateLength : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bisection bracket has no sign change (|t| too small for the real locus).
class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WindowTooNarrow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Slope numerator or denominator beyond the supported 2^60 range.
class SlopeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qfslice
