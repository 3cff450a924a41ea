#pragma once

#include <stdexcept>
#include <string>

namespace llt {

// Malformed or out-of-domain input (bad span, negative weight, unparsable file).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical hypothesis required by a theorem does not hold for the
// supplied data, e.g. log(Theta)/Theta > 1/14 for the corollary envelopes.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Numerical result could not be certified (e.g. a count that is not
// close enough to an integer before rounding).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace llt
