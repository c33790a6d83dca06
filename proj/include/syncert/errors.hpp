#pragma once

#include <stdexcept>
#include <string>

namespace syncert {

/// Malformed or out-of-contract input (dimensions, non-finite values, bad config).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked on a result that cannot support it (e.g. margin of an
/// infeasible solve).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// ½(PEk + EkP) has an eigenvalue below the clamping tolerance; no square-root
/// factor exists.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation produced a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& msg, double blow_up_time)
      : std::runtime_error(msg), time(blow_up_time) {}
  double time;
};

}  // namespace syncert
