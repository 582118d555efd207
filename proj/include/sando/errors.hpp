#pragma once

#include <stdexcept>
#include <string>

namespace sando {

/// Bad physical or config input (non-positive capacitance, x0 out of range, ...).
class invalid_parameter_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Frequency sits on the pole of the resonator effective capacitance.
class pole_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Resonator-loaded line has no propagating solution at this frequency.
class stopband_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested frequency is at or above the plasma cutoff.
class above_cutoff_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Signal frequency inside the degeneracy guard window around the pump.
class degenerate_signal_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite intermediate during integration; carries the last good position.
class numerical_failure_error : public std::runtime_error {
public:
  numerical_failure_error(const std::string& what, double position)
      : std::runtime_error(what), position_(position) {}
  double position() const { return position_; }

private:
  double position_;
};

/// Adaptive step shrank below representable size; carries the last good position.
class stiffness_error : public std::runtime_error {
public:
  stiffness_error(const std::string& what, double position)
      : std::runtime_error(what), position_(position) {}
  double position() const { return position_; }

private:
  double position_;
};

/// A bisection search was asked to find a point the scanned range does not bracket.
class bracket_not_found_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sando
