#pragma once

#include <stdexcept>
#include <string>

namespace dryctl {

// Base of everything the library throws. The C API maps each subclass to a
// status code, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, grids or scenario files (CFL violations included).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Non-finite or unphysical values produced while time stepping.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, int step)
      : Error(what + " (time step " + std::to_string(step) + ")"), step_(step) {}

  int step() const noexcept { return step_; }

private:
  int step_;
};

/// Evaluation outside the domain of a closed-form expression.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A request the closed-form machinery does not cover.
class UnsupportedCase : public Error {
public:
  using Error::Error;
};

/// Vanishing heat capacity c_ps*eps_s + c_pl*eps_l.
class SingularState : public Error {
public:
  using Error::Error;
};

/// The frequency-domain control denominator vanished.
class NoControlExists : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace dryctl
