#pragma once

#include <stdexcept>
#include <string>

namespace bioeco {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A parameter set violates its admissibility constraints.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// A state violates a precondition (negative biomass, etc.).
class InvalidState : public Error {
 public:
  using Error::Error;
};

// The response denominator 1 + a*x*(1 - m*y) is not positive; the state
// left the model's validity region.
class InvalidDenominator : public Error {
 public:
  using Error::Error;
};

class EmptyTrajectory : public Error {
 public:
  using Error::Error;
};

// Requested a boundary/interior-only computation on the wrong equilibrium kind.
class WrongKind : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NoPositiveRoot : public Error {
 public:
  using Error::Error;
};

class DoubleZeroEigenvalue : public Error {
 public:
  using Error::Error;
};

class NoInteriorBranch : public Error {
 public:
  using Error::Error;
};

class NotAtHopfPoint : public Error {
 public:
  using Error::Error;
};

// delta = a10*b01 - a01*b10 <= 0 at the candidate Hopf point.
class NegativeDelta : public Error {
 public:
  using Error::Error;
};

class ZeroBiomass : public Error {
 public:
  using Error::Error;
};

class NegativeEffort : public Error {
 public:
  using Error::Error;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

// Configuration errors carry enough context for a CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingSymbol : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace bioeco
