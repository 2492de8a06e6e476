// Error hierarchy shared by all modules. Every failure the library can
// signal deliberately derives from nlz::Error; anything else escaping is a bug.
#pragma once

#include <stdexcept>
#include <string>

namespace nlz {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parameters outside the regime an operation is defined for.
class OutOfRegime : public Error {
public:
  using Error::Error;
};

// No level crossing through (gamma, eps) = (0, 0); requested knot quantities
// are undefined.
class NoKnot : public Error {
public:
  using Error::Error;
};

// The swallowtail window has closed (tangency roots merged).
class NoWindow : public Error {
public:
  using Error::Error;
};

// Bloch-sphere pole |s| = 1 reached where the phase equation is singular.
class PoleSingularity : public Error {
public:
  using Error::Error;
};

// Classical Hamiltonian evaluated on the line 2*alpha + beta*(1 - s) = 0.
class LogSingularity : public Error {
public:
  using Error::Error;
};

// Classical Hamiltonian requested for beta = 0 where the log form is invalid.
class BetaZero : public Error {
public:
  using Error::Error;
};

// Integration could not meet the norm-drift bound even after the retry.
class ToleranceExceeded : public Error {
public:
  using Error::Error;
};

// Amplitudes left the unit disk or became non-finite.
class NonFiniteState : public Error {
public:
  using Error::Error;
};

// Internal-consistency failure (e.g. a spectrum solve validating no roots).
class InternalError : public Error {
public:
  using Error::Error;
};

}  // namespace nlz
