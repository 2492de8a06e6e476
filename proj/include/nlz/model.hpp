// Two-mode model with an amplitude-dependent coupling:
//
//   i d/dt (a, b)^T = H (a, b)^T,   H = [[ gamma,            alpha + beta*|a|^2 ],
//                                        [ alpha + beta*|a|^2, -gamma          ]]
//
// gamma(t) = v*t is the sweep, |a|^2 + |b|^2 = 1. alpha > 0 sets the energy
// unit; beta may take either sign.
#pragma once

#include <complex>

#include "nlz/errors.hpp"

namespace nlz {

struct ModelParams {
  double alpha = 1.0;        // linear coupling, > 0
  double beta = 0.0;         // nonlinear coupling
  double sweep_rate = 1.0;   // v > 0
  double gamma_start = -50.0;
  double gamma_end = 50.0;

  // Throws std::invalid_argument on alpha <= 0, sweep_rate <= 0 or an empty
  // sweep window.
  void validate() const;
};

struct QuantumState {
  std::complex<double> a{1.0, 0.0};
  std::complex<double> b{0.0, 0.0};

  double norm2() const { return std::norm(a) + std::norm(b); }
  double intensity() const { return std::norm(a); }  // |a|^2
};

// s = |b|^2 - |a|^2 in [-1, 1]; theta = arg(b) - arg(a) reduced to (-pi, pi].
// theta is undefined at the poles s = +-1; to_bloch returns theta = 0 there
// and sets degenerate.
struct BlochCoords {
  double s = 0.0;
  double theta = 0.0;
  bool degenerate = false;
};

struct Hamiltonian2x2 {
  double gamma = 0.0;
  double coupling = 0.0;  // alpha + beta*|a|^2; off-diagonal by construction

  QuantumState apply(const QuantumState& psi) const {
    return {gamma * psi.a + coupling * psi.b, coupling * psi.a - gamma * psi.b};
  }
};

// H evaluated at the instantaneous intensity of `state`.
Hamiltonian2x2 hamiltonian(const ModelParams& p, double gamma, const QuantumState& state);

// <psi|H|psi> = gamma*(|a|^2-|b|^2) + 2*Re(conj(a)*b)*(alpha + beta*|a|^2).
double dynamical_energy(const ModelParams& p, double gamma, const QuantumState& state);

BlochCoords to_bloch(const QuantumState& state);

// Gauge convention arg(a) = 0. Requires |s| <= 1.
QuantumState from_bloch(const BlochCoords& bloch);

}  // namespace nlz
