#include "nlz/model.hpp"

#include <cmath>
#include <numbers>

namespace nlz {

void ModelParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("model: alpha must be > 0");
  if (!(sweep_rate > 0.0)) throw std::invalid_argument("model: sweep_rate must be > 0");
  if (!(gamma_start < gamma_end)) throw std::invalid_argument("model: empty sweep window");
}

Hamiltonian2x2 hamiltonian(const ModelParams& p, double gamma, const QuantumState& state) {
  return {gamma, p.alpha + p.beta * state.intensity()};
}

double dynamical_energy(const ModelParams& p, double gamma, const QuantumState& state) {
  const double ia = state.intensity();
  const double cross = 2.0 * std::real(std::conj(state.a) * state.b);
  return gamma * (ia - std::norm(state.b)) + cross * (p.alpha + p.beta * ia);
}

BlochCoords to_bloch(const QuantumState& state) {
  constexpr double pole_eps = 1e-12;
  BlochCoords out;
  out.s = std::norm(state.b) - std::norm(state.a);
  if (1.0 - std::abs(out.s) <= pole_eps) {
    out.degenerate = true;
    return out;
  }
  double d = std::arg(state.b) - std::arg(state.a);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  out.theta = d;
  return out;
}

QuantumState from_bloch(const BlochCoords& bloch) {
  if (std::abs(bloch.s) > 1.0) throw std::invalid_argument("from_bloch: |s| > 1");
  const double ra = std::sqrt((1.0 - bloch.s) / 2.0);
  const double rb = std::sqrt((1.0 + bloch.s) / 2.0);
  return {{ra, 0.0}, std::polar(rb, bloch.theta)};
}

}  // namespace nlz
