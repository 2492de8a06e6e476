// Adaptive explicit Runge-Kutta 5(4) (Dormand-Prince pair) over fixed-size
// real state vectors. No dense output and no FSAL reuse: stage 1 is
// re-evaluated every step so state-dependent coefficients are always fresh.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "nlz/errors.hpp"

namespace nlz {

struct StepControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double safety = 0.9;
};

namespace detail {

// Butcher tableau of the 5(4) pair. b5 propagates, b5 - b4 is the error weight.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double kB5[7] = {35.0 / 384,       0.0,         500.0 / 1113, 125.0 / 192,
                                  -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
inline constexpr double kErr[7] = {
    35.0 / 384 - 5179.0 / 57600,       0.0,
    500.0 / 1113 - 7571.0 / 16695,     125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
    -1.0 / 40};

}  // namespace detail

// Rhs: void(double t, const std::array<double, N>& y, std::array<double, N>& dy).
template <std::size_t N, typename Rhs>
class AdaptiveRk {
 public:
  using State = std::array<double, N>;

  AdaptiveRk(Rhs rhs, StepControls ctl, double t0, const State& y0)
      : rhs_(rhs), ctl_(ctl), t_(t0), y_(y0) {}

  double time() const { return t_; }
  const State& state() const { return y_; }
  State& state() { return y_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

  // Integrates exactly to t_target (t_target >= current time). `hook(t, y)`
  // runs after every accepted step and may modify y in place.
  template <typename Hook>
  void advance_to(double t_target, Hook&& hook) {
    while (t_ < t_target) {
      if (h_ <= 0.0) h_ = initial_step(t_target);
      double h = std::min({h_, ctl_.max_step, t_target - t_});
      if (!(h > std::abs(t_) * 1e-15 + 1e-300))
        throw ToleranceExceeded("step size underflow in adaptive integrator");
      const double err = trial_step(h);
      if (err <= 1.0) {  // NaN fails this test and rejects the step
        t_ += h;
        y_ = y_trial_;
        hook(t_, y_);
        ++accepted_;
        const double e = std::max(err, 1e-30);
        double fac = ctl_.safety * std::pow(e, -0.14) * std::pow(err_prev_, 0.08);
        fac = std::clamp(fac, 0.2, 5.0);
        err_prev_ = std::max(e, 1e-4);
        h_ = h * fac;
      } else {
        ++rejected_;
        double fac = std::isfinite(err) ? ctl_.safety * std::pow(err, -0.2) : 0.1;
        h_ = h * std::clamp(fac, 0.1, 0.7);
      }
    }
  }

 private:
  double initial_step(double t_target) const {
    State dy{};
    rhs_(t_, y_, dy);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1 += (dy[i] / sc) * (dy[i] / sc);
    }
    const double span = t_target - t_;
    double h = (d1 > 0.0 && d0 > 0.0) ? 0.01 * std::sqrt(d0 / d1) : 1e-6 * span;
    return std::min({h, span, ctl_.max_step});
  }

  // One trial step of size h into y_trial_; returns the scaled error norm.
  double trial_step(double h) {
    using detail::kA;
    using detail::kB5;
    using detail::kC;
    using detail::kErr;
    std::array<State, 7> k;
    State ys;
    rhs_(t_, y_, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        ys[i] = y_[i] + h * acc;
      }
      rhs_(t_ + kC[s] * h, ys, k[s]);
    }
    double err2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0, eacc = 0.0;
      for (int s = 0; s < 7; ++s) {
        acc += kB5[s] * k[s][i];
        eacc += kErr[s] * k[s][i];
      }
      y_trial_[i] = y_[i] + h * acc;
      const double sc =
          ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y_[i]), std::abs(y_trial_[i]));
      err2 += (h * eacc / sc) * (h * eacc / sc);
    }
    return std::sqrt(err2 / static_cast<double>(N));
  }

  Rhs rhs_;
  StepControls ctl_;
  double t_;
  State y_;
  State y_trial_{};
  double h_ = 0.0;
  double err_prev_ = 1e-4;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace nlz
