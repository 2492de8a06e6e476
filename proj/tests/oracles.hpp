// Independent reference computations for cross-checking the library. Dense
// sign-change scans plus bisection, no shared code with src/: brute force on
// purpose. Callers must stay away from tangency boundaries and from the
// degenerate point beta = -2*alpha at gamma = 0, where double roots defeat
// sign-change counting.
#pragma once

#include <algorithm>
#include <cmath>

namespace oracle {

// Resultant quartic in eps assembled from scratch.
inline double quartic_value(double alpha, double beta, double gamma, double eps) {
  const double t = 2.0 * alpha + beta;
  const double d = -(t * t + 4.0 * gamma * gamma) / 4.0;
  const double e = -beta * t * gamma / 2.0;
  const double f = -beta * beta * gamma * gamma / 4.0;
  return ((eps * eps + d) * eps + e) * eps + f;
}

// Count admissible levels: simple real quartic roots with intensity
// I = (eps + gamma)/(2*eps) in [0, 1] and the eigenvalue relation
// (alpha + beta*I)^2 = eps^2 - gamma^2 satisfied. The double root eps = 0 at
// gamma = 0 is invisible to sign changes and handled by its closed-form
// admissibility condition.
inline int count_levels_scan(double alpha, double beta, double gamma, int n = 400000) {
  const double R = std::abs(gamma) + std::abs(alpha) + std::abs(beta) + 1.0;
  auto q = [&](double eps) { return quartic_value(alpha, beta, gamma, eps); };
  int count = 0;
  double prev_eps = -R;
  double prev_q = q(prev_eps);
  for (int i = 1; i <= n; ++i) {
    const double eps = -R + 2.0 * R * i / n;
    const double qe = q(eps);
    if (prev_q * qe < 0.0) {
      double lo = prev_eps, hi = eps, flo = prev_q;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = q(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (std::abs(root) > 1e-10) {
        const double I = (root + gamma) / (2.0 * root);
        if (I >= -1e-9 && I <= 1.0 + 1e-9) {
          const double c = alpha + beta * std::clamp(I, 0.0, 1.0);
          const double res = std::abs(c * c - (root * root - gamma * gamma));
          if (res <= 1e-8 * std::max(1.0, root * root)) ++count;
        }
      }
    }
    prev_eps = eps;
    prev_q = qe;
  }
  if (gamma == 0.0 && beta < -alpha) ++count;
  return count;
}

// Count fixed points of the canonical flow: roots of h(s) = -2*gamma/sigma on
// each theta branch, with the hole line (c(s) = 0, fixed only at gamma = 0)
// counted once globally instead of once per branch.
inline int count_fixed_points_scan(double alpha, double beta, double gamma, int n = 400000) {
  auto h = [&](double s) {
    return (2.0 * alpha + beta * (1.0 - s)) * s / std::sqrt(1.0 - s * s);
  };
  const bool hole = gamma == 0.0 && beta < -alpha;
  const double s_hole = 1.0 + 2.0 * alpha / beta;
  const double lim = 1.0 - 1e-7;
  int count = 0;
  for (const double sigma : {1.0, -1.0}) {
    double prev_s = -lim;
    double prev_g = h(prev_s) + 2.0 * gamma / sigma;
    for (int i = 1; i <= n; ++i) {
      const double s = -lim + 2.0 * lim * i / n;
      const double gs = h(s) + 2.0 * gamma / sigma;
      if (prev_g * gs < 0.0) {
        const double root = 0.5 * (prev_s + s);
        if (!(hole && std::abs(root - s_hole) < 1e-5)) ++count;
      }
      prev_s = s;
      prev_g = gs;
    }
  }
  if (hole) ++count;
  return count;
}

}  // namespace oracle
