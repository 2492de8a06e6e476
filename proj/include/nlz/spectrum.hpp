// Adiabatic levels of the nonlinear eigenproblem H(eps)|psi> = eps|psi>.
//
// Eliminating the eigenvector gives a depressed quartic in eps,
//
//   eps^4 + d*eps^2 + e*eps + f = 0,
//   d = -(4*alpha^2 + 4*alpha*beta + beta^2 + 4*gamma^2)/4,
//   e = -(4*alpha*beta*gamma + 2*beta^2*gamma)/4,
//   f = -(beta^2*gamma^2)/4,
//
// which is a resultant: squaring introduces spurious roots, so every real
// root is validated against the eigenproblem before it is reported. The
// intensity on a level is I = (eps + gamma)/(2*eps); the eps = 0 root is
// admissible only at gamma = 0 where I = -alpha/beta (the knot point).
#pragma once

#include <vector>

#include "nlz/model.hpp"
#include "nlz/polyroots.hpp"

namespace nlz::spectrum {

struct QuarticCoefficients {
  double d = 0.0;  // eps^2 coefficient
  double e = 0.0;  // eps coefficient
  double f = 0.0;  // constant term
};

struct AdiabaticLevel {
  double epsilon = 0.0;
  double intensity = 0.0;                       // |a|^2 on the level, in [0, 1]
  double residual = 0.0;                        // |(alpha+beta*I)^2 - (eps^2-gamma^2)|
};

enum class StructureType { TypeI, TypeII, TypeIII, TypeIV, Indeterminate };

struct LevelPoint {
  double gamma = 0.0;
  double epsilon = 0.0;
  double intensity = 0.0;
  int branch = 0;
};

struct LevelCurves {
  std::vector<LevelPoint> points;  // sorted by (gamma, epsilon)
  int branch_count = 0;
};

QuarticCoefficients quartic_coefficients(double alpha, double beta, double gamma);

// Roots of eps^4 + d*eps^2 + e*eps + f, polished; residual <= 1e-10 (scaled).
std::vector<std::complex<double>> solve_quartic(const QuarticCoefficients& q);

// Validated levels (2, 3 or 4) sorted by epsilon. Double roots are collapsed.
// An empty validated set is an internal-consistency failure (InternalError).
std::vector<AdiabaticLevel> adiabatic_levels(double alpha, double beta, double gamma);

// State on a level under the gauge arg(a) = 0; theta in {0, pi} selected by
// the sign of (eps - gamma)/(alpha + beta*I).
QuantumState eigenstate(double alpha, double beta, double gamma, const AdiabaticLevel& level);

// Levels over a gamma grid with branch-continuation labels obtained by
// nearest-neighbour matching in (eps, I); ties break toward smaller |dI|.
LevelCurves level_curves(double alpha, double beta, const std::vector<double>& gamma_grid);

// d(eps)/d(gamma) of the branch through the knot (0, 0), central finite
// difference on validated levels with the step halved until the estimate is
// stable to 1e-3 relative. NoKnot for beta >= -alpha; OutOfRegime where the
// four-root window is too narrow to resolve (beta -> -2*alpha).
double knot_slope(double alpha, double beta);

// Level-structure class, decided by root counting over gamma plus the knot
// slope sign; no hard-coded beta thresholds. Indeterminate within 1e-4 of a
// detected transition.
StructureType classify_structure(double alpha, double beta);

// gamma values in (0, gamma_max) where the validated-level count changes,
// located by scan plus bisection. Ground truth for phase boundaries.
std::vector<double> count_transitions(double alpha, double beta, double gamma_max,
                                      int scan_points = 2401);

// Type-I/Type-II transition: largest beta for which a four-level window
// exists, bisected on the window-existence predicate. Cached after first call.
double window_merge_beta(double alpha = 1.0);

}  // namespace nlz::spectrum
