// Classical reduction on the Bloch sphere. With s = |b|^2 - |a|^2 and the
// relative phase theta, the flow is
//
//   ds/dt     = -(2*alpha + beta*(1-s)) * sqrt(1-s^2) * sin(theta)
//   dtheta/dt = 2*gamma + (2*alpha + beta*(1-s)) * s * cos(theta) / sqrt(1-s^2)
//
// generated by H_c = -sqrt(1-s^2)*cos(theta) - (2*gamma/beta)*ln|2*alpha +
// beta*(1-s)| through the non-canonical bracket {theta, s} = 2*alpha +
// beta*(1-s). Branch fixed points solve h(s) = -2*gamma/sigma on the
// cos(theta) = sigma = +-1 branches with
//
//   h(s) = (2*alpha + beta*(1-s)) * s / sqrt(1-s^2),
//
// and for beta < -alpha the coupling zero s = 1 + 2*alpha/beta is a fixed
// line at gamma = 0 (theta arbitrary).
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nlz/model.hpp"
#include "nlz/spectrum.hpp"

namespace nlz::phasespace {

enum class FixedPointBranch { Theta0, ThetaPi, Hole };

struct FixedPoint {
  double s = 0.0;
  double theta = 0.0;  // 0 or pi; arbitrary (reported 0) on the hole line
  FixedPointBranch branch = FixedPointBranch::Theta0;
  double residual = 0.0;  // |h(s) + 2*gamma/sigma|, 0 for the hole entry
};

struct CanonicalRhs {
  double ds = 0.0;
  double dtheta = 0.0;
};

// Throws PoleSingularity at |s| >= 1.
CanonicalRhs canonical_rhs(double alpha, double beta, double gamma, double s, double theta);

// The generating function above. BetaZero at beta = 0 (use the linear form);
// LogSingularity on the coupling zero 2*alpha + beta*(1-s) = 0.
double classical_hamiltonian(double alpha, double beta, double gamma, double s, double theta);

// beta = 0 limit: H_c = 2*gamma*s - 2*alpha*sqrt(1-s^2)*cos(theta).
double classical_hamiltonian_linear(double alpha, double gamma, double s, double theta);

// s = 1 + 2*alpha/beta when it lies inside (-1, 1), i.e. beta < -alpha.
std::optional<double> hole_fixed_point(double alpha, double beta);

// h(s); exposed for diagnostics and branch-curve datasets.
double fixed_point_function(double alpha, double beta, double s);

// Branch fixed points, bisected on monotone intervals split at the real
// roots of h'(s), endpoints approached with a 1e-9 guard band, then
// Newton-polished. At gamma = 0 the set is closed-form: s = 0 on both
// branches plus, when it exists, one entry for the hole line.
std::vector<FixedPoint> find_fixed_points(double alpha, double beta, double gamma);

// Four-level window half-width for beta < -alpha (vertex closed form):
//   gamma_c = -(b+2)^2 / (8 b sqrt(1 - s_v^2)),  s_v = 1/2 + 1/b,  b = beta/alpha,
// scaled back by alpha. OutOfRegime for beta >= -alpha.
double boundary_f(double alpha, double beta);

// Critical points of h in (-1, 0) for -alpha < beta < merge point: the two
// real roots of beta*s^3 - 2*beta*s + (2*alpha + beta). NoWindow once they
// have merged (cubic discriminant <= 0); OutOfRegime for beta <= -alpha.
std::pair<double, double> tangency_cubic_roots(double alpha, double beta);

// Exact swallowtail window (gamma_c1 < gamma_c2) from the tangency roots.
std::pair<double, double> boundary_g(double alpha, double beta);

// Series forms of the window bounds in eta = beta/alpha + 1 (scaled units):
//   g1 = sqrt(eta)*(1 - 2*eta - 6*eta^2 - 50*eta^3)
//   g2 = kappa0 + 0.34*eta + 1.5*eta^2 + 5.0*eta^3,
//        kappa0 = (2*phi+1)*sqrt(-phi)/(2*phi), phi = (1-sqrt(5))/2.
std::pair<double, double> boundary_g_series(double beta);

// A second quoted coefficient set for g2 (0.15 + 0.636*eta + 2.4*eta^2 +
// 40*eta^3). Inconsistent with the set above; kept for the discrepancy report.
double boundary_g2_series_alt(double beta);

// Merge point of the tangency roots, bisected on the cubic discriminant
// 32 b^4 - 27 b^2 (b+2)^2 (scaled by alpha).
double tangency_merge_beta(double alpha = 1.0);

enum class BoundaryKind { F, G1, G2 };
enum class BoundarySource { Analytic, Oracle };

struct PhaseBoundaryPoint {
  BoundaryKind kind;
  BoundarySource source;
  double beta = 0.0;
  double gamma_c = 0.0;
};

struct BoundaryAgreement {
  BoundaryKind kind;
  double beta = 0.0;
  double analytic = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
};

struct PhaseDiagram {
  std::vector<double> beta_grid;
  std::vector<double> gamma_grid;
  std::vector<int> level_counts;  // beta-major, size beta_grid.size()*gamma_grid.size()
  std::vector<PhaseBoundaryPoint> boundaries;
  std::vector<BoundaryAgreement> agreement;
  std::vector<std::pair<double, spectrum::StructureType>> structure;  // per beta
  double merge_beta_analytic = 0.0;  // discriminant route
  double merge_beta_counts = 0.0;    // root-count route
};

// Level counts over the grid plus analytic/oracle boundary curves and their
// per-beta agreement. Deterministic output independent of `jobs`.
PhaseDiagram phase_diagram(const std::vector<double>& beta_grid,
                           const std::vector<double>& gamma_grid, unsigned jobs = 1);

}  // namespace nlz::phasespace
