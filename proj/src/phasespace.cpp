#include "nlz/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlz/errors.hpp"
#include "nlz/parallel.hpp"
#include "nlz/polyroots.hpp"

namespace nlz::phasespace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeGuard = 1e-9;     // distance kept from s = +-1
constexpr double kResidualTol = 1e-12;  // Newton target for |h(s) + 2*gamma/sigma|

double coupling(double alpha, double beta, double s) { return 2.0 * alpha + beta * (1.0 - s); }

// d/ds h(s) = (beta*s^3 - 2*beta*s + 2*alpha + beta) / (1-s^2)^{3/2}
double fixed_point_slope(double alpha, double beta, double s) {
  const double num = beta * s * s * s - 2.0 * beta * s + 2.0 * alpha + beta;
  const double r = 1.0 - s * s;
  return num / (r * std::sqrt(r));
}

// Real roots of the slope numerator inside (lo, hi), ascending.
std::vector<double> slope_roots(double alpha, double beta, double lo, double hi) {
  std::vector<double> out;
  if (beta == 0.0) return out;  // numerator is the constant 2*alpha
  const auto roots = real_roots({2.0 * alpha + beta, -2.0 * beta, 0.0, beta});
  for (double r : roots)
    if (r > lo && r < hi) out.push_back(r);
  return out;
}

struct BranchRoot {
  double s;
  double residual;
};

// One root of h(s) = target in [lo, hi], assuming a sign change of
// h - target across the interval. Bisection followed by Newton polish.
std::optional<BranchRoot> bracket_root(double alpha, double beta, double target, double lo,
                                       double hi) {
  double flo = fixed_point_function(alpha, beta, lo) - target;
  double fhi = fixed_point_function(alpha, beta, hi) - target;
  if (flo == 0.0) return BranchRoot{lo, 0.0};
  if (fhi == 0.0) return BranchRoot{hi, 0.0};
  if (std::signbit(flo) == std::signbit(fhi)) return std::nullopt;
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fixed_point_function(alpha, beta, mid) - target;
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  double f = fixed_point_function(alpha, beta, s) - target;
  for (int it = 0; it < 8 && std::abs(f) > kResidualTol * std::max(1.0, std::abs(target)); ++it) {
    const double df = fixed_point_slope(alpha, beta, s);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double next = s - f / df;
    if (!(next > -1.0 && next < 1.0)) break;
    s = next;
    f = fixed_point_function(alpha, beta, s) - target;
  }
  return BranchRoot{s, std::abs(f)};
}

double scaled_discriminant(double b) {
  // Discriminant (up to a positive factor) of b*s^3 - 2*b*s + (b+2);
  // positive iff three distinct real roots.
  return 32.0 * b * b * b * b - 27.0 * b * b * (b + 2.0) * (b + 2.0);
}

}  // namespace

CanonicalRhs canonical_rhs(double alpha, double beta, double gamma, double s, double theta) {
  const double r = 1.0 - s * s;
  if (r <= 0.0) throw PoleSingularity("canonical flow is singular at |s| = 1");
  const double root = std::sqrt(r);
  const double c = coupling(alpha, beta, s);
  return {-c * root * std::sin(theta), 2.0 * gamma + c * s * std::cos(theta) / root};
}

double classical_hamiltonian(double alpha, double beta, double gamma, double s, double theta) {
  if (beta == 0.0) throw BetaZero("log form of the invariant requires beta != 0");
  const double c = coupling(alpha, beta, s);
  if (c == 0.0) throw LogSingularity("invariant diverges on the coupling zero");
  return -std::sqrt(1.0 - s * s) * std::cos(theta) -
         (2.0 * gamma / beta) * std::log(std::abs(c));
}

double classical_hamiltonian_linear(double alpha, double gamma, double s, double theta) {
  return 2.0 * gamma * s - 2.0 * alpha * std::sqrt(1.0 - s * s) * std::cos(theta);
}

std::optional<double> hole_fixed_point(double alpha, double beta) {
  if (beta >= -alpha) return std::nullopt;
  return 1.0 + 2.0 * alpha / beta;
}

double fixed_point_function(double alpha, double beta, double s) {
  return coupling(alpha, beta, s) * s / std::sqrt(1.0 - s * s);
}

std::vector<FixedPoint> find_fixed_points(double alpha, double beta, double gamma) {
  ModelParams{alpha, beta, 1.0}.validate();
  std::vector<FixedPoint> out;

  // At gamma = 0 the set is closed-form: h(s) = c(s)*s/sqrt(1-s^2) vanishes
  // at s = 0 on both branches and on the coupling zero, which is the hole
  // line (theta arbitrary) and is reported as the single hole entry.
  if (gamma == 0.0) {
    out.push_back({0.0, 0.0, FixedPointBranch::Theta0, 0.0});
    out.push_back({0.0, kPi, FixedPointBranch::ThetaPi, 0.0});
    if (auto hole = hole_fixed_point(alpha, beta))
      out.push_back({*hole, 0.0, FixedPointBranch::Hole, 0.0});
  } else {
    const double lo = -1.0 + kEdgeGuard;
    const double hi = 1.0 - kEdgeGuard;
    std::vector<double> cuts{lo};
    for (double r : slope_roots(alpha, beta, lo, hi)) cuts.push_back(r);
    cuts.push_back(hi);

    for (const double sigma : {1.0, -1.0}) {
      const double target = -2.0 * gamma / sigma;
      const double theta = sigma > 0.0 ? 0.0 : kPi;
      const auto branch = sigma > 0.0 ? FixedPointBranch::Theta0 : FixedPointBranch::ThetaPi;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto root = bracket_root(alpha, beta, target, cuts[i], cuts[i + 1]);
        if (root) out.push_back({root->s, theta, branch, root->residual});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FixedPoint& a, const FixedPoint& b) {
    if (a.s != b.s) return a.s < b.s;
    return a.theta < b.theta;
  });
  return out;
}

double boundary_f(double alpha, double beta) {
  const double b = beta / alpha;
  if (b >= -1.0) throw OutOfRegime("window closed-form needs beta < -alpha");
  const double sv = 0.5 + 1.0 / b;
  const double num = (b + 2.0) * (b + 2.0);
  return alpha * (-num / (8.0 * b * std::sqrt(1.0 - sv * sv)));
}

std::pair<double, double> tangency_cubic_roots(double alpha, double beta) {
  const double b = beta / alpha;
  if (b <= -1.0) throw OutOfRegime("tangency pair only exists for beta > -alpha");
  if (b >= 0.0 || scaled_discriminant(b) <= 0.0)
    throw NoWindow("tangency points have merged; no four-level window");
  const auto roots = real_roots({2.0 * alpha + beta, -2.0 * beta, 0.0, beta});
  std::vector<double> inside;
  for (double r : roots)
    if (r > -1.0 && r < 0.0) inside.push_back(r);
  if (inside.size() != 2) throw NoWindow("tangency points have merged; no four-level window");
  return {inside[0], inside[1]};
}

std::pair<double, double> boundary_g(double alpha, double beta) {
  const auto [s1, s2] = tangency_cubic_roots(alpha, beta);
  double g1 = 0.5 * std::abs(fixed_point_function(alpha, beta, s1));
  double g2 = 0.5 * std::abs(fixed_point_function(alpha, beta, s2));
  if (g1 > g2) std::swap(g1, g2);
  return {g1, g2};
}

std::pair<double, double> boundary_g_series(double beta) {
  const double eta = beta + 1.0;
  const double g1 = std::sqrt(eta) * (1.0 - 2.0 * eta - 6.0 * eta * eta - 50.0 * eta * eta * eta);
  const double phi = 0.5 * (1.0 - std::sqrt(5.0));
  const double kappa0 = (2.0 * phi + 1.0) * std::sqrt(-phi) / (2.0 * phi);
  const double g2 = kappa0 + 0.34 * eta + 1.5 * eta * eta + 5.0 * eta * eta * eta;
  return {g1, g2};
}

double boundary_g2_series_alt(double beta) {
  const double eta = beta + 1.0;
  return 0.15 + 0.636 * eta + 2.4 * eta * eta + 40.0 * eta * eta * eta;
}

double tangency_merge_beta(double alpha) {
  // Discriminant is positive just above beta/alpha = -1 and negative near
  // -0.9; its zero crossing is the merge point.
  double lo = -0.99, hi = -0.90;
  for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (scaled_discriminant(mid) > 0.0 ? lo : hi) = mid;
  }
  return alpha * 0.5 * (lo + hi);
}

PhaseDiagram phase_diagram(const std::vector<double>& beta_grid,
                           const std::vector<double>& gamma_grid, unsigned jobs) {
  PhaseDiagram diag;
  diag.beta_grid = beta_grid;
  diag.gamma_grid = gamma_grid;
  diag.merge_beta_analytic = tangency_merge_beta();
  diag.merge_beta_counts = spectrum::window_merge_beta();

  const std::size_t nb = beta_grid.size();
  const std::size_t ng = gamma_grid.size();
  diag.level_counts.assign(nb * ng, 0);
  diag.structure.resize(nb);

  struct PerBeta {
    std::vector<PhaseBoundaryPoint> boundaries;
    std::vector<BoundaryAgreement> agreement;
  };
  std::vector<PerBeta> rows(nb);

  parallel_for(nb, jobs, [&](std::size_t ib) {
    const double beta = beta_grid[ib];
    for (std::size_t ig = 0; ig < ng; ++ig) {
      diag.level_counts[ib * ng + ig] =
          static_cast<int>(spectrum::adiabatic_levels(1.0, beta, gamma_grid[ig]).size());
    }
    diag.structure[ib] = {beta, spectrum::classify_structure(1.0, beta)};

    // Boundary curves; betas within 1e-3 of the regime edges are skipped
    // (the window there is below scan resolution).
    auto& row = rows[ib];
    const double merge = diag.merge_beta_analytic;
    if (beta < -1.0 - 1e-3) {
      const double analytic = boundary_f(1.0, beta);
      row.boundaries.push_back({BoundaryKind::F, BoundarySource::Analytic, beta, analytic});
      if (analytic > 2e-4) {
        const double gmax = std::max(gamma_grid.empty() ? 0.3 : gamma_grid.back(), 1.5 * analytic);
        const auto trans = spectrum::count_transitions(1.0, beta, gmax);
        if (trans.size() == 1) {
          row.boundaries.push_back({BoundaryKind::F, BoundarySource::Oracle, beta, trans[0]});
          row.agreement.push_back(
              {BoundaryKind::F, beta, analytic, trans[0], std::abs(analytic - trans[0])});
        }
      }
    } else if (beta > -1.0 + 1e-3 && beta < merge - 1e-3) {
      const auto [g1, g2] = boundary_g(1.0, beta);
      row.boundaries.push_back({BoundaryKind::G1, BoundarySource::Analytic, beta, g1});
      row.boundaries.push_back({BoundaryKind::G2, BoundarySource::Analytic, beta, g2});
      const auto trans = spectrum::count_transitions(1.0, beta, std::max(0.3, 1.5 * g2), 4001);
      if (trans.size() == 2) {
        row.boundaries.push_back({BoundaryKind::G1, BoundarySource::Oracle, beta, trans[0]});
        row.boundaries.push_back({BoundaryKind::G2, BoundarySource::Oracle, beta, trans[1]});
        row.agreement.push_back({BoundaryKind::G1, beta, g1, trans[0], std::abs(g1 - trans[0])});
        row.agreement.push_back({BoundaryKind::G2, beta, g2, trans[1], std::abs(g2 - trans[1])});
      }
    }
  });

  for (auto& row : rows) {
    diag.boundaries.insert(diag.boundaries.end(), row.boundaries.begin(), row.boundaries.end());
    diag.agreement.insert(diag.agreement.end(), row.agreement.begin(), row.agreement.end());
  }
  return diag;
}

}  // namespace nlz::phasespace
