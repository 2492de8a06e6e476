#include "nlz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlz/errors.hpp"

namespace nlz::spectrum {

namespace {

constexpr double kLevelResidualTol = 1e-10;
constexpr double kIntensitySlack = 1e-9;

std::vector<double> quartic_ascending(const QuarticCoefficients& q) {
  return {q.f, q.e, q.d, 0.0, 1.0};
}

struct Candidate {
  double epsilon;
  double intensity;
  double residual;
};

// Validated-level count at gamma, cheap wrapper used by scans.
int level_count(double alpha, double beta, double gamma) {
  return int(adiabatic_levels(alpha, beta, gamma).size());
}

double nearest_to_zero_level(double alpha, double beta, double gamma) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& lv : adiabatic_levels(alpha, beta, gamma)) {
    if (std::abs(lv.epsilon) < std::abs(best)) best = lv.epsilon;
  }
  return best;
}

// True when some gamma in (0, 0.3] yields four validated levels (scaled
// units). A fine second pass resolves the narrow window near the merge.
bool has_four_level_window(double beta) {
  for (int i = 1; i <= 3000; ++i) {
    if (level_count(1.0, beta, 0.3 * i / 3000.0) >= 4) return true;
  }
  for (int i = 0; i <= 40000; ++i) {
    if (level_count(1.0, beta, 0.13 + 0.04 * i / 40000.0) >= 4) return true;
  }
  return false;
}

}  // namespace

QuarticCoefficients quartic_coefficients(double alpha, double beta, double gamma) {
  QuarticCoefficients q;
  q.d = -(4.0 * alpha * alpha + 4.0 * alpha * beta + beta * beta + 4.0 * gamma * gamma) / 4.0;
  q.e = -(4.0 * alpha * beta * gamma + 2.0 * beta * beta * gamma) / 4.0;
  q.f = -(beta * beta * gamma * gamma) / 4.0;
  return q;
}

std::vector<std::complex<double>> solve_quartic(const QuarticCoefficients& q) {
  return poly_roots(quartic_ascending(q));
}

std::vector<AdiabaticLevel> adiabatic_levels(double alpha, double beta, double gamma) {
  const QuarticCoefficients q = quartic_coefficients(alpha, beta, gamma);
  const std::vector<double> roots = real_roots(quartic_ascending(q));

  constexpr double zero_eps = 1e-13;
  std::vector<Candidate> cands;
  for (double eps : roots) {
    double intensity;
    if (std::abs(eps) <= zero_eps && std::abs(gamma) <= zero_eps) {
      // Knot point: eps = 0 solves the eigenproblem only at gamma = 0 with
      // the coupling driven to zero, I = -alpha/beta.
      if (beta >= -alpha) continue;
      intensity = -alpha / beta;
    } else {
      if (eps == 0.0) continue;
      intensity = (eps + gamma) / (2.0 * eps);
    }
    if (intensity < -kIntensitySlack || intensity > 1.0 + kIntensitySlack) continue;
    intensity = std::clamp(intensity, 0.0, 1.0);
    const double coupling = alpha + beta * intensity;
    const double residual = std::abs(coupling * coupling - (eps * eps - gamma * gamma));
    if (residual > kLevelResidualTol) continue;
    cands.push_back({eps, intensity, residual});
  }

  std::sort(cands.begin(), cands.end(),
            [](const Candidate& l, const Candidate& r) { return l.epsilon < r.epsilon; });

  // Collapse double roots (tangencies, the knot's paired zero).
  std::vector<AdiabaticLevel> out;
  for (const Candidate& c : cands) {
    if (!out.empty() && std::abs(c.epsilon - out.back().epsilon) <= 1e-8 * std::max(1.0, std::abs(c.epsilon)) &&
        std::abs(c.intensity - out.back().intensity) <= 1e-6) {
      out.back().residual = std::min(out.back().residual, c.residual);
      continue;
    }
    out.push_back({c.epsilon, c.intensity, c.residual});
  }

  if (out.empty()) throw InternalError("adiabatic_levels: no root survived validation");
  return out;
}

QuantumState eigenstate(double alpha, double beta, double gamma, const AdiabaticLevel& level) {
  const double coupling = alpha + beta * level.intensity;
  double theta = 0.0;
  if (std::abs(coupling) > 1e-12) {
    theta = (level.epsilon - gamma) / coupling >= 0.0 ? 0.0 : std::acos(-1.0);
  }
  return from_bloch({1.0 - 2.0 * level.intensity, theta, false});
}

LevelCurves level_curves(double alpha, double beta, const std::vector<double>& gamma_grid) {
  struct Active {
    int id;
    double epsilon;
    double intensity;
  };
  LevelCurves curves;
  std::vector<Active> active;
  int next_id = 0;

  for (double gamma : gamma_grid) {
    const auto levels = adiabatic_levels(alpha, beta, gamma);

    struct Pair {
      double dist, dI;
      std::size_t level, act;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double de = levels[i].epsilon - active[j].epsilon;
        const double di = levels[i].intensity - active[j].intensity;
        pairs.push_back({std::hypot(de, di), std::abs(di), i, j});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
      return l.dist != r.dist ? l.dist < r.dist : l.dI < r.dI;
    });

    std::vector<int> level_id(levels.size(), -1);
    std::vector<bool> act_used(active.size(), false);
    for (const Pair& pr : pairs) {
      if (level_id[pr.level] >= 0 || act_used[pr.act]) continue;
      level_id[pr.level] = active[pr.act].id;
      act_used[pr.act] = true;
    }

    std::vector<Active> next_active;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (level_id[i] < 0) level_id[i] = next_id++;
      next_active.push_back({level_id[i], levels[i].epsilon, levels[i].intensity});
      curves.points.push_back({gamma, levels[i].epsilon, levels[i].intensity, level_id[i]});
    }
    active = std::move(next_active);
  }
  curves.branch_count = next_id;
  return curves;
}

double knot_slope(double alpha, double beta) {
  if (beta >= -alpha) throw NoKnot("knot_slope: no level crossing at gamma = 0 for beta >= -alpha");

  // Find a probe step inside the four-level window around gamma = 0.
  double h = 1e-4 * alpha;
  while (h >= 1e-9 * alpha) {
    if (level_count(alpha, beta, h) >= 4 && level_count(alpha, beta, -h) >= 4) break;
    h /= 10.0;
  }
  if (h < 1e-9 * alpha) {
    throw OutOfRegime("knot_slope: four-level window unresolvable (beta near -2*alpha)");
  }

  auto slope_at = [&](double step) {
    const double ep = nearest_to_zero_level(alpha, beta, step);
    const double em = nearest_to_zero_level(alpha, beta, -step);
    return (ep - em) / (2.0 * step);
  };

  double prev = slope_at(h);
  for (int it = 0; it < 40; ++it) {
    h /= 2.0;
    const double cur = slope_at(h);
    if (std::abs(cur - prev) <= 1e-3 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw OutOfRegime("knot_slope: finite-difference estimate did not stabilize");
}

StructureType classify_structure(double alpha, double beta) {
  const double b = beta / alpha;  // scaled units
  const double merge = window_merge_beta(1.0);
  for (double transition : {merge, -1.0, -2.0}) {
    if (std::abs(b - transition) < 1e-4) return StructureType::Indeterminate;
  }
  if (b < -1.0) {
    try {
      return knot_slope(1.0, b) > 0.0 ? StructureType::TypeIII : StructureType::TypeIV;
    } catch (const OutOfRegime&) {
      return StructureType::Indeterminate;  // window below slope resolution
    }
  }
  if (b < merge) {
    const auto trans = count_transitions(1.0, b, 0.3, 3001);
    if (trans.size() >= 2 && level_count(1.0, b, 0.5 * (trans[0] + trans[1])) >= 4) {
      return StructureType::TypeII;
    }
  }
  return StructureType::TypeI;
}

std::vector<double> count_transitions(double alpha, double beta, double gamma_max, int scan_points) {
  std::vector<double> out;
  double prev_gamma = gamma_max / scan_points * 0.5;
  int prev_count = level_count(alpha, beta, prev_gamma);
  for (int i = 1; i <= scan_points; ++i) {
    const double gamma = gamma_max * i / scan_points;
    const int count = level_count(alpha, beta, gamma);
    if (count != prev_count) {
      double lo = prev_gamma, hi = gamma;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (level_count(alpha, beta, mid) == prev_count ? lo : hi) = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_gamma = gamma;
    prev_count = count;
  }
  return out;
}

double window_merge_beta(double alpha) {
  static const double scaled = [] {
    double lo = -0.99;  // window present
    double hi = -0.90;  // window absent
    for (int it = 0; it < 18; ++it) {
      const double mid = 0.5 * (lo + hi);
      (has_four_level_window(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return alpha * scaled;
}

}  // namespace nlz::spectrum
