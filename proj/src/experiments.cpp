#include "nlz/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nlz/csv.hpp"
#include "nlz/dynamics.hpp"
#include "nlz/errors.hpp"
#include "nlz/parallel.hpp"
#include "nlz/phasespace.hpp"
#include "nlz/spectrum.hpp"
#include "nlz/svg.hpp"
#include "nlz/version.hpp"

namespace nlz::experiments {

namespace {

using nlohmann::json;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, int n) {
  const double la = std::log10(a), lb = std::log10(b);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, la + (lb - la) * i / (n - 1));
  out.back() = b;
  return out;
}

unsigned effective_jobs(const Options& opt) { return opt.jobs ? opt.jobs : default_jobs(); }

std::string beta_tag(double beta) { return format_sig(beta); }

void check(ExperimentResult& res, const std::string& name, bool passed, std::string detail) {
  res.checks.push_back({name, passed, std::move(detail)});
}

// Verifies the output-file invariant and writes manifest.json.
void finalize(ExperimentResult& res, const json& params, const Timer& timer) {
  res.wall_time_s = timer.seconds();
  bool ok = true;
  std::string missing;
  for (const auto& f : res.files) {
    const auto p = res.dir / f;
    if (!std::filesystem::exists(p) || std::filesystem::file_size(p) == 0) {
      ok = false;
      missing += f + " ";
    }
  }
  check(res, "outputs_exist", ok, ok ? "all listed files present and non-empty" : missing);

  json m;
  m["experiment"] = res.name;
  m["version"] = kVersion;
  m["parameters"] = params;
  m["wall_time_s"] = res.wall_time_s;
  m["files"] = json::array();
  for (const auto& f : res.files)
    m["files"].push_back({{"name", f},
                          {"bytes", std::filesystem::exists(res.dir / f)
                                        ? std::filesystem::file_size(res.dir / f)
                                        : 0}});
  m["checks"] = json::array();
  for (const auto& c : res.checks)
    m["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  std::ofstream out(res.dir / "manifest.json", std::ios::trunc);
  out << m.dump(2) << '\n';
  res.files.push_back("manifest.json");
}

ExperimentResult make_result(const Options& opt, const std::string& name) {
  ExperimentResult res;
  res.name = name;
  res.dir = opt.outdir / name;
  std::filesystem::create_directories(res.dir);
  return res;
}

}  // namespace

ExperimentResult run_levels(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "levels");
  const std::vector<double> betas{-0.9, 0.0, 1.0, 3.0, -0.98, -1.5, -3.0};
  const int n = opt.reduced ? 301 : 2001;
  const auto grid = linspace(-2.0, 2.0, n);

  std::vector<spectrum::LevelCurves> curves(betas.size());
  parallel_for(betas.size(), effective_jobs(opt),
               [&](std::size_t i) { curves[i] = spectrum::level_curves(1.0, betas[i], grid); });

  for (std::size_t i = 0; i < betas.size(); ++i) {
    const std::string file = "levels_beta_" + beta_tag(betas[i]) + ".csv";
    CsvWriter csv(res.dir / file, {"gamma", "epsilon", "intensity", "branch"});
    for (const auto& pt : curves[i].points)
      csv.row(std::vector<std::string>{format_sig(pt.gamma), format_sig(pt.epsilon),
                                       format_sig(pt.intensity), std::to_string(pt.branch)});
    res.files.push_back(file);
    if (opt.svg) {
      std::map<int, SvgSeries> by_branch;
      for (const auto& pt : curves[i].points) {
        auto& s = by_branch[pt.branch];
        s.label = "branch " + std::to_string(pt.branch);
        s.points.emplace_back(pt.gamma, pt.epsilon);
      }
      std::vector<SvgSeries> series;
      for (auto& [id, s] : by_branch) series.push_back(std::move(s));
      SvgChartOptions chart;
      chart.title = "levels, beta = " + beta_tag(betas[i]);
      chart.x_label = "gamma";
      chart.y_label = "epsilon";
      write_svg_chart(res.dir / ("levels_beta_" + beta_tag(betas[i]) + ".svg"), series, chart);
      res.files.push_back("levels_beta_" + beta_tag(betas[i]) + ".svg");
    }
  }

  // Linear case: the minimum gap sits at gamma = 0 and equals 2*alpha.
  {
    const auto& lc = curves[1];  // beta = 0
    double best_gap = 1e9, best_gamma = 0.0, gap_at_zero = 0.0;
    for (std::size_t k = 0; k < lc.points.size(); ++k) {
      const double g = lc.points[k].gamma;
      double lo = 1e9, hi = -1e9;
      for (const auto& pt : lc.points)
        if (pt.gamma == g) {
          lo = std::min(lo, pt.epsilon);
          hi = std::max(hi, pt.epsilon);
        }
      const double gap = hi - lo;
      if (gap < best_gap) {
        best_gap = gap;
        best_gamma = g;
      }
      if (g == 0.0) gap_at_zero = gap;
    }
    const double step = grid[1] - grid[0];
    check(res, "linear_minimum_gap", std::abs(gap_at_zero - 2.0) <= 1e-9 &&
                                         std::abs(best_gamma) <= step + 1e-12,
          "gap(0) = " + format_sig(gap_at_zero) + " at gamma = " + format_sig(best_gamma));
  }
  // beta = -1.5: the four-level samples stay inside |gamma| < 0.25.
  {
    const auto& lc = curves[5];
    std::map<double, int> counts;
    for (const auto& pt : lc.points) ++counts[pt.gamma];
    double worst = 0.0;
    for (const auto& [g, c] : counts)
      if (c >= 4) worst = std::max(worst, std::abs(g));
    check(res, "window_confined", worst > 0.0 && worst < 0.25,
          "four-level samples reach |gamma| = " + format_sig(worst));
  }
  // beta = -3: a level passes through eps = 0 at gamma = 0.
  {
    const auto& lc = curves[6];
    double best = 1e9, intensity = -1.0;
    for (const auto& pt : lc.points)
      if (pt.gamma == 0.0 && std::abs(pt.epsilon) < best) {
        best = std::abs(pt.epsilon);
        intensity = pt.intensity;
      }
    check(res, "zero_energy_level", best <= 1e-9 && std::abs(intensity - 1.0 / 3.0) <= 1e-9,
          "min |eps| at gamma=0: " + format_sig(best) + ", I = " + format_sig(intensity));
  }

  finalize(res, json{{"betas", betas}, {"gamma_points", n}, {"gamma_range", {-2.0, 2.0}}}, timer);
  return res;
}

ExperimentResult run_phase_diagram(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "phase-diagram");
  const double beta_step = opt.reduced ? 0.1 : 0.025;
  std::vector<double> bgrid;
  for (double b = -4.0; b < -1e-9; b += beta_step) bgrid.push_back(b);
  const auto ggrid = linspace(0.0, 0.3, opt.reduced ? 31 : 121);

  const auto diag = phasespace::phase_diagram(bgrid, ggrid, effective_jobs(opt));

  {
    CsvWriter csv(res.dir / "level_counts.csv", {"beta", "gamma", "count"});
    for (std::size_t ib = 0; ib < bgrid.size(); ++ib)
      for (std::size_t ig = 0; ig < ggrid.size(); ++ig)
        csv.row(std::vector<std::string>{
            format_sig(bgrid[ib]), format_sig(ggrid[ig]),
            std::to_string(diag.level_counts[ib * ggrid.size() + ig])});
    res.files.push_back("level_counts.csv");
  }
  auto kind_name = [](phasespace::BoundaryKind k) {
    switch (k) {
      case phasespace::BoundaryKind::F: return "f";
      case phasespace::BoundaryKind::G1: return "g1";
      default: return "g2";
    }
  };
  {
    CsvWriter csv(res.dir / "boundaries.csv", {"kind", "source", "beta", "gamma_c"});
    for (const auto& b : diag.boundaries)
      csv.row(std::vector<std::string>{
          kind_name(b.kind), b.source == phasespace::BoundarySource::Analytic ? "analytic" : "oracle",
          format_sig(b.beta), format_sig(b.gamma_c)});
    res.files.push_back("boundaries.csv");
  }
  {
    CsvWriter csv(res.dir / "agreement.csv", {"kind", "beta", "analytic", "oracle", "abs_diff"});
    for (const auto& a : diag.agreement)
      csv.row(std::vector<std::string>{kind_name(a.kind), format_sig(a.beta),
                                       format_sig(a.analytic), format_sig(a.oracle),
                                       format_sig(a.abs_diff)});
    res.files.push_back("agreement.csv");
  }
  {
    auto type_name = [](spectrum::StructureType t) {
      switch (t) {
        case spectrum::StructureType::TypeI: return "TypeI";
        case spectrum::StructureType::TypeII: return "TypeII";
        case spectrum::StructureType::TypeIII: return "TypeIII";
        case spectrum::StructureType::TypeIV: return "TypeIV";
        default: return "Indeterminate";
      }
    };
    CsvWriter csv(res.dir / "structure.csv", {"beta", "type"});
    for (const auto& [b, t] : diag.structure)
      csv.row(std::vector<std::string>{format_sig(b), type_name(t)});
    res.files.push_back("structure.csv");
  }
  {
    CsvWriter csv(res.dir / "merge.csv", {"method", "beta"});
    csv.row(std::vector<std::string>{"discriminant", format_sig(diag.merge_beta_analytic)});
    csv.row(std::vector<std::string>{"level_count", format_sig(diag.merge_beta_counts)});
    res.files.push_back("merge.csv");
  }
  write_discrepancy_report(res.dir);
  res.files.push_back("discrepancy_report.md");

  if (opt.svg) {
    std::vector<SvgSeries> series(4);
    const char* labels[4] = {"f analytic", "f oracle", "g analytic", "g oracle"};
    for (const auto& b : diag.boundaries) {
      const bool is_f = b.kind == phasespace::BoundaryKind::F;
      const bool oracle = b.source == phasespace::BoundarySource::Oracle;
      series[(is_f ? 0 : 2) + (oracle ? 1 : 0)].points.emplace_back(b.beta, b.gamma_c);
    }
    for (int i = 0; i < 4; ++i) series[i].label = labels[i];
    SvgChartOptions chart;
    chart.title = "four-level window boundaries";
    chart.x_label = "beta";
    chart.y_label = "gamma_c";
    write_svg_chart(res.dir / "boundaries.svg", series, chart);
    res.files.push_back("boundaries.svg");
  }

  // Window width vanishes at beta = -2.
  {
    double at_m2 = -1.0;
    for (const auto& b : diag.boundaries)
      if (b.kind == phasespace::BoundaryKind::F &&
          b.source == phasespace::BoundarySource::Analytic && std::abs(b.beta + 2.0) < 1e-12)
        at_m2 = b.gamma_c;
    check(res, "window_closes_at_beta_minus2", at_m2 >= 0.0 && at_m2 <= 1e-12,
          "analytic gamma_c(-2) = " + format_sig(at_m2));
  }
  {
    double oracle_m3 = -1.0;
    for (const auto& b : diag.boundaries)
      if (b.kind == phasespace::BoundaryKind::F && b.source == phasespace::BoundarySource::Oracle &&
          std::abs(b.beta + 3.0) < 1e-12)
        oracle_m3 = b.gamma_c;
    check(res, "oracle_boundary_beta_minus3", std::abs(oracle_m3 - 0.0423) <= 1e-3,
          "oracle gamma_c(-3) = " + format_sig(oracle_m3));
  }
  check(res, "merge_point_band",
        diag.merge_beta_analytic > -0.97 && diag.merge_beta_analytic < -0.95 &&
            diag.merge_beta_counts > -0.97 && diag.merge_beta_counts < -0.95 &&
            std::abs(diag.merge_beta_analytic - diag.merge_beta_counts) <= 1e-3,
        "discriminant " + format_sig(diag.merge_beta_analytic) + ", level-count " +
            format_sig(diag.merge_beta_counts));
  {
    double worst = 0.0;
    for (const auto& a : diag.agreement)
      if (a.kind == phasespace::BoundaryKind::F && a.beta <= -1.2)
        worst = std::max(worst, a.abs_diff);
    check(res, "boundary_agreement", worst <= 1e-3,
          "max |analytic - oracle| over beta <= -1.2: " + format_sig(worst));
  }

  finalize(res,
           json{{"beta_step", beta_step},
                {"beta_range", {-4.0, 0.0}},
                {"gamma_points", ggrid.size()},
                {"gamma_range", {0.0, 0.3}}},
           timer);
  return res;
}

ExperimentResult run_tunneling(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "tunneling");
  const auto vgrid = opt.reduced ? logspace(0.1, 10.0, 7) : logspace(1e-3, 10.0, 25);

  struct Set {
    std::string file;
    std::vector<double> betas;
  };
  const std::vector<Set> sets{
      {"increasing_beta.csv", {-0.9, 0.0, 1.0, 3.0}},
      {"near_critical.csv", {-0.96, -0.97, -0.98, -0.99}},
      {"self_trapped.csv", {-1.2, -1.5, -3.0, -5.0}},
  };
  const std::vector<double> plateau_betas =
      opt.reduced ? std::vector<double>{-2.0} : std::vector<double>{-1.2, -1.5, -2.0, -3.0, -5.0};
  const double plateau_rate = 1e-3;

  struct Task {
    double beta, v;
    double p = 0.0;
  };
  std::vector<Task> tasks;
  for (const auto& set : sets)
    for (double beta : set.betas)
      for (double v : vgrid) tasks.push_back({beta, v});
  const std::size_t plateau_begin = tasks.size();
  for (double beta : plateau_betas) tasks.push_back({beta, plateau_rate});

  parallel_for(tasks.size(), effective_jobs(opt), [&](std::size_t i) {
    tasks[i].p = dynamics::tunneling_probability(1.0, tasks[i].beta, tasks[i].v);
  });

  std::size_t cursor = 0;
  for (const auto& set : sets) {
    CsvWriter csv(res.dir / set.file, {"v", "beta", "p"});
    for (std::size_t b = 0; b < set.betas.size(); ++b)
      for (std::size_t k = 0; k < vgrid.size(); ++k, ++cursor)
        csv.row({tasks[cursor].v, tasks[cursor].beta, tasks[cursor].p});
    res.files.push_back(set.file);
    if (opt.svg) {
      std::vector<SvgSeries> series(set.betas.size());
      std::size_t base = cursor - set.betas.size() * vgrid.size();
      for (std::size_t b = 0; b < set.betas.size(); ++b) {
        series[b].label = "beta = " + beta_tag(set.betas[b]);
        for (std::size_t k = 0; k < vgrid.size(); ++k)
          series[b].points.emplace_back(tasks[base + b * vgrid.size() + k].v,
                                        tasks[base + b * vgrid.size() + k].p);
      }
      SvgChartOptions chart;
      chart.title = "tunneling probability";
      chart.x_label = "v";
      chart.y_label = "p";
      chart.log_x = true;
      const std::string svg = set.file.substr(0, set.file.size() - 4) + ".svg";
      write_svg_chart(res.dir / svg, series, chart);
      res.files.push_back(svg);
    }
  }
  {
    CsvWriter csv(res.dir / "adiabatic_plateau.csv", {"beta", "p", "p_analytic"});
    for (std::size_t i = plateau_begin; i < tasks.size(); ++i)
      csv.row({tasks[i].beta, tasks[i].p,
               dynamics::adiabatic_probability_analytic(1.0, tasks[i].beta)});
    res.files.push_back("adiabatic_plateau.csv");
  }

  // Linear curve overlays exp(-pi/v) where the reference is resolvable.
  {
    double worst = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < vgrid.size(); ++k) {
      const Task& t = tasks[vgrid.size() + k];  // beta = 0 block
      const double ref = dynamics::lz_reference(1.0, t.v);
      if (ref < 1e-10) continue;
      worst = std::max(worst, std::abs(t.p - ref) / ref);
      ++used;
    }
    check(res, "linear_overlay", used > 0 && worst <= 0.02,
          "max relative error " + format_sig(worst) + " over " + std::to_string(used) +
              " grid points with reference > 1e-10");
  }
  // p decreases along beta = 0 -> 1 -> 3 at the fastest-sweep end.
  {
    std::size_t k5 = vgrid.size() - 1;
    for (std::size_t k = 0; k < vgrid.size(); ++k)
      if (std::abs(vgrid[k] - 5.0) < std::abs(vgrid[k5] - 5.0)) k5 = k;
    const double p0 = tasks[1 * vgrid.size() + k5].p;
    const double p1 = tasks[2 * vgrid.size() + k5].p;
    const double p3 = tasks[3 * vgrid.size() + k5].p;
    check(res, "fast_sweep_monotone_in_beta", p0 > p1 && p1 > p3,
          "at v = " + format_sig(vgrid[k5]) + ": p(0) = " + format_sig(p0) +
              ", p(1) = " + format_sig(p1) + ", p(3) = " + format_sig(p3));
  }
  {
    double worst = 0.0;
    for (std::size_t i = plateau_begin; i < tasks.size(); ++i)
      worst = std::max(worst,
                       std::abs(tasks[i].p - dynamics::adiabatic_probability_analytic(
                                                  1.0, tasks[i].beta)));
    check(res, "adiabatic_plateau", worst <= 0.02,
          "max |p - (-1/beta)| = " + format_sig(worst) + " at v = " + format_sig(plateau_rate));
  }

  finalize(res,
           json{{"v_points", vgrid.size()},
                {"v_range", {vgrid.front(), vgrid.back()}},
                {"plateau_betas", plateau_betas},
                {"plateau_rate", plateau_rate}},
           timer);
  return res;
}

ExperimentResult run_energy_follow(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "energy-follow");
  const double v = opt.reduced ? 0.01 : 1e-3;
  const std::vector<double> betas{1.0, -0.98, -3.0};

  std::vector<dynamics::EnergyTrace> traces(betas.size());
  parallel_for(betas.size(), effective_jobs(opt), [&](std::size_t i) {
    const auto params = dynamics::sweep_params(1.0, betas[i], v);
    traces[i] = dynamics::dynamical_energy_trace(params, dynamics::lower_branch_state(params));
  });

  for (std::size_t i = 0; i < betas.size(); ++i) {
    const std::string tag = beta_tag(betas[i]);
    {
      CsvWriter csv(res.dir / ("energy_beta_" + tag + ".csv"), {"gamma", "energy"});
      for (const auto& [g, e] : traces[i].energy) csv.row({g, e});
      res.files.push_back("energy_beta_" + tag + ".csv");
    }
    {
      CsvWriter csv(res.dir / ("levels_beta_" + tag + ".csv"),
                    {"gamma", "epsilon", "intensity", "branch"});
      for (const auto& pt : traces[i].levels.points)
        csv.row(std::vector<std::string>{format_sig(pt.gamma), format_sig(pt.epsilon),
                                         format_sig(pt.intensity), std::to_string(pt.branch)});
      res.files.push_back("levels_beta_" + tag + ".csv");
    }
    if (opt.svg) {
      std::vector<SvgSeries> series(1);
      series[0].label = "energy";
      series[0].points = traces[i].energy;
      std::map<int, SvgSeries> by_branch;
      for (const auto& pt : traces[i].levels.points) {
        by_branch[pt.branch].label = "level " + std::to_string(pt.branch);
        by_branch[pt.branch].points.emplace_back(pt.gamma, pt.epsilon);
      }
      for (auto& [id, s] : by_branch) series.push_back(std::move(s));
      SvgChartOptions chart;
      chart.title = "energy following, beta = " + tag;
      chart.x_label = "gamma";
      chart.y_label = "energy";
      write_svg_chart(res.dir / ("energy_beta_" + tag + ".svg"), series, chart);
      res.files.push_back("energy_beta_" + tag + ".svg");
    }
  }

  // In the smooth regime the sweep hugs the lower branch throughout.
  {
    const auto& tr = traces[0];
    std::map<double, double> lower;
    for (const auto& pt : tr.levels.points) {
      auto it = lower.find(pt.gamma);
      if (it == lower.end() || pt.epsilon < it->second) lower[pt.gamma] = pt.epsilon;
    }
    double worst = 0.0;
    for (const auto& [g, e] : tr.energy) worst = std::max(worst, std::abs(e - lower.at(g)));
    check(res, "lower_branch_following", worst <= 1e-2,
          "max |energy - lower level| = " + format_sig(worst) + " for beta = 1");
  }

  finalize(res, json{{"betas", betas}, {"sweep_rate", v}}, timer);
  return res;
}

ExperimentResult run_fixed_points(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "fixed-points");
  struct Case {
    double beta;
    double gamma_max;
  };
  const std::vector<Case> cases{{0.0, 2.0}, {-0.9, 2.0}, {-2.0, 0.5}, {-3.0, 0.5}};
  const int n = opt.reduced ? 201 : 801;

  struct Row {
    double gamma, s, theta;
    phasespace::FixedPointBranch branch;
  };
  std::vector<std::vector<Row>> rows(cases.size());
  parallel_for(cases.size(), effective_jobs(opt), [&](std::size_t i) {
    const auto grid = linspace(-cases[i].gamma_max, cases[i].gamma_max, n);
    for (double g : grid)
      for (const auto& fp : phasespace::find_fixed_points(1.0, cases[i].beta, g))
        rows[i].push_back({g, fp.s, fp.theta, fp.branch});
  });

  auto branch_name = [](phasespace::FixedPointBranch b) {
    switch (b) {
      case phasespace::FixedPointBranch::Theta0: return "theta0";
      case phasespace::FixedPointBranch::ThetaPi: return "thetapi";
      default: return "hole";
    }
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string tag = beta_tag(cases[i].beta);
    CsvWriter csv(res.dir / ("branches_beta_" + tag + ".csv"), {"gamma", "s", "theta", "branch"});
    for (const auto& r : rows[i])
      csv.row(std::vector<std::string>{format_sig(r.gamma), format_sig(r.s), format_sig(r.theta),
                                       branch_name(r.branch)});
    res.files.push_back("branches_beta_" + tag + ".csv");
    if (opt.svg) {
      SvgSeries s0{{}, "theta = 0", ""}, spi{{}, "theta = pi", ""}, hole{{}, "hole", "#000000"};
      for (const auto& r : rows[i]) {
        if (r.branch == phasespace::FixedPointBranch::Theta0) s0.points.emplace_back(r.gamma, r.s);
        else if (r.branch == phasespace::FixedPointBranch::ThetaPi) spi.points.emplace_back(r.gamma, r.s);
        else hole.points.emplace_back(r.gamma, r.s);
      }
      SvgChartOptions chart;
      chart.title = "fixed points, beta = " + tag;
      chart.x_label = "gamma";
      chart.y_label = "s";
      write_svg_chart(res.dir / ("branches_beta_" + tag + ".svg"), {s0, spi, hole}, chart);
      res.files.push_back("branches_beta_" + tag + ".svg");
    }
  }
  {
    CsvWriter csv(res.dir / "holes.csv", {"beta", "gamma", "s"});
    for (const auto& c : cases)
      if (auto h = phasespace::hole_fixed_point(1.0, c.beta))
        csv.row({c.beta, 0.0, *h});
    res.files.push_back("holes.csv");
  }

  {
    int count = 0;
    double worst = 0.0;
    for (const auto& r : rows[0])
      if (r.gamma == 0.0) {
        ++count;
        worst = std::max(worst, std::abs(r.s));
      }
    check(res, "linear_branches_cross_origin", count == 2 && worst <= 1e-9,
          std::to_string(count) + " fixed points at gamma = 0, max |s| = " + format_sig(worst));
  }
  {
    bool found = false;
    for (const auto& r : rows[2])
      if (r.gamma == 0.0 && r.branch == phasespace::FixedPointBranch::Hole &&
          std::abs(r.s) <= 1e-12)
        found = true;
    check(res, "hole_marker_at_origin", found, "beta = -2 hole entry at (0, 0)");
  }
  {
    std::map<double, int> counts;
    for (const auto& r : rows[3]) ++counts[r.gamma];
    double widest = 0.0;
    for (const auto& [g, c] : counts)
      if (c >= 4) widest = std::max(widest, std::abs(g));
    const double gc = 0.0422664690786;  // root-count boundary for beta = -3
    const double step = 2.0 * cases[3].gamma_max / (n - 1);
    check(res, "four_branch_window_width", widest > 0.0 && widest <= gc && gc - widest <= step,
          "four-branch samples reach |gamma| = " + format_sig(widest) + ", boundary " +
              format_sig(gc));
  }

  finalize(res, json{{"gamma_points", n}}, timer);
  return res;
}

ExperimentResult run_hole_locking(const Options& opt) {
  Timer timer;
  auto res = make_result(opt, "hole-locking");
  const double v = opt.reduced ? 2e-3 : 1e-4;
  const auto params = dynamics::sweep_params(1.0, -2.0, v);

  std::vector<dynamics::SweepResult> sweeps(2);
  const QuantumState initials[2] = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}};
  parallel_for(2, std::min(2u, effective_jobs(opt)),
               [&](std::size_t i) { sweeps[i] = dynamics::evolve(params, initials[i]); });

  const auto& minus = sweeps[0];  // starts at s = -1
  const auto& plus = sweeps[1];   // starts at s = +1
  if (minus.samples.size() != plus.samples.size())
    throw InternalError("sample grids of the two sweeps differ");

  std::vector<double> fid_minus, fid_plus;
  {
    CsvWriter csv(res.dir / "hole_locking.csv",
                  {"gamma", "s_init_minus", "s_init_plus", "F_hole_minus", "F_hole_plus"});
    for (std::size_t k = 0; k < minus.samples.size(); ++k) {
      const double fm = dynamics::fidelity_to_hole(1.0, -2.0, minus.samples[k].state);
      const double fp = dynamics::fidelity_to_hole(1.0, -2.0, plus.samples[k].state);
      fid_minus.push_back(fm);
      fid_plus.push_back(fp);
      csv.row({minus.samples[k].gamma, minus.samples[k].bloch.s, plus.samples[k].bloch.s, fm, fp});
    }
    res.files.push_back("hole_locking.csv");
  }
  if (opt.svg) {
    SvgSeries sm{{}, "s, start -1", ""}, sp{{}, "s, start +1", ""};
    SvgSeries fm{{}, "F, start -1", ""}, fp{{}, "F, start +1", ""};
    for (std::size_t k = 0; k < minus.samples.size(); ++k) {
      sm.points.emplace_back(minus.samples[k].gamma, minus.samples[k].bloch.s);
      sp.points.emplace_back(plus.samples[k].gamma, plus.samples[k].bloch.s);
      fm.points.emplace_back(minus.samples[k].gamma, fid_minus[k]);
      fp.points.emplace_back(plus.samples[k].gamma, fid_plus[k]);
    }
    SvgChartOptions chart;
    chart.title = "hole locking, beta = -2";
    chart.x_label = "gamma";
    chart.y_label = "s / F";
    write_svg_chart(res.dir / "hole_locking.svg", {sm, sp, fm, fp}, chart);
    res.files.push_back("hole_locking.svg");
  }

  const double post = 0.5;  // past the locking region for beta = -2
  double s_end_m = minus.samples.back().bloch.s;
  double s_end_p = plus.samples.back().bloch.s;
  double agree = 0.0, fmin = 1.0;
  for (std::size_t k = 0; k < minus.samples.size(); ++k) {
    if (minus.samples[k].gamma < post) continue;
    agree = std::max(agree, std::abs(minus.samples[k].bloch.s - plus.samples[k].bloch.s));
    fmin = std::min({fmin, fid_minus[k], fid_plus[k]});
  }
  const double s_tol = opt.reduced ? 0.1 : 1e-2;
  const double f_tol = opt.reduced ? 0.9 : 0.99;
  check(res, "final_s_at_hole", std::abs(s_end_m) <= s_tol && std::abs(s_end_p) <= s_tol,
        "final s: " + format_sig(s_end_m) + " and " + format_sig(s_end_p));
  check(res, "memory_erasure", agree <= s_tol,
        "max |s_minus - s_plus| past gamma = " + format_sig(post) + ": " + format_sig(agree));
  check(res, "fidelity_locked", fmin >= f_tol,
        "min F_hole past gamma = " + format_sig(post) + ": " + format_sig(fmin));

  finalize(res, json{{"beta", -2.0}, {"sweep_rate", v}, {"post_window_gamma", post}}, timer);
  return res;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"levels",       "phase-diagram", "tunneling",
                                              "energy-follow", "fixed-points",  "hole-locking"};
  return names;
}

ExperimentResult run_experiment(const std::string& name, const Options& opt) {
  if (name == "levels") return run_levels(opt);
  if (name == "phase-diagram") return run_phase_diagram(opt);
  if (name == "tunneling") return run_tunneling(opt);
  if (name == "energy-follow") return run_energy_follow(opt);
  if (name == "fixed-points") return run_fixed_points(opt);
  if (name == "hole-locking") return run_hole_locking(opt);
  throw std::invalid_argument("unknown experiment: " + name);
}

std::vector<ExperimentResult> run_all(const Options& opt) {
  std::vector<ExperimentResult> out;
  for (const auto& name : experiment_names()) out.push_back(run_experiment(name, opt));
  return out;
}

std::filesystem::path write_discrepancy_report(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "discrepancy_report.md";

  // Ground truth: the window boundary at beta = -1 from root counting, and
  // its closed-form limit through the tangency construction.
  const double oracle = spectrum::count_transitions(1.0, -1.0, 0.3, 4001).at(0);
  const double phi = 0.5 * (1.0 - std::sqrt(5.0));
  const double kappa0 = (2.0 * phi + 1.0) * std::sqrt(-phi) / (2.0 * phi);
  const double vertex = phasespace::boundary_f(1.0, -1.0 - 1e-12);
  const double quoted = 0.1843;

  // Series sets against the exact boundary over the swallowtail range.
  double dev_a = 0.0, dev_b = 0.0;
  for (double eta = 0.005; eta <= 0.0405; eta += 0.005) {
    const double exact = phasespace::boundary_g(1.0, -1.0 + eta).second;
    dev_a = std::max(dev_a, std::abs(phasespace::boundary_g_series(-1.0 + eta).second - exact));
    dev_b = std::max(dev_b, std::abs(phasespace::boundary_g2_series_alt(-1.0 + eta) - exact));
  }

  std::ofstream out(path, std::ios::trunc);
  out << "# Reference-constant discrepancy report\n\n"
      << "Quantity: upper boundary gamma_c of the four-level window at beta = -1 (alpha = 1).\n\n"
      << "| source | value |\n|---|---|\n"
      << "| root-count oracle at beta = -1 | " << format_sig(oracle) << " |\n"
      << "| tangency closed-form limit kappa0 | " << format_sig(kappa0) << " |\n"
      << "| vertex approximation evaluated at beta = -1 | " << format_sig(vertex) << " |\n"
      << "| quoted reference value | " << format_sig(quoted) << " |\n\n"
      << "The oracle agrees with kappa0 to " << format_sig(std::abs(oracle - kappa0))
      << " and with continuity of the boundary across beta = -1. The quoted value "
      << format_sig(quoted) << " differs from both by more than 0.03 and is reproduced by no "
      << "construction tried here; the vertex form differs because its parabola-vertex "
      << "approximation degrades near beta = -1 (error "
      << format_sig(std::abs(vertex - oracle))
      << " there, below 1e-5 for beta <= -1.5).\n\n"
      << "Second conflict: two printed coefficient sets for the series of the upper "
      << "swallowtail boundary in eta = beta + 1:\n\n"
      << "- set A: kappa0 + 0.34 eta + 1.5 eta^2 + 5.0 eta^3\n"
      << "- set B: 0.15 + 0.636 eta + 2.4 eta^2 + 40 eta^3\n\n"
      << "Max deviation from the exact boundary over eta in [0.005, 0.04]: set A "
      << format_sig(dev_a) << ", set B " << format_sig(dev_b) << ". The sets conflict: "
      << "set A carries the exact eta -> 0 intercept kappa0 but a wrong slope (deviation "
      << "grows to ~1.5e-2 at the merge end), while set B tracks the exact boundary to a "
      << "few 1e-4 across the window despite its rounded intercept. Neither set is treated "
      << "as truth; both are emitted as diagnostics against the exact tangency "
      << "construction.\n\n"
      << "Consequence: acceptance validates the boundary against the oracle and the exact "
      << "tangency construction instead of the quoted value.\n";
  return path;
}

}  // namespace nlz::experiments
