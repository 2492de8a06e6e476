#include "nlz/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlz/csv.hpp"
#include "nlz/dynamics.hpp"
#include "nlz/errors.hpp"
#include "nlz/experiments.hpp"
#include "nlz/parallel.hpp"
#include "nlz/phasespace.hpp"
#include "nlz/spectrum.hpp"
#include "nlz/version.hpp"

namespace nlz::cli {

namespace {

using nlohmann::json;

void write_manifest(const std::filesystem::path& dir, const std::string& name,
                    const json& params, const std::vector<std::string>& files) {
  json m;
  m["experiment"] = name;
  m["version"] = kVersion;
  m["parameters"] = params;
  m["files"] = files;
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << m.dump(2) << '\n';
}

struct SpectrumArgs {
  double alpha = 1.0, beta = 0.0;
  double gamma_min = -2.0, gamma_max = 2.0;
  int points = 1001;
};

struct TunnelArgs {
  double alpha = 1.0, beta = 0.0, v = 1.0;
  double rel_tol = 1e-10, abs_tol = 1e-12;
};

struct FixedArgs {
  double alpha = 1.0, beta = 0.0, gamma = 0.0;
};

struct EvolveArgs {
  double alpha = 1.0, beta = 0.0, v = 1.0;
  double gamma_start = 0.0, gamma_end = 0.0;  // 0/0: default window for v
  bool window_set = false;
  std::string initial = "ground";
  double rel_tol = 1e-10, abs_tol = 1e-12, stride = 0.0;
};

std::string branch_label(phasespace::FixedPointBranch b) {
  switch (b) {
    case phasespace::FixedPointBranch::Theta0: return "theta0";
    case phasespace::FixedPointBranch::ThetaPi: return "thetapi";
    default: return "hole";
  }
}

int report_experiments(const std::vector<experiments::ExperimentResult>& results,
                       std::ostream& out) {
  bool ok = true;
  for (const auto& res : results) {
    for (const auto& c : res.checks) {
      out << res.name << ": " << c.name << ": " << (c.passed ? "ok" : "FAIL") << " (" << c.detail
          << ")\n";
      ok = ok && c.passed;
    }
    out << res.name << ": wrote " << res.files.size() << " files in " << res.dir.string() << " ["
        << format_sig(res.wall_time_s) << " s]\n";
  }
  if (!ok) out << "one or more checks failed\n";
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear-coupling two-level sweeps: spectra, phase diagram, dynamics"};
  app.name("nlz");
  app.set_version_flag("--version", kVersion);
  app.set_help_all_flag("--help-all", "print help for all subcommands");
  app.set_config("--config", "", "configuration file (INI; sections per subcommand)");
  app.require_subcommand(0, 1);

  const char* env_outdir = std::getenv("NLZ_OUTDIR");
  std::string outdir = env_outdir ? env_outdir : "out";
  app.add_option("--outdir", outdir, "output directory")->capture_default_str();
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads")->capture_default_str();
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "adiabatic level curves over a gamma grid");
  SpectrumArgs sa;
  spectrum_cmd->add_option("--alpha", sa.alpha, "linear coupling")->capture_default_str();
  spectrum_cmd->add_option("--beta", sa.beta, "nonlinear coupling")->required();
  spectrum_cmd->add_option("--gamma-min", sa.gamma_min, "grid start")->capture_default_str();
  spectrum_cmd->add_option("--gamma-max", sa.gamma_max, "grid end")->capture_default_str();
  spectrum_cmd->add_option("--points", sa.points, "grid size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* tunnel_cmd = app.add_subcommand("tunnel", "tunneling probability for one sweep");
  TunnelArgs ta;
  tunnel_cmd->add_option("--alpha", ta.alpha, "linear coupling")->capture_default_str();
  tunnel_cmd->add_option("--beta", ta.beta, "nonlinear coupling")->required();
  tunnel_cmd->add_option("--v", ta.v, "sweep rate")->required()->check(CLI::PositiveNumber);
  tunnel_cmd->add_option("--rel-tol", ta.rel_tol, "integrator relative tolerance")
      ->capture_default_str();
  tunnel_cmd->add_option("--abs-tol", ta.abs_tol, "integrator absolute tolerance")
      ->capture_default_str();

  auto* phase_cmd = app.add_subcommand("phase", "level-count phase diagram with boundary curves");
  bool phase_reduced = false, phase_nosvg = false;
  phase_cmd->add_flag("--reduced", phase_reduced, "coarse smoke-test grids");
  phase_cmd->add_flag("--no-svg", phase_nosvg, "skip SVG rendering");

  auto* fixed_cmd = app.add_subcommand("fixedpoints", "classical fixed points at one (beta, gamma)");
  FixedArgs fa;
  fixed_cmd->add_option("--alpha", fa.alpha, "linear coupling")->capture_default_str();
  fixed_cmd->add_option("--beta", fa.beta, "nonlinear coupling")->required();
  fixed_cmd->add_option("--gamma", fa.gamma, "bias")->capture_default_str();

  auto* evolve_cmd = app.add_subcommand("evolve", "sweep trajectory with sampled observables");
  EvolveArgs ea;
  evolve_cmd->add_option("--alpha", ea.alpha, "linear coupling")->capture_default_str();
  evolve_cmd->add_option("--beta", ea.beta, "nonlinear coupling")->required();
  evolve_cmd->add_option("--v", ea.v, "sweep rate")->required()->check(CLI::PositiveNumber);
  auto* gs = evolve_cmd->add_option("--gamma-start", ea.gamma_start, "window start");
  auto* ge = evolve_cmd->add_option("--gamma-end", ea.gamma_end, "window end");
  gs->needs(ge);
  ge->needs(gs);
  evolve_cmd->add_option("--initial", ea.initial, "ground (1,0) or excited (0,1)")
      ->capture_default_str()
      ->check(CLI::IsMember({"ground", "excited"}));
  evolve_cmd->add_option("--rel-tol", ea.rel_tol, "integrator relative tolerance")
      ->capture_default_str();
  evolve_cmd->add_option("--abs-tol", ea.abs_tol, "integrator absolute tolerance")
      ->capture_default_str();
  evolve_cmd->add_option("--stride", ea.stride, "sample stride in gamma (0: span/2000)")
      ->capture_default_str();

  auto* repro_cmd = app.add_subcommand("repro", "regenerate the published datasets");
  std::string which = "all";
  {
    std::vector<std::string> allowed = experiments::experiment_names();
    allowed.push_back("all");
    repro_cmd->add_option("experiment", which, "experiment name or 'all'")
        ->capture_default_str()
        ->check(CLI::IsMember(allowed));
  }
  bool repro_reduced = false, repro_nosvg = false;
  repro_cmd->add_flag("--reduced", repro_reduced, "coarse smoke-test grids");
  repro_cmd->add_flag("--no-svg", repro_nosvg, "skip SVG rendering");

  std::vector<const char*> argv;
  argv.push_back("nlz");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (dump_config) {
    out << app.config_to_str(true, false);
    return 0;
  }

  try {
    if (*spectrum_cmd) {
      ModelParams{sa.alpha, sa.beta, 1.0, sa.gamma_min, sa.gamma_max}.validate();
      std::vector<double> grid(sa.points);
      for (int i = 0; i < sa.points; ++i)
        grid[i] = sa.points == 1 ? sa.gamma_min
                                 : sa.gamma_min + (sa.gamma_max - sa.gamma_min) * i / (sa.points - 1);
      const auto curves = spectrum::level_curves(sa.alpha, sa.beta, grid);
      const auto dir = std::filesystem::path(outdir) / "spectrum";
      CsvWriter csv(dir / "levels.csv", {"gamma", "epsilon", "intensity", "branch"});
      for (const auto& pt : curves.points)
        csv.row(std::vector<std::string>{format_sig(pt.gamma), format_sig(pt.epsilon),
                                         format_sig(pt.intensity), std::to_string(pt.branch)});
      write_manifest(dir, "spectrum",
                     json{{"alpha", sa.alpha},
                          {"beta", sa.beta},
                          {"gamma_range", {sa.gamma_min, sa.gamma_max}},
                          {"points", sa.points}},
                     {"levels.csv"});
      out << "wrote " << (dir / "levels.csv").string() << " (" << curves.branch_count
          << " branches)\n";
      return 0;
    }
    if (*tunnel_cmd) {
      dynamics::IntegratorConfig cfg;
      cfg.rel_tol = ta.rel_tol;
      cfg.abs_tol = ta.abs_tol;
      const double p = dynamics::tunneling_probability(ta.alpha, ta.beta, ta.v, cfg);
      const auto dir = std::filesystem::path(outdir) / "tunnel";
      CsvWriter csv(dir / "tunnel.csv", {"v", "beta", "p"});
      csv.row({ta.v, ta.beta, p});
      write_manifest(dir, "tunnel",
                     json{{"alpha", ta.alpha},
                          {"beta", ta.beta},
                          {"v", ta.v},
                          {"rel_tol", ta.rel_tol},
                          {"abs_tol", ta.abs_tol}},
                     {"tunnel.csv"});
      out << "p=" << format_sig(p) << "\n";
      return 0;
    }
    if (*phase_cmd) {
      experiments::Options eopt;
      eopt.outdir = outdir;
      eopt.jobs = jobs;
      eopt.svg = !phase_nosvg;
      eopt.reduced = phase_reduced;
      return report_experiments({experiments::run_phase_diagram(eopt)}, out);
    }
    if (*fixed_cmd) {
      for (const auto& fp : phasespace::find_fixed_points(fa.alpha, fa.beta, fa.gamma))
        out << branch_label(fp.branch) << "," << format_sig(fp.s) << "\n";
      return 0;
    }
    if (*evolve_cmd) {
      ModelParams params = dynamics::sweep_params(ea.alpha, ea.beta, ea.v);
      if (gs->count()) {
        params.gamma_start = ea.gamma_start;
        params.gamma_end = ea.gamma_end;
      }
      params.validate();
      dynamics::IntegratorConfig cfg;
      cfg.rel_tol = ea.rel_tol;
      cfg.abs_tol = ea.abs_tol;
      cfg.sample_stride = ea.stride;
      const QuantumState initial = ea.initial == "ground"
                                       ? QuantumState{{1.0, 0.0}, {0.0, 0.0}}
                                       : QuantumState{{0.0, 0.0}, {1.0, 0.0}};
      const auto sweep = dynamics::evolve(params, initial, cfg);
      const auto dir = std::filesystem::path(outdir) / "evolve";
      CsvWriter csv(dir / "evolve.csv",
                    {"gamma", "re_a", "im_a", "re_b", "im_b", "s", "theta", "energy"});
      for (const auto& s : sweep.samples)
        csv.row({s.gamma, s.state.a.real(), s.state.a.imag(), s.state.b.real(), s.state.b.imag(),
                 s.bloch.s, s.bloch.theta, s.energy});
      write_manifest(dir, "evolve",
                     json{{"alpha", ea.alpha},
                          {"beta", ea.beta},
                          {"v", ea.v},
                          {"gamma_range", {params.gamma_start, params.gamma_end}},
                          {"initial", ea.initial},
                          {"rel_tol", ea.rel_tol},
                          {"abs_tol", ea.abs_tol}},
                     {"evolve.csv"});
      out << "p=" << format_sig(sweep.p_final) << "\n";
      out << "norm_drift=" << format_sig(sweep.norm_drift) << "\n";
      return 0;
    }
    if (*repro_cmd) {
      experiments::Options eopt;
      eopt.outdir = outdir;
      eopt.jobs = jobs;
      eopt.svg = !repro_nosvg;
      eopt.reduced = repro_reduced;
      if (which == "all") return report_experiments(experiments::run_all(eopt), out);
      return report_experiments({experiments::run_experiment(which, eopt)}, out);
    }
    out << app.help();
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlz::Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nlz::cli
