// Dataset-reproduction harness. Each experiment regenerates one family of
// published datasets (level diagrams, phase diagram, tunneling curves,
// energy traces, fixed-point branches, hole locking), writes CSVs plus a
// manifest.json, and evaluates its built-in sanity checks. CSV is canonical;
// SVG plots are rendered from the same arrays with no extra computation.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nlz::experiments {

struct Options {
  std::filesystem::path outdir = "out";
  unsigned jobs = 0;     // 0: all logical cores
  bool svg = true;
  bool reduced = false;  // coarse smoke-test grids, same file layout
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string name;
  std::filesystem::path dir;
  std::vector<std::string> files;
  std::vector<Check> checks;
  double wall_time_s = 0.0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Adiabatic level diagrams eps(gamma) per beta, branch-labeled.
ExperimentResult run_levels(const Options& opt);

// Level-count grid over (beta, gamma), analytic and oracle boundary curves,
// their agreement table, both merge-point estimates, and the discrepancy
// report on the conflicting printed constants.
ExperimentResult run_phase_diagram(const Options& opt);

// Tunneling probability p(v) for representative beta sets plus the
// adiabatic plateau p(beta) at v = 0.001.
ExperimentResult run_tunneling(const Options& opt);

// Sweep energy expectation against the adiabatic levels.
ExperimentResult run_energy_follow(const Options& opt);

// Fixed-point branches s_f(gamma) with hole markers.
ExperimentResult run_fixed_points(const Options& opt);

// beta = -2, v = 1e-4 sweeps from both poles: s and F_hole traces.
ExperimentResult run_hole_locking(const Options& opt);

const std::vector<std::string>& experiment_names();
ExperimentResult run_experiment(const std::string& name, const Options& opt);
std::vector<ExperimentResult> run_all(const Options& opt);

// Conflicting printed values for the swallowtail boundary at beta = -1 and
// for the g2 series coefficients, against the computed ground truth.
// Returns the path of the written report.
std::filesystem::path write_discrepancy_report(const std::filesystem::path& dir);

}  // namespace nlz::experiments
