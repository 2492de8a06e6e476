#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "nlz/experiments.hpp"

namespace fs = std::filesystem;
namespace ex = nlz::experiments;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("nlz_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("experiment registry") {
  const auto& names = ex::experiment_names();
  REQUIRE(names.size() == 6);
  for (const auto& n : names) CHECK_FALSE(n.empty());
  CHECK_THROWS(ex::run_experiment("no-such-experiment", ex::Options{}));
}

TEST_CASE("each experiment passes its checks on reduced grids") {
  ex::Options opt;
  opt.outdir = fresh_dir("all");
  opt.reduced = true;
  opt.svg = false;
  opt.jobs = 0;
  for (const auto& name : ex::experiment_names()) {
    CAPTURE(name);
    const auto res = ex::run_experiment(name, opt);
    CHECK(res.name == name);
    for (const auto& c : res.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.passed);
    }
    // every advertised file exists and is non-empty
    for (const auto& f : res.files) {
      CAPTURE(f);
      CHECK(fs::exists(res.dir / f));
      CHECK(fs::file_size(res.dir / f) > 0);
    }
    // manifest parses and advertises the data files (itself excluded)
    const auto manifest_path = res.dir / "manifest.json";
    REQUIRE(fs::exists(manifest_path));
    const auto manifest = nlohmann::json::parse(slurp(manifest_path));
    CHECK(manifest.at("experiment").get<std::string>() == name);
    CHECK(manifest.at("files").size() + 1 == res.files.size());
    CHECK(manifest.contains("parameters"));
    CHECK(manifest.contains("checks"));
  }
  fs::remove_all(opt.outdir);
}

TEST_CASE("svg rendering is optional but valid when on") {
  ex::Options opt;
  opt.outdir = fresh_dir("svg");
  opt.reduced = true;
  opt.svg = true;
  const auto res = ex::run_experiment("levels", opt);
  bool have_svg = false;
  for (const auto& f : res.files)
    if (f.size() > 4 && f.substr(f.size() - 4) == ".svg") {
      have_svg = true;
      const auto body = slurp(res.dir / f);
      CHECK(body.find("<svg") != std::string::npos);
      CHECK(body.find("</svg>") != std::string::npos);
    }
  CHECK(have_svg);
  fs::remove_all(opt.outdir);
}

TEST_CASE("reruns are byte-identical") {
  ex::Options opt1;
  opt1.outdir = fresh_dir("det1");
  opt1.reduced = true;
  opt1.svg = false;
  ex::Options opt2 = opt1;
  opt2.outdir = fresh_dir("det2");

  const auto r1 = ex::run_experiment("levels", opt1);
  const auto r2 = ex::run_experiment("levels", opt2);
  REQUIRE(r1.files == r2.files);
  // manifest.json carries the wall time and is the one legitimately varying file
  for (const auto& f : r1.files)
    if (f != "manifest.json") CHECK(slurp(r1.dir / f) == slurp(r2.dir / f));

  // the grid experiment is parallel inside; still deterministic
  ex::Options opt3 = opt1;
  opt3.outdir = fresh_dir("det3");
  opt3.jobs = 1;
  ex::Options opt4 = opt1;
  opt4.outdir = fresh_dir("det4");
  opt4.jobs = 4;
  const auto r3 = ex::run_experiment("phase-diagram", opt3);
  const auto r4 = ex::run_experiment("phase-diagram", opt4);
  for (const auto& f : r3.files)
    if (f.size() > 4 && f.substr(f.size() - 4) == ".csv")
      CHECK(slurp(r3.dir / f) == slurp(r4.dir / f));

  for (const auto& d : {opt1.outdir, opt2.outdir, opt3.outdir, opt4.outdir}) fs::remove_all(d);
}

TEST_CASE("discrepancy report states the conflicts") {
  const auto dir = fresh_dir("disc");
  const auto path = ex::write_discrepancy_report(dir);
  REQUIRE(fs::exists(path));
  const auto body = slurp(path);
  CHECK(body.find("0.1843") != std::string::npos);  // the conflicting quoted value
  CHECK(body.find("kappa0") != std::string::npos);
  CHECK(body.find("oracle") != std::string::npos);
  CHECK(body.find("set A") != std::string::npos);
  CHECK(body.find("set B") != std::string::npos);
  fs::remove_all(dir);
}
