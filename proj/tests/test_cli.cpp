#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bvlab/config.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/shapes.hpp"
#include "bvlab/svg.hpp"

using namespace bvlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const { return (path / sub).string(); }
};

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig cfg = ExperimentConfig::from_text(
      "# comment\n[experiment]\nname = coarea_suite\ncases = 12\n\n[space]\nresolution=16\n");
  CHECK(cfg.get("experiment.name", "") == "coarea_suite");
  CHECK(cfg.get_int("experiment.cases", 0) == 12);
  CHECK(cfg.get_int("space.resolution", 0) == 16);
  CHECK(cfg.get("missing.key", "fallback") == "fallback");
  CHECK_THROWS_AS(ExperimentConfig::from_text("no equals sign here"), InvalidArgument);
  CHECK_THROWS_AS(cfg.get_int("experiment.name", 0), InvalidArgument);
}

TEST_CASE("svg output is deterministic and well formed") {
  TempDir tmp("bvlab_svg_test");
  auto g = build_grid(2, 1.0, 16, WeightSpec::uniform());

  SUBCASE("empty layer list still draws the outline") {
    emit_svg(g, {}, tmp.str("empty.svg"));
    std::string s = slurp(tmp.str("empty.svg"));
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("rect") != std::string::npos);
  }
  SUBCASE("same input twice is byte identical") {
    std::vector<SvgLayer> layers = {
        SvgLayer::from_set(ball(g, Point{0.0, 0.0}, 0.4), "ball"),
        SvgLayer::from_set(box_set(g, -0.5, 0.0, -0.5, 0.0), "box")};
    emit_svg(g, layers, tmp.str("a.svg"));
    emit_svg(g, layers, tmp.str("b.svg"));
    CHECK(slurp(tmp.str("a.svg")) == slurp(tmp.str("b.svg")));
    CHECK(!slurp(tmp.str("a.svg")).empty());
  }
}

TEST_CASE("experiment registry and dispatch") {
  CHECK(experiment_list().size() == 7);
  TempDir tmp("bvlab_dispatch_test");
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_experiment("not_an_experiment", cfg, tmp.str()), InvalidArgument);
}

TEST_CASE("coarea suite runs green and its report is byte-deterministic") {
  TempDir tmp("bvlab_coarea_test");
  ExperimentConfig cfg;
  cfg.set("experiment.name", "coarea_suite");
  cfg.set("experiment.cases", "40");
  cfg.set("experiment.seed", "9");

  RunReport r1 = run_experiment("coarea_suite", cfg, tmp.str("run1"));
  RunReport r2 = run_experiment("coarea_suite", cfg, tmp.str("run2"));
  CHECK(r1.failed() == 0);
  CHECK(r1.rows.size() == 40);
  std::string csv1 = slurp(tmp.str("run1") + "/report.csv");
  std::string csv2 = slurp(tmp.str("run2") + "/report.csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("check_name,scale,lhs,rhs,tolerance,status\n", 0) == 0);
}

TEST_CASE("thinness atlas classifies its sets") {
  TempDir tmp("bvlab_atlas_test");
  ExperimentConfig cfg;
  RunReport rep = run_experiment("thinness_atlas", cfg, tmp.str());
  CHECK(rep.failed() == 0);
  CHECK(fs::exists(tmp.str("profile_cusp_chain.csv")));
}

TEST_CASE("canonical suite solves cleanly") {
  std::vector<CanonicalSolution> suite = canonical_suite(64);
  CHECK(suite.size() == 7);
  for (const CanonicalSolution& s : suite) {
    CHECK(s.obstacle.is_subset_of(s.set));
    CHECK(s.set.is_subset_of(s.domain));
    CHECK(s.value >= 0.0);
  }
}
