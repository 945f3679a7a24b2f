#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/rng.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides) {
  bvlab::ExperimentConfig cfg = config_path.empty()
                                    ? bvlab::ExperimentConfig()
                                    : bvlab::ExperimentConfig::from_file(config_path);
  for (const std::string& kv : overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw bvlab::InvalidArgument("--set expects key=value: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  std::string name = cfg.get("experiment.name", "");
  if (name.empty()) throw bvlab::InvalidArgument("config must carry [experiment] name = ...");

  auto t0 = std::chrono::steady_clock::now();
  bvlab::RunReport rep = bvlab::run_experiment(name, cfg, out_dir);
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  int pass = 0, fail = 0, untrusted = 0;
  for (const bvlab::CheckRow& r : rep.rows) {
    if (r.status == bvlab::CheckStatus::Pass) ++pass;
    else if (r.status == bvlab::CheckStatus::Fail) ++fail;
    else ++untrusted;
  }
  std::printf("experiment %s: %d pass, %d fail, %d untrusted (%.1f ms)\n", name.c_str(), pass,
              fail, untrusted, rep.wall_ms);
  for (const bvlab::CheckRow& r : rep.rows) {
    if (r.status == bvlab::CheckStatus::Fail) {
      std::printf("  FAIL %s scale=%s lhs=%s rhs=%s\n", r.name.c_str(),
                  bvlab::format_number(r.scale).c_str(), bvlab::format_number(r.lhs).c_str(),
                  bvlab::format_number(r.rhs).c_str());
    }
  }
  for (const std::string& a : rep.artifacts) std::printf("  wrote %s\n", a.c_str());
  return fail == 0 ? 0 : 1;
}

int cmd_list() {
  for (const bvlab::ExperimentInfo& e : bvlab::experiment_list()) {
    std::printf("%-16s %s\n", e.name.c_str(), e.description.c_str());
  }
  return 0;
}

int cmd_oracle(const std::string& grid, int cases, std::uint64_t seed) {
  int n = 3;
  if (grid == "3x3") n = 4;       // 3x3 free window inside a 4x4-plus frame
  else if (grid == "4x4") n = 6;
  else throw bvlab::InvalidArgument("oracle --grid expects 3x3 or 4x4");

  auto space = bvlab::build_grid(2, 1.0, std::max(n, 4), bvlab::WeightSpec::uniform());
  bvlab::Rng rng(seed);
  int mismatches = 0;
  for (int i = 0; i < cases; ++i) {
    bvlab::CellSet sources(space), sinks(space);
    for (int c = 0; c < space->cell_count(); ++c) {
      std::uint64_t draw = rng.next_below(10);
      if (draw < 2) sources.add(c);
      else if (draw < 4) sinks.add(c);
    }
    sinks = sinks.set_minus(sources);
    bvlab::CutProblem p{space, sources, sinks};
    long long free_cells = space->cell_count() - sources.cardinality() - sinks.cardinality();
    if (free_cells > 20) continue;
    bvlab::CutResult fast = bvlab::min_cut(p);
    bvlab::CutResult slow = bvlab::enumerate_oracle(p);
    bool same_value = std::abs(fast.value - slow.value) <=
                      1e-12 * std::max(1.0, std::max(fast.value, slow.value));
    bool same_set = fast.set == slow.set;
    if (!same_value || !same_set) {
      ++mismatches;
      std::printf("case %d: MISMATCH value %s vs %s, sets %s\n", i,
                  bvlab::format_number(fast.value).c_str(),
                  bvlab::format_number(slow.value).c_str(), same_set ? "equal" : "differ");
    }
  }
  std::printf("oracle cross-check: %d cases, %d mismatches\n", cases, mismatches);
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bvlab: discrete laboratory for perimeter minimizers, 1-capacity, and the"
               " weak Cartan property on weighted grids"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  run->add_option("--config", config_path, "flat key=value config with [section] headers");
  run->add_option("--out", out_dir, "output directory (report.csv, profiles, SVGs)");
  run->add_option("--set", overrides,
                  "override config entries, e.g. --set experiment.name=coarea_suite");

  auto* list = app.add_subcommand("list", "list available experiments");

  auto* oracle = app.add_subcommand("oracle", "brute-force cross-check of the cut solver");
  std::string grid = "3x3";
  int cases = 100;
  std::uint64_t seed = 1;
  oracle->add_option("--grid", grid, "window size: 3x3 or 4x4");
  oracle->add_option("--cases", cases, "number of randomized instances");
  oracle->add_option("--seed", seed, "rng seed");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides);
    if (list->parsed()) return cmd_list();
    if (oracle->parsed()) return cmd_oracle(grid, cases, seed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const bvlab::ResolutionInsufficient& e) {
    std::fprintf(stderr, "resolution insufficient: %s\n", e.what());
    return 3;
  } catch (const bvlab::InvalidArgument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
