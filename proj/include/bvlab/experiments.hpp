#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bvlab/cartan.hpp"
#include "bvlab/config.hpp"
#include "bvlab/report.hpp"

namespace bvlab {

/// Experiment registry: name plus a one-line description for `bvlab list`.
struct ExperimentInfo {
  std::string name;
  std::string description;
};
const std::vector<ExperimentInfo>& experiment_list();

/// Runs the named experiment, writing report.csv, profile CSVs, and SVGs into
/// out_dir. Throws InvalidArgument for unknown names or bad parameters and
/// ResolutionInsufficient when the grid cannot support the request.
RunReport run_experiment(const std::string& name, const ExperimentConfig& config,
                         const std::string& out_dir);

/// A named obstacle-problem solution used by the verification sweeps.
struct CanonicalSolution {
  std::string name;
  std::shared_ptr<const GridSpace> space;
  CellSet obstacle;
  CellSet domain;
  CellSet set;        // solution
  double value = 0.0; // P(set, X)
};

/// The canonical suite: obstacle problems over rectangles, balls, two-ball
/// unions, half-plane bands, chains, on uniform and power-law grids.
std::vector<CanonicalSolution> canonical_suite(int resolution = 64);

/// The weak-Cartan demo set: a four-blob dyadic chain, one blob per annulus
/// H_0..H_3 of the radius-R decomposition, with superlinearly shrinking blob
/// sizes (so the chain is 1-thin at the origin, unlike a solid parabola
/// spine whose radial projection keeps it 1-thick).
CellSet cartan_demo_chain(const std::shared_ptr<const GridSpace>& space, double r);

/// The strong-Cartan demo set on the weighted grid: a large perimeter-rich
/// blob just inside R/2 plus four nearly-equidistant single cells, arranged
/// so the capacity tails fit the halving budget with nonempty bands.
CellSet strong_cartan_chain(const std::shared_ptr<const GridSpace>& space, double r);

}  // namespace bvlab
