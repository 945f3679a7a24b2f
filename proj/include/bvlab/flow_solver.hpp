#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "bvlab/grid_space.hpp"

namespace bvlab {

/// Grid cut instance: sources are forced inside, sinks forced outside, and
/// the remaining (free) cells are optimized over. Capacities are the space's
/// interior edge weights.
struct CutProblem {
  std::shared_ptr<const GridSpace> space;
  CellSet sources;
  CellSet sinks;
};

struct CutResult {
  double value = 0.0;        // min-cut capacity, unscaled
  CellSet set;               // minimal source side (residual reachability)
  std::vector<std::pair<int, int>> saturated_edges;  // cut edges (c, c'), c < c'
};

/// Exact max-flow/min-cut. Capacities are rounded onto a per-space power-of-
/// two integer grid (relative error <= 1e-12) and solved with Dinic's
/// algorithm; the returned set is the inclusion-minimal minimizer, i.e. the
/// cells reachable from the sources in the final residual network.
/// Deterministic for fixed input.
CutResult min_cut(const CutProblem& problem);

/// Brute-force reference: evaluates every admissible set over the free cells
/// (at most 20 of them), tie-breaking by cardinality then lexicographic
/// membership. Uses the same integer capacities as min_cut.
CutResult enumerate_oracle(const CutProblem& problem);

}  // namespace bvlab
