#pragma once

#include <memory>
#include <vector>

#include "bvlab/fine_topology.hpp"
#include "bvlab/report.hpp"
#include "bvlab/shapes.hpp"

namespace bvlab {

/// Cells at least margin_cells away from the outer grid boundary.
CellSet interior_cells(const std::shared_ptr<const GridSpace>& space, int margin_cells);

/// Dyadic ball/annulus scaffolding around x: B_i = B(x, 2^-i R),
/// H_i = B_i minus the closed ball (9/10) B_{i+1}, parity unions
/// D_p = union of H_j over j = p, p+2, ..., and the separation stripes
/// F_i = (4/5) B_i minus (5/4) B_{i+1}.
struct AnnuliDecomposition {
  Point center;
  double radius = 0.0;  // R
  int depth = 0;
  std::vector<double> ball_radii;
  std::vector<CellSet> balls;    // B_0 .. B_depth
  std::vector<CellSet> annuli;   // H_0 .. H_depth
  std::vector<CellSet> stripes;  // F_0 .. F_depth (F_0 unused by checks)
  CellSet d0, d1;
  /// radius below which the computed annuli no longer cover B(x, R)
  double core_radius = 0.0;
};

AnnuliDecomposition annuli_decomposition(const std::shared_ptr<const GridSpace>& space,
                                         const Point& x, double r, int depth);

/// Weak-Cartan certificate: the two superminimizer sets E0, E1 with all
/// verified inequalities (separation, coverage, vanishing at x, perimeter
/// thinness, superlevel-set thinness, truncation consistency).
struct CartanCertificate {
  Point center;
  double radius = 0.0;
  int depth = 0;
  AnnuliDecomposition decomposition;
  CellSet e0, e1;
  std::vector<CheckRow> checks;

  bool all_trusted_pass() const;
  const CheckRow* find(const std::string& name) const;
};

/// Runs the Theorem-5.2 construction for a set A thin at x: obstacles are the
/// parity pieces of the one-cell dilation of A, solved at the top scale in
/// the windows (3/2)B_0 and (3/2)B_1; per-scale optimality is checked rather
/// than re-derived. Throws PreconditionError on a non-thin verdict unless
/// override_thin is set (the contrapositive experiments rely on that).
CartanCertificate weak_cartan_construct(const std::shared_ptr<const GridSpace>& space,
                                        const CellSet& a, const Point& x, double r, int depth,
                                        const ThinnessVerdict& verdict,
                                        bool override_thin = false);

struct SmallnessResult {
  double density_max = 0.0;  // max solution density over the reporting stripe
  double bound = 0.0;        // 32 * R * rcap1(A, 2B) / mu(B)
  double capacity = 0.0;     // rcap1(A, 2B)
  CellSet solution;
};

/// Lemma-5.1 check: with A empty in the annulus (1/4)B..(9/20)B, the solution
/// of the K_{A,0}((3/2)B) problem has small density throughout the stripe
/// (5/16)B..(2/5)B.
SmallnessResult smallness_in_annuli_check(const std::shared_ptr<const GridSpace>& space,
                                          const CellSet& a, const Point& x, double r);

struct StrongCartanResult {
  int levels_requested = 0;
  int levels_built = 0;
  bool partial = false;  // radii search hit the resolution floor early
  std::vector<double> radii;
  std::vector<double> capacities;
  std::vector<double> budgets;
  std::vector<CellSet> nested_sets;  // E_1, E_2, ...
  GridFunction stacked;              // u = sum of indicators
  double value_at_x = 0.0;
  std::vector<double> divergence_witness;  // min of u over A cap B(x, r_k)
  std::vector<CheckRow> checks;
};

/// Proposition-5.6 construction on a power-law space: finds radii whose
/// capacities fit the halving budget 2^-i * rcap1(A cap B(x,R/2), B(x,R)),
/// stacks the extremal sets, and certifies divergence along A with a finite
/// value at x.
StrongCartanResult strong_cartan_construct(const std::shared_ptr<const GridSpace>& space,
                                           const CellSet& a, const Point& x, double r,
                                           int k_max, bool override_thin = false);

struct CounterexampleReport {
  std::shared_ptr<const GridSpace> space;
  CellSet set_a;
  CellSet solution;
  RunReport report;
  int resolved_depth = 0;  // deepest chain rectangle with a nonempty raster
};

/// Full Example-5.9 reproduction: builds the rectangle chain on a uniform
/// grid over [-2,2]^2, solves the K_{A,0}(B(0,2))-obstacle problem, and
/// checks the solution identity E = A, the capacity bounds, the stripe
/// vanishing, and the thick-profile / vanishing-density pair that witnesses
/// the failure of fine upper semicontinuity.
CounterexampleReport counterexample_run(double eps, int resolution, int chain_depth);

}  // namespace bvlab
