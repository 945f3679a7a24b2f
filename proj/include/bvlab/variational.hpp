#pragma once

#include <memory>
#include <vector>

#include "bvlab/bv_core.hpp"
#include "bvlab/flow_solver.hpp"

namespace bvlab {

/// Obstacle problem data: minimize total variation over functions that are
/// >= the obstacle inside the domain window and equal the boundary data
/// outside it. The characteristic case stores the obstacle as a set.
struct ObstacleSpec {
  CellSet domain;              // Omega
  CellSet obstacle_set;        // used when characteristic == true
  GridFunction obstacle_fn;    // used otherwise
  GridFunction boundary_data;  // f, defined on all cells
  std::vector<double> levels;  // thresholds for the general case
  bool characteristic = true;
};

struct SetSolution {
  CellSet set;
  double perimeter_value = 0.0;
};

struct CapacityResult {
  double value = 0.0;
  CellSet extremal_set;
  CellSet inner;   // A
  CellSet window;  // Omega
};

/// Minimal perimeter-minimizing superset of A vanishing outside Omega,
/// via min_cut(sources=A, sinks=complement(Omega)).
SetSolution solve_obstacle_set(const std::shared_ptr<const GridSpace>& space, const CellSet& a,
                               const CellSet& omega);

/// Layer-cake solution of the general quantized obstacle problem: per level
/// (descending) a set problem whose solution is forced to contain the one
/// from the level above.
GridFunction solve_obstacle_general(const std::shared_ptr<const GridSpace>& space,
                                    const ObstacleSpec& spec);

/// Variational 1-capacity rcap1(A, Omega) as a network min-cut; in this model
/// the extremal set's perimeter equals the value exactly.
CapacityResult variational_capacity(const std::shared_ptr<const GridSpace>& space,
                                    const CellSet& a, const CellSet& omega);

struct BallComparison {
  double cap_t = 0.0;  // window B(x, t*r)
  double cap_s = 0.0;  // window B(x, s*r)
  double ratio = 0.0;  // cap_s / cap_t
};

/// Capacity of A with respect to the nested windows B(x,t r) and B(x,s r),
/// 1 < s < t; window monotonicity cap_t <= cap_s holds exactly.
BallComparison capacity_ball_comparison(const std::shared_ptr<const GridSpace>& space,
                                        const CellSet& a, const Point& x, double r, double s,
                                        double t);

struct SuperminimizerReport {
  int trials = 0;
  int violations = 0;
  double worst_gap = 0.0;  // max of TV(u; supp) - TV(u+phi; supp) over trials
};

/// Samples seeded nonnegative perturbations compactly supported in Omega and
/// reports violations of the superminimizer inequality beyond 1e-9.
SuperminimizerReport verify_superminimizer(const std::shared_ptr<const GridSpace>& space,
                                           const GridFunction& u, const CellSet& omega,
                                           int trials, std::uint64_t rng_seed);

struct DeGiorgiResult {
  double lhs = 0.0;  // TV((u-k)+; B(x,s1))
  double rhs = 0.0;  // 2/(s2-s1) * integral of (u-k)+ over B(x,s2)
};

DeGiorgiResult degiorgi_check(const std::shared_ptr<const GridSpace>& space,
                              const GridFunction& u, const Point& x, double k, double s1,
                              double s2);

struct HarnackResult {
  double sup_val = 0.0;
  double integral_term = 0.0;  // (R/(R-r))^Q * mean of (u-k)+ over B(x,R)
  double fitted_c = 0.0;
};

HarnackResult weak_harnack_check(const std::shared_ptr<const GridSpace>& space,
                                 const GridFunction& u, const Point& x, double r, double R,
                                 double k, double q_exponent);

struct SemicontinuityReport {
  // cells whose lower (resp. upper) approximate-limit estimate degrades when
  // the sampling radius shrinks: the discrete surrogate of a semicontinuity
  // failure
  std::vector<int> lower_flags;
  std::vector<int> upper_flags;
  int cells_probed = 0;
};

SemicontinuityReport semicontinuity_probe(const std::shared_ptr<const GridSpace>& space,
                                          const GridFunction& u, const CellSet& omega,
                                          const std::vector<double>& r_schedule);

}  // namespace bvlab
