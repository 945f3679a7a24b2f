#pragma once

#include <memory>
#include <vector>

#include "bvlab/variational.hpp"

namespace bvlab {

/// Thinness quotients theta_i = (M^-i R) * rcap1(A cap B(x, M^-i R),
/// B(x, 2 M^-i R)) / mu(B(x, M^-i R)) along a dyadic-type radius schedule.
/// Entries beyond resolution_floor come from radii under 8h and are not
/// trustworthy.
struct ThinnessProfile {
  Point center;
  double base_radius = 0.0;  // R
  double ratio_base = 0.0;   // M
  int depth = 0;
  std::vector<double> ratios;
  int resolution_floor = 0;  // largest trusted index
};

enum class ThinnessClass { Thin, Thick, Inconclusive };

struct ThinnessVerdict {
  ThinnessClass classification = ThinnessClass::Inconclusive;
  double slope = 0.0;  // fitted slope of log theta_i against i (trusted part)
  double tau_thin = 0.0;
  double tau_thick = 0.0;
};

ThinnessProfile thinness_profile(const std::shared_ptr<const GridSpace>& space, const CellSet& a,
                                 const Point& x, double m, double r, int depth);

ThinnessVerdict classify(const ThinnessProfile& profile, double tau_thin = 1e-2,
                         double tau_thick = 1e-2);

struct BoxingResult {
  double cap_side = 0.0;    // rcap1((I_E u d*E) cap B(x,r), B(x,2r))
  double perim_side = 0.0;  // P(E, B(x,2r))
};

/// Capacity-by-perimeter comparison under the smallness hypothesis
/// mu(E cap B(x,2r))/mu(B(x,2r)) <= 1/8.
BoxingResult boxing_check(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                          const Point& x, double r);

struct DensityPointResult {
  double witness_s = 0.0;
  double lower_bound = 0.0;  // mu(B(x,witness_s)) / (16 * witness_s)
  double cap = 0.0;          // rcap1(A, B(x,2r))
};

/// At a measure-theoretic interior point of A, the capacity admits the lower
/// bound mu(B(x,s))/(C s) at some dyadic witness scale.
DensityPointResult density_point_capacity_check(const std::shared_ptr<const GridSpace>& space,
                                                const CellSet& a, const Point& x, double r);

struct PointThicknessReport {
  std::vector<double> radii;           // dyadic radii probed
  std::vector<double> r_over_mu;       // r / mu(B(0,r))
  bool r_over_mu_decreasing = false;   // strict decrease over trusted radii
  ThinnessProfile origin_profile;      // profile of the origin-adjacent cells
  double min_trusted_ratio = 0.0;
};

/// Probes Example-4.6-style point thickness on a power-law space with
/// a in (-2,-1): r/mu(B(0,r)) must decay, while the origin cells keep a
/// thinness quotient bounded below.
PointThicknessReport point_thickness_experiment(const std::shared_ptr<const GridSpace>& space,
                                                int depth);

/// rcap1(A cap B(x,r), B(x,R0)) for each radius in the decreasing schedule.
std::vector<double> capacity_shrink_profile(const std::shared_ptr<const GridSpace>& space,
                                            const CellSet& a, const Point& x, double r0,
                                            const std::vector<double>& radii);

}  // namespace bvlab
