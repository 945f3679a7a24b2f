#pragma once

#include <memory>
#include <vector>

#include "bvlab/grid_space.hpp"

namespace bvlab {

/// A real value per cell; plays the role of a BV function, with edge
/// differences |u_c - u_c'| standing in for the upper gradient.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::shared_ptr<const GridSpace> space, double fill = 0.0)
      : space_(std::move(space)), values_(space_ ? space_->cell_count() : 0, fill) {}

  const std::shared_ptr<const GridSpace>& space() const { return space_; }
  double operator[](int c) const { return values_[c]; }
  double& operator[](int c) { return values_[c]; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Sorted distinct values.
  std::vector<double> levels() const;
  CellSet superlevel(double t) const;  // {u > t}
  CellSet sublevel(double t) const;    // {u < t}

 private:
  std::shared_ptr<const GridSpace> space_;
  std::vector<double> values_;
};

GridFunction indicator(const CellSet& set);

/// Weighted sum of |u_c - u_c'| over interior edges meeting the region;
/// edges with exactly one endpoint inside count at half weight (keeps TV
/// additive over edge-disjoint regions and monotone in the region).
double total_variation(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                       const CellSet& region);
double total_variation(const std::shared_ptr<const GridSpace>& space, const GridFunction& u);

double perimeter(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                 const CellSet& region);
double perimeter(const std::shared_ptr<const GridSpace>& space, const CellSet& e);

struct CoareaResult {
  double lhs = 0.0;  // total variation
  double rhs = 0.0;  // sum over levels of (t_{k+1}-t_k) * P({u > t_k})
};

/// Both sides of the coarea identity; they agree to machine precision because
/// |a-b| decomposes exactly over level crossings on each edge.
CoareaResult coarea_check(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                          const CellSet& region);

struct ApproxLimits {
  double lower = 0.0;  // u^ estimate
  double upper = 0.0;  // u~ estimate
  std::vector<double> radii_used;
  std::vector<double> upper_densities;  // density of {u > upper} per radius
  std::vector<double> lower_densities;  // density of {u < lower} per radius
};

/// Density-threshold surrogates for the lower/upper approximate limits,
/// evaluated at radius r_min; the dyadic sweep from r_max down is recorded
/// for diagnostics.
ApproxLimits approx_limits(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                           const Point& x, double r_min, double r_max, double density_tol);

struct MtSplit {
  CellSet interior;
  CellSet boundary;
  CellSet exterior;
};

/// Classifies each queried cell by the density of E in its r_min-ball:
/// interior when the complement density is <= tol, exterior when the set
/// density is <= tol, boundary otherwise.
MtSplit mt_split(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                 const CellSet& x_set, double r_min, double density_tol);

/// min{mu(B cap E), mu(B \ E)} / (r * P(E, B(x,2r))); +inf when the
/// denominator vanishes while the numerator does not.
double isoperimetric_check(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                           const Point& x, double r);

/// Empirical isoperimetric constant over the canonical family (half-planes,
/// balls, single cells) at admissible sample points; fills the reporting slot
/// in SpaceConstants.
double fit_isoperimetric_constant(const std::shared_ptr<const GridSpace>& space);

}  // namespace bvlab
