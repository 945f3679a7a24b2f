#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bvlab/errors.hpp"

namespace bvlab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class WeightKind { Uniform, PowerLaw };

struct WeightSpec {
  WeightKind kind = WeightKind::Uniform;
  double power_a = 0.0;  // exponent for |x|^a, only read for PowerLaw

  static WeightSpec uniform() { return {WeightKind::Uniform, 0.0}; }
  static WeightSpec power_law(double a) { return {WeightKind::PowerLaw, a}; }
};

/// A weighted regular grid on [-L,L]^dim with 2*dim-neighbor adjacency.
/// Cell measures come from quadrature of the weight density; interior edges
/// carry the codimension-one weight h^(dim-1) * (w_c + w_c')/2. Immutable
/// after construction and safe to share across threads.
class GridSpace {
 public:
  int dim() const { return dim_; }
  double extent() const { return extent_; }
  int resolution() const { return res_; }
  double spacing() const { return h_; }
  int cell_count() const { return static_cast<int>(weights_.size()); }
  const WeightSpec& weight_spec() const { return spec_; }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& cell_measures() const { return mu_; }
  double cell_measure(int c) const { return mu_[c]; }
  double total_measure() const { return total_mu_; }

  // index <-> lattice coordinates
  int index(int ix, int iy = 0) const { return iy * res_ + ix; }
  int cell_x(int c) const { return c % res_; }
  int cell_y(int c) const { return c / res_; }
  double axis_center(int i) const { return -extent_ + (i + 0.5) * h_; }
  Point center(int c) const {
    return dim_ == 1 ? Point{axis_center(c), 0.0}
                     : Point{axis_center(cell_x(c)), axis_center(cell_y(c))};
  }

  double dist(int c, const Point& p) const;

  /// Weight of the interior edge from cell c along +axis (0=x, 1=y).
  double edge_weight(int c, int axis) const {
    int nb = axis == 0 ? c + 1 : c + res_;
    return h_pow_ * 0.5 * (weights_[c] + weights_[nb]);
  }
  bool has_edge(int c, int axis) const {
    if (axis == 0) return cell_x(c) + 1 < res_;
    return dim_ == 2 && cell_y(c) + 1 < res_;
  }

  double edge_weight_min() const { return pi_min_; }
  double edge_weight_max() const { return pi_max_; }

  /// Integer scaling used by the exact cut solver; a power of two chosen so
  /// per-edge rounding error stays below 1e-12 relative without overflow.
  double capacity_scale() const { return scale_; }
  std::int64_t scaled_edge_weight(int c, int axis) const {
    return static_cast<std::int64_t>(edge_weight(c, axis) * scale_ + 0.5);
  }

  /// True if the cell's box touches a face of [-L,L]^dim.
  bool touches_boundary(int c) const {
    if (cell_x(c) == 0 || cell_x(c) == res_ - 1) return true;
    return dim_ == 2 && (cell_y(c) == 0 || cell_y(c) == res_ - 1);
  }

  /// Throws BoundaryContact unless the closed ball B(x,r) stays at least 2h
  /// away from every face of the domain.
  void require_ball_inside(const Point& x, double r) const;
  bool ball_inside(const Point& x, double r) const;

  /// New space with all weights multiplied by c (measures follow exactly).
  std::shared_ptr<const GridSpace> with_scaled_weights(double c) const;

  friend std::shared_ptr<const GridSpace> build_grid(int, double, int, WeightSpec);

 private:
  int dim_ = 2;
  double extent_ = 1.0;
  int res_ = 0;
  double h_ = 0.0;
  double h_pow_ = 1.0;  // h^(dim-1)
  WeightSpec spec_;
  std::vector<double> weights_;
  std::vector<double> mu_;
  double total_mu_ = 0.0;
  double pi_min_ = 0.0, pi_max_ = 0.0;
  double scale_ = 1.0;

  void finalize();
};

/// Builds the grid: midpoint quadrature for cell measures, except cells whose
/// closure touches the origin under a power-law weight, which use recursive
/// 4-per-axis subdivision to depth 12 (the weight is singular there).
std::shared_ptr<const GridSpace> build_grid(int dim, double extent, int resolution,
                                            WeightSpec spec);

/// A set of cells bound to its space. Set algebra only combines sets from the
/// same space.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::shared_ptr<const GridSpace> space, bool full = false)
      : space_(std::move(space)),
        in_(space_ ? space_->cell_count() : 0, full ? 1 : 0) {}

  const std::shared_ptr<const GridSpace>& space() const { return space_; }
  bool contains(int c) const { return in_[c] != 0; }
  void add(int c) { in_[c] = 1; }
  void remove(int c) { in_[c] = 0; }
  int size() const { return static_cast<int>(in_.size()); }

  long long cardinality() const;
  bool empty() const { return cardinality() == 0; }
  double measure() const;

  CellSet set_union(const CellSet& o) const;
  CellSet set_intersect(const CellSet& o) const;
  CellSet set_minus(const CellSet& o) const;
  CellSet complement() const;
  bool is_subset_of(const CellSet& o) const;
  bool operator==(const CellSet& o) const;

  /// One-cell dilation (2*dim-neighborhood growth).
  CellSet dilate() const;

  std::vector<int> cells() const;

 private:
  void check_same(const CellSet& o) const;
  std::shared_ptr<const GridSpace> space_;
  std::vector<std::uint8_t> in_;
};

/// Open ball: cells whose center is at Euclidean distance < radius from x.
CellSet ball(const std::shared_ptr<const GridSpace>& space, const Point& x, double radius);

/// ball(x, r_out) minus cells with center distance <= r_in (closed inner ball).
CellSet annulus(const std::shared_ptr<const GridSpace>& space, const Point& x, double r_in,
                double r_out);

struct SpaceConstants {
  double doubling = 0.0;            // empirical C_d
  double dimension_exponent = 0.0;  // Q
  double isoperimetric = 0.0;       // empirical checker constant
  double harnack = 0.0;             // fitted C1 slot, 0 until a sweep fills it
  double dilation = 1.0;            // lambda, fixed to 1 in the graph model
};

/// Empirical constants: doubling from sampled ball ratios, Q = dim for
/// uniform weights or a log-log fit of mu(B(0,r)) for power laws.
SpaceConstants estimate_constants(const std::shared_ptr<const GridSpace>& space, int samples);

}  // namespace bvlab
