#include "bvlab/grid_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bvlab {

namespace {

double weight_at(const WeightSpec& spec, double x, double y, int dim) {
  if (spec.kind == WeightKind::Uniform) return 1.0;
  double r = dim == 1 ? std::fabs(x) : std::hypot(x, y);
  return std::pow(r, spec.power_a);
}

bool box_touches_origin(double lo0, double hi0, double lo1, double hi1, int dim) {
  bool x = lo0 <= 0.0 && hi0 >= 0.0;
  if (dim == 1) return x;
  return x && lo1 <= 0.0 && hi1 >= 0.0;
}

// Recursive quadrature for the singular weight near the origin: split the box
// 4-fold per axis, midpoint on children away from the origin, recurse into the
// child whose closure still contains it.
double integrate_power(double lo0, double hi0, double lo1, double hi1, double a, int dim,
                       int depth) {
  double area = dim == 1 ? (hi0 - lo0) : (hi0 - lo0) * (hi1 - lo1);
  double cx = 0.5 * (lo0 + hi0), cy = 0.5 * (lo1 + hi1);
  if (depth == 0 || !box_touches_origin(lo0, hi0, lo1, hi1, dim)) {
    WeightSpec s = WeightSpec::power_law(a);
    return area * weight_at(s, cx, cy, dim);
  }
  double total = 0.0;
  int ny = dim == 1 ? 1 : 4;
  double dx = (hi0 - lo0) / 4.0;
  double dy = dim == 1 ? 0.0 : (hi1 - lo1) / 4.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < 4; ++i) {
      double l0 = lo0 + i * dx, h0 = lo0 + (i + 1) * dx;
      double l1 = dim == 1 ? 0.0 : lo1 + j * dy;
      double h1 = dim == 1 ? 0.0 : lo1 + (j + 1) * dy;
      total += integrate_power(l0, h0, l1, h1, a, dim, depth - 1);
    }
  }
  return total;
}

}  // namespace

double GridSpace::dist(int c, const Point& p) const {
  if (dim_ == 1) return std::fabs(axis_center(c) - p.x);
  double dx = axis_center(cell_x(c)) - p.x;
  double dy = axis_center(cell_y(c)) - p.y;
  return std::hypot(dx, dy);
}

bool GridSpace::ball_inside(const Point& x, double r) const {
  double margin = extent_ - 2.0 * h_;
  if (std::fabs(x.x) + r > margin) return false;
  if (dim_ == 2 && std::fabs(x.y) + r > margin) return false;
  return true;
}

void GridSpace::require_ball_inside(const Point& x, double r) const {
  if (!ball_inside(x, r)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "ball(center=(%g,%g), r=%g) must stay 2h inside [-%g,%g]^%d",
                  x.x, x.y, r, extent_, extent_, dim_);
    throw BoundaryContact(buf);
  }
}

void GridSpace::finalize() {
  total_mu_ = 0.0;
  for (double m : mu_) total_mu_ += m;
  pi_min_ = 0.0;
  pi_max_ = 0.0;
  bool first = true;
  for (int c = 0; c < cell_count(); ++c) {
    for (int axis = 0; axis < dim_; ++axis) {
      if (!has_edge(c, axis)) continue;
      double w = edge_weight(c, axis);
      if (first || w < pi_min_) pi_min_ = w;
      if (first || w > pi_max_) pi_max_ = w;
      first = false;
    }
  }
  // Power-of-two scale: per-edge relative rounding <= 1/(4e12) and headroom
  // against int64 overflow for any realistic cut value.
  double target = 4e12 / pi_min_;
  int k = static_cast<int>(std::ceil(std::log2(target)));
  scale_ = std::ldexp(1.0, k);
  if (pi_max_ * scale_ >= std::ldexp(1.0, 61)) {
    throw Unsupported("edge weight range too wide for exact integer scaling");
  }
}

std::shared_ptr<const GridSpace> build_grid(int dim, double extent, int resolution,
                                            WeightSpec spec) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dim must be 1 or 2");
  if (!(extent > 0.0)) throw InvalidArgument("extent must be positive");
  if (resolution < 4 || resolution % 2 != 0) {
    throw InvalidArgument("resolution must be even and >= 4");
  }
  if (spec.kind == WeightKind::PowerLaw &&
      !(spec.power_a > -dim && spec.power_a < 1.0)) {
    throw InvalidArgument("power-law exponent outside (-dim, 1): measure not locally finite");
  }

  auto g = std::make_shared<GridSpace>();
  GridSpace& s = const_cast<GridSpace&>(*g);
  s.dim_ = dim;
  s.extent_ = extent;
  s.res_ = resolution;
  s.h_ = 2.0 * extent / resolution;
  s.h_pow_ = dim == 1 ? 1.0 : s.h_;
  s.spec_ = spec;
  int n = dim == 1 ? resolution : resolution * resolution;
  s.weights_.resize(n);
  s.mu_.resize(n);

  double cell_vol = dim == 1 ? s.h_ : s.h_ * s.h_;
  for (int c = 0; c < n; ++c) {
    Point p = s.center(c);
    s.weights_[c] = weight_at(spec, p.x, p.y, dim);
    if (spec.kind == WeightKind::Uniform) {
      s.mu_[c] = cell_vol;
      continue;
    }
    double lo0 = p.x - 0.5 * s.h_, hi0 = p.x + 0.5 * s.h_;
    double lo1 = dim == 1 ? 0.0 : p.y - 0.5 * s.h_;
    double hi1 = dim == 1 ? 0.0 : p.y + 0.5 * s.h_;
    if (box_touches_origin(lo0, hi0, lo1, hi1, dim)) {
      s.mu_[c] = integrate_power(lo0, hi0, lo1, hi1, spec.power_a, dim, 12);
    } else {
      s.mu_[c] = cell_vol * s.weights_[c];
    }
  }
  s.finalize();
  return g;
}

std::shared_ptr<const GridSpace> GridSpace::with_scaled_weights(double c) const {
  if (!(c > 0.0)) throw InvalidArgument("weight scale must be positive");
  auto g = std::make_shared<GridSpace>(*this);
  GridSpace& s = const_cast<GridSpace&>(*g);
  for (double& w : s.weights_) w *= c;
  for (double& m : s.mu_) m *= c;
  s.finalize();
  return g;
}

long long CellSet::cardinality() const {
  long long k = 0;
  for (std::uint8_t b : in_) k += b;
  return k;
}

double CellSet::measure() const {
  double m = 0.0;
  for (int c = 0; c < size(); ++c) {
    if (in_[c]) m += space_->cell_measure(c);
  }
  return m;
}

void CellSet::check_same(const CellSet& o) const {
  if (space_.get() != o.space_.get()) {
    throw InvalidArgument("cell sets belong to different spaces");
  }
}

CellSet CellSet::set_union(const CellSet& o) const {
  check_same(o);
  CellSet r(space_);
  for (int c = 0; c < size(); ++c) r.in_[c] = in_[c] | o.in_[c];
  return r;
}

CellSet CellSet::set_intersect(const CellSet& o) const {
  check_same(o);
  CellSet r(space_);
  for (int c = 0; c < size(); ++c) r.in_[c] = in_[c] & o.in_[c];
  return r;
}

CellSet CellSet::set_minus(const CellSet& o) const {
  check_same(o);
  CellSet r(space_);
  for (int c = 0; c < size(); ++c) r.in_[c] = in_[c] & static_cast<std::uint8_t>(!o.in_[c]);
  return r;
}

CellSet CellSet::complement() const {
  CellSet r(space_);
  for (int c = 0; c < size(); ++c) r.in_[c] = !in_[c];
  return r;
}

bool CellSet::is_subset_of(const CellSet& o) const {
  check_same(o);
  for (int c = 0; c < size(); ++c) {
    if (in_[c] && !o.in_[c]) return false;
  }
  return true;
}

bool CellSet::operator==(const CellSet& o) const {
  check_same(o);
  return in_ == o.in_;
}

CellSet CellSet::dilate() const {
  const GridSpace& g = *space_;
  CellSet r = *this;
  int n = g.resolution();
  for (int c = 0; c < size(); ++c) {
    if (!in_[c]) continue;
    int ix = g.cell_x(c), iy = g.cell_y(c);
    if (ix > 0) r.in_[c - 1] = 1;
    if (ix + 1 < n) r.in_[c + 1] = 1;
    if (g.dim() == 2) {
      if (iy > 0) r.in_[c - n] = 1;
      if (iy + 1 < n) r.in_[c + n] = 1;
    }
  }
  return r;
}

std::vector<int> CellSet::cells() const {
  std::vector<int> v;
  for (int c = 0; c < size(); ++c) {
    if (in_[c]) v.push_back(c);
  }
  return v;
}

CellSet ball(const std::shared_ptr<const GridSpace>& space, const Point& x, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  const GridSpace& g = *space;
  CellSet r(space);
  int n = g.resolution();
  auto axis_range = [&](double center) {
    int lo = static_cast<int>(std::floor((center - radius + g.extent()) / g.spacing() - 0.5));
    int hi = static_cast<int>(std::ceil((center + radius + g.extent()) / g.spacing() - 0.5));
    return std::pair<int, int>(std::max(0, lo), std::min(n - 1, hi));
  };
  auto [x0, x1] = axis_range(x.x);
  if (g.dim() == 1) {
    for (int i = x0; i <= x1; ++i) {
      if (g.dist(i, x) < radius) r.add(i);
    }
    return r;
  }
  auto [y0, y1] = axis_range(x.y);
  for (int j = y0; j <= y1; ++j) {
    for (int i = x0; i <= x1; ++i) {
      int c = g.index(i, j);
      if (g.dist(c, x) < radius) r.add(c);
    }
  }
  return r;
}

CellSet annulus(const std::shared_ptr<const GridSpace>& space, const Point& x, double r_in,
                double r_out) {
  if (!(r_in >= 0.0) || !(r_in < r_out)) {
    throw InvalidArgument("annulus needs 0 <= r_in < r_out");
  }
  CellSet outer = ball(space, x, r_out);
  const GridSpace& g = *space;
  CellSet r(space);
  for (int c : outer.cells()) {
    if (g.dist(c, x) > r_in) r.add(c);
  }
  return r;
}

SpaceConstants estimate_constants(const std::shared_ptr<const GridSpace>& space, int samples) {
  const GridSpace& g = *space;
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (g.resolution() < 16) throw Unsupported("space too coarse to sample constants");

  SpaceConstants k;
  k.dilation = 1.0;

  // Doubling: max mu(B(x,2r))/mu(B(x,r)) over sampled admissible (x, r).
  double h = g.spacing(), L = g.extent();
  std::vector<double> radii;
  for (double r = 4.0 * h; r <= L / 4.0 + 1e-12; r *= 2.0) radii.push_back(r);
  int taken = 0;
  double best = 0.0;
  int stride = std::max(1, g.resolution() / 8);
  for (int iy = stride / 2; iy < (g.dim() == 2 ? g.resolution() : 1) && taken < samples;
       iy += stride) {
    for (int ix = stride / 2; ix < g.resolution() && taken < samples; ix += stride) {
      int c = g.dim() == 1 ? ix : g.index(ix, iy);
      Point x = g.center(c);
      for (double r : radii) {
        if (!g.ball_inside(x, 2.0 * r)) continue;
        double num = ball(space, x, 2.0 * r).measure();
        double den = ball(space, x, r).measure();
        if (den > 0.0) best = std::max(best, num / den);
        ++taken;
        if (taken >= samples) break;
      }
    }
  }
  k.doubling = best;

  if (g.weight_spec().kind == WeightKind::Uniform) {
    k.dimension_exponent = g.dim();
  } else {
    // slope of log mu(B(0,r)) against log r over dyadic radii
    Point o{0.0, 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double r = 8.0 * h; r <= L / 2.0 + 1e-12; r *= 2.0) {
      double mu = ball(space, o, r).measure();
      if (mu <= 0.0) continue;
      double lx = std::log(r), ly = std::log(mu);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    k.dimension_exponent = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  }
  return k;
}

}  // namespace bvlab
