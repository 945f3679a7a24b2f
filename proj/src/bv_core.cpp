#include "bvlab/bv_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bvlab {

namespace {

void check_space(const std::shared_ptr<const GridSpace>& space, const GridFunction& u) {
  if (u.space().get() != space.get()) throw InvalidArgument("grid function from another space");
  for (double v : u.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("grid function has non-finite values");
  }
}

void check_space(const std::shared_ptr<const GridSpace>& space, const CellSet& s) {
  if (s.space().get() != space.get()) throw InvalidArgument("cell set from another space");
}

// Accumulates f(edge weight, |du|) over interior edges weighted by region
// membership: 1 for both endpoints inside, 1/2 for exactly one.
template <typename F>
void for_region_edges(const GridSpace& g, const CellSet& region, F&& f) {
  for (int c = 0; c < g.cell_count(); ++c) {
    for (int axis = 0; axis < g.dim(); ++axis) {
      if (!g.has_edge(c, axis)) continue;
      int nb = axis == 0 ? c + 1 : c + g.resolution();
      int inside = (region.contains(c) ? 1 : 0) + (region.contains(nb) ? 1 : 0);
      if (inside == 0) continue;
      f(c, nb, axis, inside == 2 ? 1.0 : 0.5);
    }
  }
}

}  // namespace

std::vector<double> GridFunction::levels() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

CellSet GridFunction::superlevel(double t) const {
  CellSet s(space_);
  for (int c = 0; c < size(); ++c) {
    if (values_[c] > t) s.add(c);
  }
  return s;
}

CellSet GridFunction::sublevel(double t) const {
  CellSet s(space_);
  for (int c = 0; c < size(); ++c) {
    if (values_[c] < t) s.add(c);
  }
  return s;
}

GridFunction indicator(const CellSet& set) {
  GridFunction u(set.space());
  for (int c = 0; c < u.size(); ++c) u[c] = set.contains(c) ? 1.0 : 0.0;
  return u;
}

double total_variation(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                       const CellSet& region) {
  check_space(space, u);
  check_space(space, region);
  double tv = 0.0;
  for_region_edges(*space, region, [&](int c, int nb, int axis, double w) {
    tv += w * space->edge_weight(c, axis) * std::fabs(u[c] - u[nb]);
  });
  return tv;
}

double total_variation(const std::shared_ptr<const GridSpace>& space, const GridFunction& u) {
  return total_variation(space, u, CellSet(space, true));
}

double perimeter(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                 const CellSet& region) {
  check_space(space, e);
  check_space(space, region);
  double p = 0.0;
  for_region_edges(*space, region, [&](int c, int nb, int axis, double w) {
    if (e.contains(c) != e.contains(nb)) p += w * space->edge_weight(c, axis);
  });
  return p;
}

double perimeter(const std::shared_ptr<const GridSpace>& space, const CellSet& e) {
  return perimeter(space, e, CellSet(space, true));
}

CoareaResult coarea_check(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                          const CellSet& region) {
  CoareaResult r;
  r.lhs = total_variation(space, u, region);
  std::vector<double> ts = u.levels();
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    r.rhs += (ts[k + 1] - ts[k]) * perimeter(space, u.superlevel(ts[k]), region);
  }
  return r;
}

namespace {

// density of {u > t} (or {u < t} when lower) in B(x, r)
double level_density(const GridSpace& g, const GridFunction& u, const Point& x, double r,
                     double t, bool lower) {
  double in = 0.0, tot = 0.0;
  // bounding-box scan
  int n = g.resolution();
  auto range = [&](double center) {
    int lo = static_cast<int>(std::floor((center - r + g.extent()) / g.spacing() - 0.5));
    int hi = static_cast<int>(std::ceil((center + r + g.extent()) / g.spacing() - 0.5));
    return std::pair<int, int>(std::max(0, lo), std::min(n - 1, hi));
  };
  auto [x0, x1] = range(x.x);
  int y0 = 0, y1 = 0;
  if (g.dim() == 2) std::tie(y0, y1) = range(x.y);
  for (int j = y0; j <= y1; ++j) {
    for (int i = x0; i <= x1; ++i) {
      int c = g.dim() == 1 ? i : g.index(i, j);
      if (g.dist(c, x) >= r) continue;
      tot += g.cell_measure(c);
      bool hit = lower ? u[c] < t : u[c] > t;
      if (hit) in += g.cell_measure(c);
    }
  }
  return tot > 0.0 ? in / tot : 0.0;
}

}  // namespace

ApproxLimits approx_limits(const std::shared_ptr<const GridSpace>& space, const GridFunction& u,
                           const Point& x, double r_min, double r_max, double density_tol) {
  check_space(space, u);
  const GridSpace& g = *space;
  if (r_min < 4.0 * g.spacing()) {
    throw ResolutionInsufficient("approx_limits needs r_min >= 4h");
  }
  if (!(r_min < r_max)) throw InvalidArgument("approx_limits needs r_min < r_max");
  if (!(density_tol > 0.0 && density_tol < 0.5)) {
    throw InvalidArgument("density_tol must lie in (0, 1/2)");
  }

  ApproxLimits out;
  std::vector<double> ts = u.levels();
  // upper: smallest level whose superlevel set is tol-negligible at r_min
  out.upper = ts.back();
  for (double t : ts) {
    if (level_density(g, u, x, r_min, t, false) <= density_tol) {
      out.upper = t;
      break;
    }
  }
  // lower: largest level whose sublevel set is tol-negligible at r_min
  out.lower = ts.front();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    if (level_density(g, u, x, r_min, *it, true) <= density_tol) {
      out.lower = *it;
      break;
    }
  }
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r *= 0.5) {
    double rr = std::max(r, r_min);
    out.radii_used.push_back(rr);
    out.upper_densities.push_back(level_density(g, u, x, rr, out.upper, false));
    out.lower_densities.push_back(level_density(g, u, x, rr, out.lower, true));
    if (rr == r_min) break;
  }
  return out;
}

MtSplit mt_split(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                 const CellSet& x_set, double r_min, double density_tol) {
  check_space(space, e);
  check_space(space, x_set);
  const GridSpace& g = *space;
  if (r_min < 4.0 * g.spacing()) throw ResolutionInsufficient("mt_split needs r_min >= 4h");
  if (!(density_tol > 0.0 && density_tol < 0.5)) {
    throw InvalidArgument("density_tol must lie in (0, 1/2)");
  }
  GridFunction chi = indicator(e);
  MtSplit out{CellSet(space), CellSet(space), CellSet(space)};
  for (int c : x_set.cells()) {
    Point x = g.center(c);
    double din = level_density(g, chi, x, r_min, 0.0, false);   // density of E
    double dout = 1.0 - din;                                    // density of complement
    if (dout <= density_tol) {
      out.interior.add(c);
    } else if (din <= density_tol) {
      out.exterior.add(c);
    } else {
      out.boundary.add(c);
    }
  }
  return out;
}

double isoperimetric_check(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                           const Point& x, double r) {
  check_space(space, e);
  const GridSpace& g = *space;
  if (r < 8.0 * g.spacing()) throw ResolutionInsufficient("isoperimetric_check needs r >= 8h");
  g.require_ball_inside(x, 2.0 * r);
  CellSet b = ball(space, x, r);
  double inside = b.set_intersect(e).measure();
  double outside = b.measure() - inside;
  double num = std::min(inside, outside);
  double den = r * perimeter(space, e, ball(space, x, 2.0 * r));
  if (den <= 0.0) {
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return num / den;
}

double fit_isoperimetric_constant(const std::shared_ptr<const GridSpace>& space) {
  const GridSpace& g = *space;
  double h = g.spacing();
  double best = 0.0;
  double r = std::max(16.0 * h, g.extent() / 8.0);
  Point x{0.0, 0.0};
  if (!g.ball_inside(x, 2.0 * r)) r = (g.extent() - 2.0 * h) / 2.0;

  // half-plane through x
  CellSet half(space);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (g.center(c).x < x.x) half.add(c);
  }
  best = std::max(best, isoperimetric_check(space, half, x, r));
  // ball of radius r/2 at x
  best = std::max(best, isoperimetric_check(space, ball(space, x, r / 2.0), x, r));
  // single cell at x
  CellSet one(space);
  int cx = g.dim() == 1 ? g.resolution() / 2 : g.index(g.resolution() / 2, g.resolution() / 2);
  one.add(cx);
  best = std::max(best, isoperimetric_check(space, one, x, r));
  return best;
}

}  // namespace bvlab
