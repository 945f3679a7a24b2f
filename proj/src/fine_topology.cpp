#include "bvlab/fine_topology.hpp"

#include <algorithm>
#include <cmath>

#include "bvlab/parallel.hpp"

namespace bvlab {

ThinnessProfile thinness_profile(const std::shared_ptr<const GridSpace>& space, const CellSet& a,
                                 const Point& x, double m, double r, int depth) {
  if (!(m > 1.0)) throw InvalidArgument("thinness profile needs M > 1");
  if (depth < 1) throw InvalidArgument("thinness profile needs depth >= 1");
  space->require_ball_inside(x, 2.0 * r);

  ThinnessProfile p;
  p.center = x;
  p.base_radius = r;
  p.ratio_base = m;
  p.depth = depth;
  p.resolution_floor = -1;
  double h = space->spacing();
  for (int i = 0; i <= depth; ++i) {
    if (r * std::pow(m, -i) >= 8.0 * h) p.resolution_floor = i;
  }
  p.ratios.assign(depth + 1, 0.0);
  // scales are independent solves over immutable inputs
  parallel_for(depth + 1, [&](int i) {
    double ri = r * std::pow(m, -i);
    CellSet bi = ball(space, x, ri);
    CellSet window = ball(space, x, 2.0 * ri);
    CellSet ai = a.set_intersect(bi);
    double cap = variational_capacity(space, ai, window).value;
    // window monotonicity (first inequality of the capacity-ball comparison):
    // shrinking the window can only increase the capacity
    double cap_smaller = variational_capacity(space, ai, ball(space, x, 1.5 * ri)).value;
    if (cap > cap_smaller * (1.0 + 1e-12) + 1e-300) {
      throw std::logic_error("capacity window monotonicity violated");
    }
    double mu = bi.measure();
    p.ratios[i] = mu > 0.0 ? ri * cap / mu : 0.0;
  });
  return p;
}

ThinnessVerdict classify(const ThinnessProfile& profile, double tau_thin, double tau_thick) {
  if (!(tau_thin > 0.0 && tau_thin <= tau_thick)) {
    throw InvalidArgument("need 0 < tau_thin <= tau_thick");
  }
  ThinnessVerdict v;
  v.tau_thin = tau_thin;
  v.tau_thick = tau_thick;
  int last = std::min<int>(profile.resolution_floor, static_cast<int>(profile.ratios.size()) - 1);
  if (last < 0) return v;

  // slope of log theta against index over trusted, positive entries
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  bool any_zero = false;
  for (int i = 0; i <= last; ++i) {
    if (profile.ratios[i] <= 0.0) {
      any_zero = true;
      continue;
    }
    double lx = i, ly = std::log(profile.ratios[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  v.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;

  double last_ratio = profile.ratios[last];
  bool all_big = !any_zero;
  for (int i = 0; i <= last; ++i) {
    if (profile.ratios[i] < tau_thick) all_big = false;
  }
  if (last_ratio < tau_thin && (v.slope < 0.0 || last_ratio == 0.0)) {
    v.classification = ThinnessClass::Thin;
  } else if (all_big) {
    v.classification = ThinnessClass::Thick;
  }
  return v;
}

BoxingResult boxing_check(const std::shared_ptr<const GridSpace>& space, const CellSet& e,
                          const Point& x, double r) {
  const GridSpace& g = *space;
  if (r < 16.0 * g.spacing()) throw ResolutionInsufficient("boxing_check needs r >= 16h");
  g.require_ball_inside(x, 2.0 * r);
  CellSet b2 = ball(space, x, 2.0 * r);
  double density = b2.set_intersect(e).measure() / b2.measure();
  if (density > 0.125) {
    throw PreconditionError("boxing_check smallness hypothesis violated: density " +
                            std::to_string(density) + " > 1/8");
  }
  CellSet b1 = ball(space, x, r);
  MtSplit split = mt_split(space, e, b1, 4.0 * g.spacing(), 0.01);
  CellSet core = split.interior.set_union(split.boundary);
  BoxingResult out;
  out.cap_side = variational_capacity(space, core, b2).value;
  out.perim_side = perimeter(space, e, b2);
  return out;
}

DensityPointResult density_point_capacity_check(const std::shared_ptr<const GridSpace>& space,
                                                const CellSet& a, const Point& x, double r) {
  const GridSpace& g = *space;
  g.require_ball_inside(x, 2.0 * r);
  CellSet probe(space);
  // x is expected to be (near) a cell center; classify that cell
  int best = 0;
  double best_d = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    double d = g.dist(c, x);
    if (c == 0 || d < best_d) {
      best = c;
      best_d = d;
    }
  }
  probe.add(best);
  MtSplit split = mt_split(space, a, probe, 4.0 * g.spacing(), 0.01);
  if (!split.interior.contains(best)) {
    throw PreconditionError("x is not a measure-theoretic interior point of A");
  }
  DensityPointResult out;
  double best_score = -1.0;
  for (double s = r; s >= 8.0 * g.spacing() * (1.0 - 1e-12); s *= 0.5) {
    double score = ball(space, x, s).measure() / s;
    if (score > best_score) {
      best_score = score;
      out.witness_s = s;
    }
  }
  out.lower_bound = ball(space, x, out.witness_s).measure() / (16.0 * out.witness_s);
  out.cap = variational_capacity(space, a.set_intersect(ball(space, x, 2.0 * r)),
                                 ball(space, x, 2.0 * r))
                .value;
  return out;
}

PointThicknessReport point_thickness_experiment(const std::shared_ptr<const GridSpace>& space,
                                                int depth) {
  const GridSpace& g = *space;
  if (g.weight_spec().kind != WeightKind::PowerLaw ||
      !(g.weight_spec().power_a > -2.0 && g.weight_spec().power_a < -1.0) || g.dim() != 2) {
    throw InvalidArgument("point thickness experiment needs a 2d power law with a in (-2,-1)");
  }
  if (depth < 1) throw InvalidArgument("depth must be >= 1");

  PointThicknessReport rep;
  Point origin{0.0, 0.0};
  double h = g.spacing();
  double r0 = g.extent() / 2.0;
  while (!g.ball_inside(origin, 2.0 * r0)) r0 *= 0.5;
  for (int i = 0; i <= depth; ++i) {
    double r = r0 * std::pow(2.0, -i);
    if (r < 8.0 * h) break;
    rep.radii.push_back(r);
    rep.r_over_mu.push_back(r / ball(space, origin, r).measure());
  }
  rep.r_over_mu_decreasing = rep.r_over_mu.size() >= 2;
  for (std::size_t i = 0; i + 1 < rep.r_over_mu.size(); ++i) {
    if (!(rep.r_over_mu[i] > rep.r_over_mu[i + 1])) rep.r_over_mu_decreasing = false;
  }

  // the four origin-adjacent cells play the role of the point {x}
  CellSet point(space);
  int half = g.resolution() / 2;
  point.add(g.index(half - 1, half - 1));
  point.add(g.index(half, half - 1));
  point.add(g.index(half - 1, half));
  point.add(g.index(half, half));
  rep.origin_profile = thinness_profile(space, point, origin, 2.0, r0, depth);
  rep.min_trusted_ratio = -1.0;
  for (int i = 0; i <= rep.origin_profile.resolution_floor &&
                  i < static_cast<int>(rep.origin_profile.ratios.size());
       ++i) {
    double t = rep.origin_profile.ratios[i];
    if (rep.min_trusted_ratio < 0.0 || t < rep.min_trusted_ratio) rep.min_trusted_ratio = t;
  }
  return rep;
}

std::vector<double> capacity_shrink_profile(const std::shared_ptr<const GridSpace>& space,
                                            const CellSet& a, const Point& x, double r0,
                                            const std::vector<double>& radii) {
  space->require_ball_inside(x, r0);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] > radii[i + 1])) throw InvalidArgument("radii must decrease");
  }
  if (!radii.empty() && radii.back() < 8.0 * space->spacing()) {
    throw InvalidArgument("shrink profile radii must stay >= 8h");
  }
  CellSet window = ball(space, x, r0);
  std::vector<double> out(radii.size(), 0.0);
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    CellSet ar = a.set_intersect(ball(space, x, radii[i])).set_intersect(window);
    out[i] = variational_capacity(space, ar, window).value;
  });
  return out;
}

}  // namespace bvlab
