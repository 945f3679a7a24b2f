#include "bvlab/variational.hpp"

#include <algorithm>
#include <cmath>

#include "bvlab/rng.hpp"

namespace bvlab {

namespace {

void require_window(const std::shared_ptr<const GridSpace>& space, const CellSet& omega) {
  for (int c : omega.cells()) {
    if (space->touches_boundary(c)) {
      throw BoundaryContact("domain window touches the outer grid boundary");
    }
  }
}

}  // namespace

SetSolution solve_obstacle_set(const std::shared_ptr<const GridSpace>& space, const CellSet& a,
                               const CellSet& omega) {
  if (!a.is_subset_of(omega)) throw InvalidArgument("obstacle set must lie inside the window");
  require_window(space, omega);
  CutProblem p{space, a, omega.complement()};
  CutResult r = min_cut(p);
  return SetSolution{r.set, r.value};
}

CapacityResult variational_capacity(const std::shared_ptr<const GridSpace>& space,
                                    const CellSet& a, const CellSet& omega) {
  SetSolution s = solve_obstacle_set(space, a, omega);
  return CapacityResult{s.perimeter_value, s.set, a, omega};
}

GridFunction solve_obstacle_general(const std::shared_ptr<const GridSpace>& space,
                                    const ObstacleSpec& spec) {
  require_window(space, spec.domain);
  if (spec.levels.empty()) throw InvalidArgument("obstacle spec needs at least one level");
  for (std::size_t i = 0; i + 1 < spec.levels.size(); ++i) {
    if (!(spec.levels[i] < spec.levels[i + 1])) {
      throw InvalidArgument("levels must be strictly increasing");
    }
  }

  const GridFunction& f = spec.boundary_data;
  if (f.space().get() != space.get()) throw InvalidArgument("boundary data from another space");
  auto value_covered = [&](double v) {
    return std::any_of(spec.levels.begin(), spec.levels.end(),
                       [&](double t) { return t >= v; }) &&
           v >= spec.levels.front() - 1e-15;
  };
  for (int c = 0; c < space->cell_count(); ++c) {
    if (!spec.domain.contains(c) && !value_covered(f[c])) {
      throw InfeasibleError("boundary data not covered by the level quantization");
    }
    if (!spec.characteristic && spec.domain.contains(c) && !value_covered(spec.obstacle_fn[c])) {
      throw InfeasibleError("obstacle not covered by the level quantization");
    }
  }

  double base = spec.levels.front();
  GridFunction u(space, base);
  // boundary cells start from their own data, quantized down to the grid of
  // levels (f is assumed level-valued per the spec's restriction)
  for (int c = 0; c < space->cell_count(); ++c) {
    if (!spec.domain.contains(c)) u[c] = f[c];
  }

  CellSet prev(space);  // solution of the level above; enforces nesting
  bool have_prev = false;
  for (auto it = spec.levels.rbegin(); it != spec.levels.rend(); ++it) {
    double t = *it;
    if (t == base) break;  // the base level carries no layer mass
    CellSet obstacle(space);
    for (int c : spec.domain.cells()) {
      bool above;
      if (spec.characteristic) {
        above = spec.obstacle_set.contains(c) && t <= 1.0;
      } else {
        above = spec.obstacle_fn[c] >= t;
      }
      if (above) obstacle.add(c);
    }
    CellSet boundary_in(space);  // {f >= t} outside Omega
    for (int c = 0; c < space->cell_count(); ++c) {
      if (!spec.domain.contains(c) && f[c] >= t) boundary_in.add(c);
    }
    CellSet sources = obstacle.set_union(boundary_in);
    if (have_prev) sources = sources.set_union(prev);
    CellSet sinks = spec.domain.set_union(boundary_in).complement();
    CutResult r = min_cut(CutProblem{space, sources, sinks});

    // previous (higher) level's set is contained by construction
    prev = r.set;
    have_prev = true;
    double below = base;
    for (double tl : spec.levels) {
      if (tl < t) below = std::max(below, tl);
    }
    double mass = t - below;
    for (int c : r.set.cells()) {
      if (spec.domain.contains(c)) u[c] += mass;
    }
  }
  return u;
}

BallComparison capacity_ball_comparison(const std::shared_ptr<const GridSpace>& space,
                                        const CellSet& a, const Point& x, double r, double s,
                                        double t) {
  if (!(1.0 < s && s < t)) throw InvalidArgument("need 1 < s < t");
  if (!a.is_subset_of(ball(space, x, r))) {
    throw InvalidArgument("A must lie inside ball(x, r)");
  }
  space->require_ball_inside(x, t * r);
  BallComparison out;
  out.cap_t = variational_capacity(space, a, ball(space, x, t * r)).value;
  out.cap_s = variational_capacity(space, a, ball(space, x, s * r)).value;
  out.ratio = out.cap_t > 0.0 ? out.cap_s / out.cap_t : (out.cap_s > 0.0 ? INFINITY : 1.0);
  if (out.cap_t > out.cap_s) {
    throw std::logic_error("window monotonicity violated");  // cannot happen
  }
  return out;
}

SuperminimizerReport verify_superminimizer(const std::shared_ptr<const GridSpace>& space,
                                           const GridFunction& u, const CellSet& omega,
                                           int trials, std::uint64_t rng_seed) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const GridSpace& g = *space;
  SuperminimizerReport rep;
  rep.trials = trials;
  Rng rng(rng_seed);

  // interior cells of Omega (support must stay compactly inside)
  std::vector<int> inner;
  CellSet omega_inner(space);
  for (int c : omega.cells()) {
    bool ok = true;
    int ix = g.cell_x(c), iy = g.cell_y(c), n = g.resolution();
    int nbs[4] = {ix > 0 ? c - 1 : -1, ix + 1 < n ? c + 1 : -1,
                  g.dim() == 2 && iy > 0 ? c - n : -1,
                  g.dim() == 2 && iy + 1 < n ? c + n : -1};
    for (int nb : nbs) {
      if (nb < 0 || !omega.contains(nb)) ok = false;
    }
    if (ok) {
      inner.push_back(c);
      omega_inner.add(c);
    }
  }
  if (inner.empty()) return rep;

  double span = 0.0;
  for (double v : u.values()) span = std::max(span, std::fabs(v));
  span = std::max(span, 1.0);

  for (int trial = 0; trial < trials; ++trial) {
    GridFunction phi(space, 0.0);
    int seed_cell = inner[rng.next_below(inner.size())];
    int ix = g.cell_x(seed_cell), iy = g.cell_y(seed_cell);
    int wx = rng.next_int(0, 3), wy = g.dim() == 2 ? rng.next_int(0, 3) : 0;
    bool rough = rng.next_below(2) == 0;  // piecewise-constant field vs flat bump
    double height = rng.next_real(0.05, 1.0) * span;
    for (int dy = 0; dy <= wy; ++dy) {
      for (int dx = 0; dx <= wx; ++dx) {
        int jx = ix + dx, jy = iy + dy;
        if (jx >= g.resolution() || (g.dim() == 2 && jy >= g.resolution())) continue;
        int c = g.dim() == 1 ? jx : g.index(jx, jy);
        if (!omega_inner.contains(c)) continue;
        phi[c] = rough ? rng.next_real(0.0, height) : height;
      }
    }

    // supp phi = {phi > 0} plus neighbors
    CellSet supp(space);
    for (int c = 0; c < g.cell_count(); ++c) {
      if (phi[c] > 0.0) supp.add(c);
    }
    if (supp.empty()) continue;
    supp = supp.dilate();

    GridFunction pert = u;
    for (int c = 0; c < g.cell_count(); ++c) pert[c] += phi[c];
    double before = total_variation(space, u, supp);
    double after = total_variation(space, pert, supp);
    double gap = before - after;
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap > 1e-9) ++rep.violations;
  }
  return rep;
}

DeGiorgiResult degiorgi_check(const std::shared_ptr<const GridSpace>& space,
                              const GridFunction& u, const Point& x, double k, double s1,
                              double s2) {
  if (!(0.0 < s1 && s1 < s2)) throw InvalidArgument("need 0 < s1 < s2");
  if (s2 - s1 < 2.0 * space->spacing()) {
    throw InvalidArgument("degiorgi_check needs s2 - s1 >= 2h");
  }
  space->require_ball_inside(x, s2);
  GridFunction trunc(space);
  for (int c = 0; c < space->cell_count(); ++c) trunc[c] = std::max(u[c] - k, 0.0);
  DeGiorgiResult out;
  out.lhs = total_variation(space, trunc, ball(space, x, s1));
  double integral = 0.0;
  for (int c : ball(space, x, s2).cells()) integral += trunc[c] * space->cell_measure(c);
  out.rhs = 2.0 / (s2 - s1) * integral;
  return out;
}

HarnackResult weak_harnack_check(const std::shared_ptr<const GridSpace>& space,
                                 const GridFunction& u, const Point& x, double r, double R,
                                 double k, double q_exponent) {
  if (!(0.0 < r && r < R)) throw InvalidArgument("need 0 < r < R");
  space->require_ball_inside(x, R);
  HarnackResult out;
  CellSet inner = ball(space, x, r);
  if (inner.empty()) throw ResolutionInsufficient("inner Harnack ball is empty");
  bool first = true;
  for (int c : inner.cells()) {
    if (first || u[c] > out.sup_val) out.sup_val = u[c];
    first = false;
  }
  double mass = 0.0, tot = 0.0;
  for (int c : ball(space, x, R).cells()) {
    mass += std::max(u[c] - k, 0.0) * space->cell_measure(c);
    tot += space->cell_measure(c);
  }
  out.integral_term = std::pow(R / (R - r), q_exponent) * (mass / tot);
  out.fitted_c = out.integral_term > 0.0 ? (out.sup_val - k) / out.integral_term : 0.0;
  return out;
}

SemicontinuityReport semicontinuity_probe(const std::shared_ptr<const GridSpace>& space,
                                          const GridFunction& u, const CellSet& omega,
                                          const std::vector<double>& r_schedule) {
  const GridSpace& g = *space;
  if (r_schedule.empty()) throw InvalidArgument("empty radius schedule");
  for (std::size_t i = 0; i + 1 < r_schedule.size(); ++i) {
    if (!(r_schedule[i] > r_schedule[i + 1])) {
      throw InvalidArgument("radius schedule must decrease");
    }
  }
  if (r_schedule.back() < 4.0 * g.spacing()) {
    throw ResolutionInsufficient("semicontinuity probe needs radii >= 4h");
  }

  std::vector<double> ts = u.levels();
  double level_gap = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    double d = ts[i + 1] - ts[i];
    if (level_gap == 0.0 || d < level_gap) level_gap = d;
  }
  double tol = level_gap > 0.0 ? 0.5 * level_gap : 0.5;

  SemicontinuityReport rep;
  double r_max = r_schedule.front();
  for (int c : omega.cells()) {
    Point x = g.center(c);
    if (!g.ball_inside(x, r_max)) continue;
    ++rep.cells_probed;
    // estimates at every scale of the schedule; lower semicontinuity of u^
    // predicts the lower estimate cannot drop as the radius shrinks, and
    // upper semicontinuity of u~ that the upper estimate cannot rise
    double prev_lower = 0.0, prev_upper = 0.0;
    bool lower_bad = false, upper_bad = false, first = true;
    for (double r : r_schedule) {
      ApproxLimits at_r = approx_limits(space, u, x, r, r * 2.0, 0.01);
      if (!first) {
        if (at_r.lower < prev_lower - tol) lower_bad = true;
        if (at_r.upper > prev_upper + tol) upper_bad = true;
      }
      prev_lower = at_r.lower;
      prev_upper = at_r.upper;
      first = false;
    }
    if (lower_bad) rep.lower_flags.push_back(c);
    if (upper_bad) rep.upper_flags.push_back(c);
  }
  return rep;
}

}  // namespace bvlab
