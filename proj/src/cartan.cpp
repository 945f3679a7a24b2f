#include "bvlab/cartan.hpp"

#include <algorithm>
#include <cmath>

namespace bvlab {

CellSet interior_cells(const std::shared_ptr<const GridSpace>& space, int margin_cells) {
  const GridSpace& g = *space;
  CellSet s(space);
  int n = g.resolution();
  for (int c = 0; c < g.cell_count(); ++c) {
    int ix = g.cell_x(c), iy = g.cell_y(c);
    bool ok = ix >= margin_cells && ix < n - margin_cells;
    if (g.dim() == 2) ok = ok && iy >= margin_cells && iy < n - margin_cells;
    if (ok) s.add(c);
  }
  return s;
}

AnnuliDecomposition annuli_decomposition(const std::shared_ptr<const GridSpace>& space,
                                         const Point& x, double r, int depth) {
  const GridSpace& g = *space;
  if (depth < 1) throw InvalidArgument("annuli decomposition needs depth >= 1");
  g.require_ball_inside(x, 1.5 * r);
  if (std::ldexp(r, -depth) < 16.0 * g.spacing()) {
    throw ResolutionInsufficient("annuli decomposition: 2^-depth R under 16h");
  }

  AnnuliDecomposition d;
  d.center = x;
  d.radius = r;
  d.depth = depth;
  d.d0 = CellSet(space);
  d.d1 = CellSet(space);
  for (int i = 0; i <= depth; ++i) {
    double ri = std::ldexp(r, -i);
    d.ball_radii.push_back(ri);
    d.balls.push_back(ball(space, x, ri));
    // H_i = B_i minus the closed ball of radius (9/10) * r_{i+1}
    d.annuli.push_back(annulus(space, x, 0.9 * 0.5 * ri, ri));
    // F_i = (4/5)B_i \ (5/4)B_{i+1}: open outer, open inner removal
    CellSet f = ball(space, x, 0.8 * ri);
    CellSet inner = ball(space, x, 1.25 * 0.5 * ri);
    d.stripes.push_back(f.set_minus(inner));
    if (i % 2 == 0) {
      d.d0 = d.d0.set_union(d.annuli.back());
    } else {
      d.d1 = d.d1.set_union(d.annuli.back());
    }
  }
  d.core_radius = 0.9 * 0.5 * std::ldexp(r, -depth);

  // coverage is exact outside the core by construction; verify anyway
  CellSet covered = d.d0.set_union(d.d1);
  for (int c : d.balls.front().cells()) {
    if (g.dist(c, x) > d.core_radius && !covered.contains(c)) {
      throw std::logic_error("annuli decomposition failed to cover B(x,R) outside the core");
    }
  }
  return d;
}

bool CartanCertificate::all_trusted_pass() const {
  for (const CheckRow& r : checks) {
    if (r.status == CheckStatus::Fail) return false;
  }
  return true;
}

const CheckRow* CartanCertificate::find(const std::string& name) const {
  for (const CheckRow& r : checks) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

void append_le(std::vector<CheckRow>& rows, const std::string& name, double scale, double lhs,
               double rhs, double tol, bool trusted = true) {
  // a strict-decrease row (negative tol) degenerates to equality-at-zero for
  // empty solution sets
  bool ok = lhs <= rhs + tol || (lhs == 0.0 && rhs == 0.0);
  CheckStatus st =
      !trusted ? CheckStatus::Untrusted : (ok ? CheckStatus::Pass : CheckStatus::Fail);
  rows.push_back({name, scale, lhs, rhs, tol, st});
}

}  // namespace

CartanCertificate weak_cartan_construct(const std::shared_ptr<const GridSpace>& space,
                                        const CellSet& a, const Point& x, double r, int depth,
                                        const ThinnessVerdict& verdict, bool override_thin) {
  const GridSpace& g = *space;
  if (verdict.classification != ThinnessClass::Thin && !override_thin) {
    throw PreconditionError("weak Cartan construction requires a thin verdict (or override)");
  }
  {
    CellSet at_x = single_cell(space, x);
    if (!at_x.set_intersect(a).empty()) {
      throw PreconditionError("weak Cartan construction requires x outside A");
    }
  }

  CartanCertificate cert;
  cert.center = x;
  cert.radius = r;
  cert.depth = depth;
  cert.decomposition = annuli_decomposition(space, x, r, depth);
  const AnnuliDecomposition& dec = cert.decomposition;

  CellSet w = a.dilate();
  CellSet obstacle0 = w.set_intersect(dec.d0).set_intersect(dec.balls[0]);
  CellSet obstacle1 = w.set_intersect(dec.d1).set_intersect(dec.balls[1]);
  CellSet window0 = ball(space, x, 1.5 * r);
  CellSet window1 = ball(space, x, 1.5 * 0.5 * r);
  cert.e0 = solve_obstacle_set(space, obstacle0, window0).set;
  cert.e1 = solve_obstacle_set(space, obstacle1, window1).set;

  double h = g.spacing();
  auto trusted_scale = [&](double s) { return s >= 16.0 * h; };

  // (1) separation: E_parity stays out of the opposite-parity stripes, as an
  // exact cell count (Eq. (5.4) of the construction)
  for (int j = 1; j <= depth; ++j) {
    const CellSet& e = (j % 2 == 1) ? cert.e0 : cert.e1;  // E_{j-1 mod 2}
    long long count = e.set_intersect(dec.stripes[j]).cardinality();
    append_le(cert.checks, "separation_F" + std::to_string(j), dec.ball_radii[j],
              static_cast<double>(count), 0.0, 0.0, trusted_scale(dec.ball_radii[j]));
  }

  // (2) coverage: A cap B(x,R) outside the core lies in E0 u E1, exactly
  {
    CellSet covered = cert.e0.set_union(cert.e1);
    long long missing = 0, core_missing = 0;
    for (int c : a.set_intersect(dec.balls[0]).cells()) {
      if (covered.contains(c)) continue;
      if (g.dist(c, x) > dec.core_radius) ++missing;
      else ++core_missing;
    }
    append_le(cert.checks, "coverage_missing", r, static_cast<double>(missing), 0.0, 0.0);
    append_le(cert.checks, "coverage_core_missing", dec.core_radius,
              static_cast<double>(core_missing), 0.0, 0.0, false);
  }

  // (3) vanishing at x: both solution densities under 1e-2 at the smallest
  // trusted radius
  {
    double rv = std::max(std::ldexp(r, -depth), 16.0 * h);
    CellSet bv = ball(space, x, rv);
    double mu = bv.measure();
    append_le(cert.checks, "vanishing_density_E0", rv,
              bv.set_intersect(cert.e0).measure() / mu, 1e-2, 0.0);
    append_le(cert.checks, "vanishing_density_E1", rv,
              bv.set_intersect(cert.e1).measure() / mu, 1e-2, 0.0);
  }

  // (4) perimeter thinness: r P(E_i, B(x,r)) / mu(B(x,r)) strictly decreasing
  // along each set's own dyadic subsequence. E_i carries obstacle mass only
  // in every other annulus, so the ratio thins at parity-matched scales
  // (steps of 4x in the radius), mirroring the per-set limit (5.2).
  for (int which = 0; which < 2; ++which) {
    const CellSet& e = which == 0 ? cert.e0 : cert.e1;
    double prev = 0.0;
    bool first = true;
    for (int i = which; i <= depth; i += 2) {
      double ri = dec.ball_radii[i];
      if (!trusted_scale(ri)) break;
      double ratio = ri * perimeter(space, e, dec.balls[i]) / dec.balls[i].measure();
      if (!first) {
        append_le(cert.checks,
                  "perimeter_thinness_E" + std::to_string(which) + "_i" + std::to_string(i), ri,
                  ratio, prev, -1e-15);  // strict decrease
      }
      prev = ratio;
      first = false;
    }
  }

  // (5) superlevel-set thinness: the union of the two solution sets is thin
  // at x. The profile starts at R/2 so its capacity windows stay inside the
  // domain margin.
  if (depth >= 2) {
    ThinnessProfile prof =
        thinness_profile(space, cert.e0.set_union(cert.e1), x, 2.0, 0.5 * r, depth - 1);
    for (int i = 1; i <= prof.resolution_floor && i < static_cast<int>(prof.ratios.size());
         ++i) {
      append_le(cert.checks, "superlevel_thinness_i" + std::to_string(i),
                0.5 * r * std::pow(2.0, -i), prof.ratios[i], prof.ratios[i - 1], -1e-15);
    }
  }

  // truncation consistency: E_parity cut to (5/4)B_i solves the scale-i
  // problem (the induction step of the proof, checked directly)
  for (int i = 2; i <= depth; ++i) {
    const CellSet& e = (i % 2 == 0) ? cert.e0 : cert.e1;
    const CellSet& dpar = (i % 2 == 0) ? dec.d0 : dec.d1;
    CellSet truncated = e.set_intersect(ball(space, x, 1.25 * dec.ball_radii[i]));
    double lhs = perimeter(space, truncated);
    CellSet obstacle_i = w.set_intersect(dpar).set_intersect(dec.balls[i]);
    double rhs =
        solve_obstacle_set(space, obstacle_i, ball(space, x, 1.5 * dec.ball_radii[i]))
            .perimeter_value;
    double mag = std::max(std::fabs(lhs), std::fabs(rhs));
    CheckStatus st = std::fabs(lhs - rhs) <= 1e-12 * mag + 1e-300 ? CheckStatus::Pass
                                                                  : CheckStatus::Fail;
    if (!trusted_scale(dec.ball_radii[i])) st = CheckStatus::Untrusted;
    cert.checks.push_back({"truncation_consistency_i" + std::to_string(i), dec.ball_radii[i],
                           lhs, rhs, 1e-12, st});
  }
  return cert;
}

SmallnessResult smallness_in_annuli_check(const std::shared_ptr<const GridSpace>& space,
                                          const CellSet& a, const Point& x, double r) {
  const GridSpace& g = *space;
  CellSet b = ball(space, x, r);
  if (!a.is_subset_of(b)) throw PreconditionError("smallness check needs A inside B(x,R)");
  if (!a.set_intersect(annulus(space, x, 0.25 * r, 0.45 * r)).empty()) {
    throw PreconditionError("smallness check needs A empty in (9/20)B minus (1/4)B");
  }
  g.require_ball_inside(x, 1.5 * r);

  SmallnessResult out;
  // the comparison window 2B may poke past the domain margin (Example 5.9
  // runs it at B(0,2) on [-2,2]^2); clip it to the interior, which leaves the
  // capacity untouched because the extremal cut hugs A deep inside
  CellSet window2 =
      ball(space, x, 2.0 * r).set_intersect(interior_cells(space, 2));
  out.capacity = variational_capacity(space, a, window2).value;
  out.bound = 32.0 * r * out.capacity / b.measure();
  out.solution = solve_obstacle_set(space, a, ball(space, x, 1.5 * r)).set;

  // density of the solution in B(y, 4h) per stripe cell, by direct window
  // scan (the stripe holds tens of thousands of cells)
  double probe_r = 4.0 * g.spacing();
  int span = 4;
  int n = g.resolution();
  for (int c : ball(space, x, 2.0 * r / 5.0).cells()) {
    // reporting stripe is 5/16 <= |y| < 2/5, inner boundary included
    if (g.dist(c, x) < 5.0 * r / 16.0) continue;
    Point y = g.center(c);
    int cx = g.cell_x(c), cy = g.dim() == 2 ? g.cell_y(c) : 0;
    int jmax = g.dim() == 2 ? std::min(n - 1, cy + span) : 0;
    double in = 0.0, tot = 0.0;
    for (int j = std::max(0, cy - span); j <= jmax; ++j) {
      for (int i = std::max(0, cx - span); i <= std::min(n - 1, cx + span); ++i) {
        int cc = g.index(i, j);
        if (g.dist(cc, y) >= probe_r) continue;
        tot += g.cell_measure(cc);
        if (out.solution.contains(cc)) in += g.cell_measure(cc);
      }
    }
    if (tot > 0.0) out.density_max = std::max(out.density_max, in / tot);
  }
  return out;
}

StrongCartanResult strong_cartan_construct(const std::shared_ptr<const GridSpace>& space,
                                           const CellSet& a, const Point& x, double r,
                                           int k_max, bool override_thin) {
  const GridSpace& g = *space;
  if (g.weight_spec().kind != WeightKind::PowerLaw ||
      !(g.weight_spec().power_a > -2.0 && g.weight_spec().power_a < -1.0) || g.dim() != 2) {
    throw PreconditionError(
        "strong Cartan needs the positive-point-capacity surrogate: 2d power law, a in (-2,-1)");
  }
  if (k_max < 2) throw InvalidArgument("strong Cartan needs k_max >= 2");
  g.require_ball_inside(x, r);

  if (!override_thin) {
    int depth = 1;
    while (std::ldexp(r, -(depth + 1)) >= 8.0 * g.spacing()) ++depth;
    ThinnessVerdict v = classify(thinness_profile(space, a, x, 2.0, r / 2.0, depth));
    if (v.classification != ThinnessClass::Thin) {
      throw PreconditionError("strong Cartan requires A thin at x (or an explicit override)");
    }
  }

  StrongCartanResult out;
  out.levels_requested = k_max;
  CellSet window = ball(space, x, r);
  double cap0 =
      variational_capacity(space, a.set_intersect(ball(space, x, r / 2.0)), window).value;

  double h = g.spacing();
  double prev_radius = r / 2.0;
  for (int i = 1; i <= k_max; ++i) {
    double budget = std::ldexp(cap0, -i);
    // largest radius below the previous one whose capacity fits the budget;
    // capacities are monotone in the radius, so walk a geometric grid
    double found = -1.0;
    double found_cap = 0.0;
    double lo = 8.0 * h;
    for (double cand = prev_radius * 0.99; cand >= lo * (1.0 - 1e-12); cand *= 0.99) {
      double cap =
          variational_capacity(space, a.set_intersect(ball(space, x, cand)), window).value;
      if (cap < budget) {
        found = cand;
        found_cap = cap;
        break;
      }
    }
    if (found < 0.0) {
      out.partial = true;
      break;
    }
    out.radii.push_back(found);
    out.capacities.push_back(found_cap);
    out.budgets.push_back(budget);
    out.nested_sets.push_back(
        variational_capacity(space, a.set_intersect(ball(space, x, found)), window)
            .extremal_set);
    prev_radius = found;
    ++out.levels_built;
  }

  out.stacked = GridFunction(space, 0.0);
  for (const CellSet& e : out.nested_sets) {
    for (int c : e.cells()) out.stacked[c] += 1.0;
  }
  CellSet xc = single_cell(space, x);
  out.value_at_x = out.stacked[xc.cells().front()];

  for (int k = 1; k <= out.levels_built; ++k) {
    CellSet band = a.set_intersect(ball(space, x, out.radii[k - 1]));
    double lo = -1.0;
    for (int c : band.cells()) {
      double v = out.stacked[c];
      if (lo < 0.0 || v < lo) lo = v;
    }
    out.divergence_witness.push_back(lo);
    CheckStatus st = (lo >= k || band.empty()) ? CheckStatus::Pass : CheckStatus::Fail;
    if (band.empty()) st = CheckStatus::Untrusted;  // vacuous level
    out.checks.push_back({"stack_at_level_" + std::to_string(k), out.radii[k - 1], lo,
                          static_cast<double>(k), 0.0, st});
  }
  out.checks.push_back({"value_at_x", 0.0, out.value_at_x, 1.0, 0.0,
                        out.value_at_x <= 1.0 ? CheckStatus::Pass : CheckStatus::Fail});
  if (out.partial) {
    out.checks.push_back({"radii_search_partial", 0.0,
                          static_cast<double>(out.levels_built),
                          static_cast<double>(k_max), 0.0, CheckStatus::Untrusted});
  }
  return out;
}

CounterexampleReport counterexample_run(double eps, int resolution, int chain_depth) {
  if (!(eps > 0.0 && eps < 0.2)) throw InvalidArgument("counterexample needs eps in (0, 1/5)");
  auto space = build_grid(2, 2.0, resolution, WeightSpec::uniform());
  const GridSpace& g = *space;
  double h = g.spacing();

  CounterexampleReport rep;
  rep.space = space;
  rep.set_a = ex59_chain(space, eps, chain_depth);
  rep.resolved_depth = -1;
  for (int j = 0; j <= chain_depth; ++j) {
    double scale = std::pow(10.0, -j);
    if (!box_set(space, scale - scale * eps, scale, 0.0, scale * scale * eps).empty()) {
      rep.resolved_depth = j;
    }
  }
  if (rep.resolved_depth < std::min(chain_depth, 1)) {
    throw ResolutionInsufficient("counterexample grid does not resolve the A_1 rectangle");
  }

  Point origin{0.0, 0.0};
  // B(0,2) touches the faces of [-2,2]^2; clip the window by the 2h margin
  CellSet omega = ball(space, origin, 2.0).set_intersect(interior_cells(space, 2));
  rep.solution = solve_obstacle_set(space, rep.set_a, omega).set;
  RunReport& r = rep.report;

  // (i) solution identity: mu(E delta A) <= 4h P(A, X)
  double sym = rep.solution.set_minus(rep.set_a).measure() +
               rep.set_a.set_minus(rep.solution).measure();
  r.check_le("ex59_solution_identity", 0.0, sym, 4.0 * h * perimeter(space, rep.set_a), 0.0);

  // (ii) capacity bounds per Eq. (5.1), delta = 0.25. The paper states the
  // bounds for 0 < R < 1; at R = 1 the A_0 square (perimeter ~ 4 eps) enters
  // whole, so the strict upper bound cannot hold and the R = 1 gate uses the
  // spec's widened interval while the strict comparison is reported untrusted.
  for (double radius : {1.0, 0.5, 0.25, 0.1}) {
    if (radius < 20.0 * h) continue;
    CellSet inner = rep.set_a.set_intersect(ball(space, origin, radius));
    std::string tag = "ex59_capacity_R" + format_number(radius);
    if (inner.empty()) {
      // the chain is not rasterized at this radius; nothing to assert
      r.note(tag + "_unresolved", radius, 0.0, 0.0);
      continue;
    }
    CellSet window = ball(space, origin, 2.0 * radius).set_intersect(interior_cells(space, 2));
    double cap = variational_capacity(space, inner, window).value;
    r.pass_if(tag + "_lower", radius, cap, radius * eps / 10.0 * 0.75, 0.0,
              cap >= radius * eps / 10.0 * 0.75);
    if (radius < 0.9) {
      r.pass_if(tag + "_upper", radius, cap, 3.0 * radius * eps * 1.25, 0.0,
                cap <= 3.0 * radius * eps * 1.25);
    } else {
      r.note(tag + "_upper_eq51", radius, cap, 3.0 * radius * eps * 1.25);
      r.pass_if(tag + "_upper_wide", radius, cap, 3.0 * radius * eps * 1.25 * 10.0, 0.0,
                cap <= 3.0 * radius * eps * 1.25 * 10.0);
    }
  }

  // stripe vanishing at R = 1 (Lemma 5.1 applied to the chain)
  {
    SmallnessResult sm =
        smallness_in_annuli_check(space, rep.set_a.set_intersect(ball(space, origin, 1.0)),
                                  origin, 1.0);
    r.pass_if("ex59_stripe_density_zero", 1.0, sm.density_max, 0.0, 0.0,
              sm.density_max == 0.0);
    r.note("ex59_stripe_bound", 1.0, sm.density_max, sm.bound);
  }

  // (iii) thickness at the origin versus vanishing solution density: the
  // upper-semicontinuity failure witness
  {
    double r0 = 0.5;
    int depth = 2;  // radii 0.5, 0.25, 0.125: the chain-resolvable scales
    ThinnessProfile prof = thinness_profile(space, rep.set_a, origin, 2.0, r0, depth);
    double lo = eps / (10.0 * 3.14159265358979323846) * 0.5;
    double hi = 3.0 * eps / 3.14159265358979323846 * 1.5;
    for (int i = 0; i <= prof.resolution_floor && i < static_cast<int>(prof.ratios.size());
         ++i) {
      double ri = r0 * std::pow(2.0, -i);
      if (rep.set_a.set_intersect(ball(space, origin, ri)).empty()) {
        r.note("ex59_theta_unresolved_i" + std::to_string(i), ri, prof.ratios[i], lo);
        continue;
      }
      r.pass_if("ex59_theta_lower_i" + std::to_string(i), ri, prof.ratios[i], lo, 0.0,
                prof.ratios[i] >= lo);
      r.pass_if("ex59_theta_upper_i" + std::to_string(i), ri, prof.ratios[i], hi, 0.0,
                prof.ratios[i] <= hi);
    }
    double rv = 8.0 * h;
    CellSet bv = ball(space, origin, rv);
    double dens = bv.set_intersect(rep.solution).measure() / bv.measure();
    r.check_le("ex59_origin_density", rv, dens, 1e-2, 0.0);
  }
  return rep;
}

}  // namespace bvlab
