#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bvlab/rng.hpp"
#include "bvlab/shapes.hpp"
#include "bvlab/variational.hpp"
#include "oracles.hpp"

using namespace bvlab;

TEST_CASE("obstacle set solutions") {
  auto g = build_grid(2, 2.5, 10, WeightSpec::uniform());  // h = 0.5
  int mid = 5;

  SUBCASE("A equals Omega") {
    CellSet omega = box_set(g, -1.0, 1.0, -1.0, 1.0);
    SetSolution s = solve_obstacle_set(g, omega, omega);
    CHECK(s.set == omega);
    CHECK(s.perimeter_value == doctest::Approx(perimeter(g, omega)).epsilon(1e-12));
  }
  SUBCASE("center cell in a 3x3 window stays put with cut 4h") {
    CellSet a(g);
    a.add(g->index(mid, mid));
    CellSet omega(g);
    for (int j = mid - 1; j <= mid + 1; ++j) {
      for (int i = mid - 1; i <= mid + 1; ++i) omega.add(g->index(i, j));
    }
    SetSolution s = solve_obstacle_set(g, a, omega);
    CHECK(s.set == a);
    CHECK(s.perimeter_value == doctest::Approx(4.0 * g->spacing()).epsilon(1e-12));
    CutResult o = enumerate_oracle({g, a, omega.complement()});
    CHECK(o.value == doctest::Approx(s.perimeter_value).epsilon(1e-13));
  }
  SUBCASE("two diagonal cells stay disconnected (value 8h)") {
    CellSet a(g);
    a.add(g->index(mid, mid));
    a.add(g->index(mid + 1, mid + 1));
    CellSet omega = box_set(g, -1.5, 1.5, -1.5, 1.5);
    SetSolution s = solve_obstacle_set(g, a, omega);
    CHECK(s.set == a);
    CHECK(s.perimeter_value == doctest::Approx(8.0 * g->spacing()).epsilon(1e-12));
  }
  SUBCASE("preconditions") {
    CellSet omega = ball(g, Point{0.0, 0.0}, 1.0);
    CellSet outside = single_cell(g, Point{2.0, 2.0});
    CHECK_THROWS_AS(solve_obstacle_set(g, outside, omega), InvalidArgument);
    CellSet touching(g, true);
    CHECK_THROWS_AS(solve_obstacle_set(g, omega, touching), BoundaryContact);
  }
}

TEST_CASE("1d obstacle problem: an interval stays put with a two-edge cut") {
  auto g = build_grid(1, 1.0, 64, WeightSpec::uniform());
  CellSet a = box_set(g, -0.2, 0.1, 0.0, 0.0);
  CellSet omega = box_set(g, -0.6, 0.6, 0.0, 0.0);
  SetSolution s = solve_obstacle_set(g, a, omega);
  CHECK(s.set == a);
  CHECK(s.perimeter_value == doctest::Approx(2.0).epsilon(1e-12));  // two unit edges
  // 1d weighted variant: the cut picks the cheapest edges around A
  auto w = build_grid(1, 1.0, 64, WeightSpec::power_law(0.5));
  CellSet aw = box_set(w, -0.2, 0.1, 0.0, 0.0);
  CellSet ow = box_set(w, -0.6, 0.6, 0.0, 0.0);
  SetSolution sw = solve_obstacle_set(w, aw, ow);
  CHECK(aw.is_subset_of(sw.set));
  CHECK(sw.perimeter_value == doctest::Approx(perimeter(w, sw.set)).epsilon(1e-12));
}

TEST_CASE("capacity equals the solution perimeter exactly (discrete Lemma 3.5)") {
  auto g = build_grid(2, 1.0, 64, WeightSpec::uniform());
  CellSet a = ball(g, Point{0.05, -0.1}, 0.2);
  CellSet omega = ball(g, Point{0.0, 0.0}, 0.7);
  CapacityResult cap = variational_capacity(g, a, omega);
  SetSolution sol = solve_obstacle_set(g, a, omega);
  CHECK(cap.value == sol.perimeter_value);
  CHECK(cap.extremal_set == sol.set);
  CHECK(cap.value == doctest::Approx(perimeter(g, cap.extremal_set)).epsilon(1e-12));
  CHECK(variational_capacity(g, CellSet(g), omega).value == 0.0);
}

TEST_CASE("solution optimality against sampled and exhaustive competitors") {
  auto g = build_grid(2, 1.0, 6, WeightSpec::power_law(-0.7));
  CellSet a = single_cell(g, Point{0.05, 0.05});
  CellSet omega = box_set(g, -0.55, 0.55, -0.55, 0.55);
  SetSolution s = solve_obstacle_set(g, a, omega);

  Rng rng(17);
  CellSet free = omega.set_minus(a);
  std::vector<int> free_cells = free.cells();
  for (int trial = 0; trial < 100; ++trial) {
    CellSet v = a;
    for (int c : free_cells) {
      if (rng.next_below(2)) v.add(c);
    }
    CHECK(s.perimeter_value <= perimeter(g, v) + 1e-10);
  }
}

TEST_CASE("window growth never raises the capacity") {
  auto g = build_grid(2, 1.0, 64, WeightSpec::uniform());
  CellSet a = box_set(g, -0.1, 0.1, -0.1, 0.05);
  double small = variational_capacity(g, a, ball(g, Point{0.0, 0.0}, 0.4)).value;
  double big = variational_capacity(g, a, ball(g, Point{0.0, 0.0}, 0.8)).value;
  CHECK(big <= small + 1e-15);
}

TEST_CASE("capacity ball comparison") {
  auto g = build_grid(2, 1.0, 128, WeightSpec::uniform());
  Point x{0.0, 0.0};
  SUBCASE("isolated cell: both windows give its own cut") {
    CellSet a = single_cell(g, x);
    BallComparison bc = capacity_ball_comparison(g, a, x, 0.1, 1.5, 2.0);
    CHECK(bc.cap_t == doctest::Approx(4.0 * g->spacing()).epsilon(1e-12));
    CHECK(bc.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("ball obstacle: ratio stays under the Lemma 4.2 scale") {
    CellSet a = ball(g, x, 0.2);
    BallComparison bc = capacity_ball_comparison(g, a, x, 0.2, 1.5, 2.0);
    CHECK(bc.cap_t <= bc.cap_s);
    CHECK(bc.ratio <= 4.0);
  }
  CHECK_THROWS_AS(capacity_ball_comparison(g, single_cell(g, x), x, 0.1, 2.0, 1.5),
                  InvalidArgument);
}

TEST_CASE("layer cake general obstacle solver") {
  auto g = build_grid(2, 1.0, 16, WeightSpec::uniform());
  CellSet omega = box_set(g, -0.7, 0.7, -0.7, 0.7);

  SUBCASE("zero data gives the zero function") {
    ObstacleSpec spec;
    spec.domain = omega;
    spec.characteristic = false;
    spec.obstacle_fn = GridFunction(g, 0.0);
    spec.boundary_data = GridFunction(g, 0.0);
    spec.levels = {0.0};
    GridFunction u = solve_obstacle_general(g, spec);
    for (int c = 0; c < u.size(); ++c) CHECK(u[c] == 0.0);
  }
  SUBCASE("characteristic case matches solve_obstacle_set") {
    CellSet a = box_set(g, -0.2, 0.2, -0.15, 0.2);
    ObstacleSpec spec;
    spec.domain = omega;
    spec.characteristic = true;
    spec.obstacle_set = a;
    spec.boundary_data = GridFunction(g, 0.0);
    spec.levels = {0.0, 1.0};
    GridFunction u = solve_obstacle_general(g, spec);
    SetSolution s = solve_obstacle_set(g, a, omega);
    for (int c = 0; c < u.size(); ++c) {
      CHECK(u[c] == (s.set.contains(c) ? 1.0 : 0.0));
    }
  }
  SUBCASE("two-level obstacle: nested levels, coarea consistency, optimality") {
    GridFunction psi(g, 0.0);
    for (int c : box_set(g, -0.3, 0.3, -0.3, 0.3).cells()) psi[c] = 1.0;
    for (int c : box_set(g, -0.1, 0.15, -0.1, 0.1).cells()) psi[c] = 2.0;
    ObstacleSpec spec;
    spec.domain = omega;
    spec.characteristic = false;
    spec.obstacle_fn = psi;
    spec.boundary_data = GridFunction(g, 0.0);
    spec.levels = {0.0, 1.0, 2.0};
    GridFunction u = solve_obstacle_general(g, spec);

    for (int c : omega.cells()) CHECK(u[c] >= psi[c]);
    for (int c : omega.complement().cells()) CHECK(u[c] == 0.0);
    CellSet upper = u.superlevel(1.5);
    CellSet lower = u.superlevel(0.5);
    CHECK(upper.is_subset_of(lower));
    CoareaResult cr = coarea_check(g, u, CellSet(g, true));
    CHECK(cr.lhs == doctest::Approx(cr.rhs).epsilon(1e-12));

    // random admissible competitors at the same quantization are no better
    Rng rng(5);
    double tvu = total_variation(g, u);
    std::vector<int> cells = omega.cells();
    for (int trial = 0; trial < 100; ++trial) {
      GridFunction v(g, 0.0);
      for (int c : cells) {
        double lift = static_cast<double>(rng.next_below(3));
        v[c] = std::max(psi[c], lift);
      }
      CHECK(tvu <= total_variation(g, v) + 1e-9);
    }
  }
}

TEST_CASE("superminimizer verification") {
  auto g = build_grid(2, 1.0, 32, WeightSpec::uniform());
  CellSet omega = ball(g, Point{0.0, 0.0}, 0.8);

  SUBCASE("constants never violate") {
    SuperminimizerReport rep =
        verify_superminimizer(g, GridFunction(g, 1.0), omega, 50, 123);
    CHECK(rep.violations == 0);
  }
  SUBCASE("obstacle solutions pass 200 seeded trials") {
    CellSet a = ball(g, Point{0.1, 0.0}, 0.2);
    SetSolution s = solve_obstacle_set(g, a, omega);
    SuperminimizerReport rep =
        verify_superminimizer(g, indicator(s.set), omega, 200, 2024);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_gap <= 1e-9);
  }
  SUBCASE("the checkerboard is caught") {
    GridFunction u(g, 0.0);
    for (int c = 0; c < u.size(); ++c) {
      u[c] = (g->cell_x(c) + g->cell_y(c)) % 2 == 0 ? 1.0 : 0.0;
    }
    SuperminimizerReport rep = verify_superminimizer(g, u, omega, 200, 99);
    CHECK(rep.violations > 0);
  }
}

TEST_CASE("De Giorgi truncation inequality for solutions") {
  auto g = build_grid(2, 1.0, 128, WeightSpec::uniform());
  CellSet omega = ball(g, Point{0.0, 0.0}, 0.85);

  SUBCASE("trivial zeros") {
    GridFunction u(g, 0.5);
    DeGiorgiResult r = degiorgi_check(g, u, Point{0.1, 0.1}, 1.0, 0.1, 0.2);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
  }
  SUBCASE("solution with the obstacle away from the ball") {
    CellSet a = box_set(g, 0.3, 0.6, -0.3, 0.2);
    SetSolution s = solve_obstacle_set(g, a, omega);
    GridFunction u = indicator(s.set);
    Point x{-0.4, -0.3};
    double s1 = 0.1, s2 = 0.2;
    CHECK(a.set_intersect(ball(g, x, s2)).empty());
    DeGiorgiResult r = degiorgi_check(g, u, x, 0.0, s1, s2);
    double slack = 1.0 + 4.0 * g->spacing() / (s2 - s1);
    CHECK(r.lhs <= r.rhs * slack + 1e-12);
  }
}

TEST_CASE("weak Harnack checker") {
  auto g = build_grid(2, 1.0, 128, WeightSpec::uniform());
  Point x{0.0, 0.0};
  SUBCASE("constant at level k") {
    HarnackResult h = weak_harnack_check(g, GridFunction(g, 2.0), x, 0.1, 0.2, 2.0, 2.0);
    CHECK(h.sup_val == 2.0);
    CHECK(h.integral_term == 0.0);
    CHECK(h.fitted_c == 0.0);
  }
  SUBCASE("indicator covering the ball: fitted constant is ((R-r)/R)^Q") {
    GridFunction u = indicator(ball(g, x, 0.5));
    HarnackResult h = weak_harnack_check(g, u, x, 0.1, 0.3, 0.0, 2.0);
    CHECK(h.sup_val == 1.0);
    CHECK(h.fitted_c == doctest::Approx(std::pow(2.0 / 3.0, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("semicontinuity probe") {
  auto g = build_grid(2, 1.0, 128, WeightSpec::uniform());
  double h = g->spacing();
  CellSet omega = ball(g, Point{0.0, 0.0}, 0.6);
  std::vector<double> schedule = {16.0 * h, 8.0 * h, 4.0 * h};

  SUBCASE("constants are clean") {
    SemicontinuityReport rep = semicontinuity_probe(g, GridFunction(g, 1.0), omega, schedule);
    CHECK(rep.lower_flags.empty());
    CHECK(rep.upper_flags.empty());
  }
  SUBCASE("solution sets give zero lower flags") {
    CellSet a = ball(g, Point{0.05, 0.0}, 0.15);
    SetSolution s = solve_obstacle_set(g, a, omega);
    SemicontinuityReport rep = semicontinuity_probe(g, indicator(s.set), omega, schedule);
    CHECK(rep.lower_flags.empty());
  }
  SUBCASE("an isolated cell flags its surrounding ring upward") {
    GridFunction u = indicator(single_cell(g, Point{0.0, 0.0}));
    SemicontinuityReport rep = semicontinuity_probe(g, u, omega, schedule);
    CHECK(!rep.upper_flags.empty());
    CHECK(rep.lower_flags.empty());
  }
}
