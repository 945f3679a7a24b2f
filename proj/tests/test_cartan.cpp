#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bvlab/cartan.hpp"
#include "bvlab/experiments.hpp"

using namespace bvlab;

TEST_CASE("annuli decomposition geometry") {
  auto g = build_grid(2, 1.0, 512, WeightSpec::uniform());
  Point x{0.0, 0.0};
  double r = 0.64;

  SUBCASE("depth 1: parity unions are the two annuli") {
    AnnuliDecomposition d = annuli_decomposition(g, x, r, 1);
    CHECK(d.d0 == d.annuli[0]);
    CHECK(d.d1 == d.annuli[1]);
  }
  SUBCASE("coverage outside the core, stripe containment") {
    AnnuliDecomposition d = annuli_decomposition(g, x, r, 3);
    CellSet covered = d.d0.set_union(d.d1);
    for (int c : d.balls[0].cells()) {
      if (g->dist(c, x) > d.core_radius) CHECK(covered.contains(c));
    }
    for (int i = 0; i + 2 <= 3; ++i) {
      CHECK(d.stripes[i + 1].set_intersect(d.annuli[i]).empty());
      CHECK(d.stripes[i + 1].set_intersect(d.annuli[i + 2]).empty());
    }
  }
  SUBCASE("resolution guard") {
    CHECK_THROWS_AS(annuli_decomposition(g, x, r, 8), ResolutionInsufficient);
  }
}

TEST_CASE("weak Cartan certificate for the empty set is trivially clean") {
  auto g = build_grid(2, 1.0, 256, WeightSpec::uniform());
  Point x{0.0, 0.0};
  ThinnessProfile p = thinness_profile(g, CellSet(g), x, 2.0, 0.25, 2);
  CartanCertificate cert =
      weak_cartan_construct(g, CellSet(g), x, 0.5, 2, classify(p));
  CHECK(cert.e0.empty());
  CHECK(cert.e1.empty());
  CHECK(cert.all_trusted_pass());
}

TEST_CASE("weak Cartan certificate for the thin chain (demo geometry, reduced grid)") {
  auto g = build_grid(2, 1.0, 512, WeightSpec::uniform());
  Point x{0.0, 0.0};
  double r = 0.64;
  CellSet chain = cartan_demo_chain(g, r);
  ThinnessVerdict v = classify(thinness_profile(g, chain, x, 2.0, r / 2.0, 3));
  REQUIRE(v.classification == ThinnessClass::Thin);

  CartanCertificate cert = weak_cartan_construct(g, chain, x, r, 3, v);
  CHECK(cert.all_trusted_pass());

  SUBCASE("separation rows are exact zeros") {
    for (int j = 1; j <= 3; ++j) {
      const CheckRow* row = cert.find("separation_F" + std::to_string(j));
      REQUIRE(row != nullptr);
      CHECK(row->lhs == 0.0);
      CHECK(row->status == CheckStatus::Pass);
    }
  }
  SUBCASE("coverage and obstacle containment") {
    const CheckRow* row = cert.find("coverage_missing");
    REQUIRE(row != nullptr);
    CHECK(row->lhs == 0.0);
    CellSet w = chain.dilate();
    CHECK(w.set_intersect(cert.decomposition.d0)
              .set_intersect(cert.decomposition.balls[0])
              .is_subset_of(cert.e0));
    CHECK(cert.e0.is_subset_of(ball(g, x, 1.5 * r)));
    CHECK(cert.e1.is_subset_of(ball(g, x, 0.75 * r)));
  }
  SUBCASE("thick half plane with override records a vanishing failure") {
    CellSet hp(g);
    for (int c : half_plane(g, -0.05).cells()) {
      if (g->dist(c, x) < 1.2 * r && g->dist(c, x) > 0.01) hp.add(c);
    }
    hp = hp.set_intersect(ball(g, x, r));
    ThinnessVerdict tv;  // inconclusive; force the run
    CartanCertificate bad = weak_cartan_construct(g, hp, x, r, 3, tv, true);
    const CheckRow* d0row = bad.find("vanishing_density_E0");
    const CheckRow* d1row = bad.find("vanishing_density_E1");
    REQUIRE(d0row != nullptr);
    REQUIRE(d1row != nullptr);
    CHECK((d0row->status == CheckStatus::Fail || d1row->status == CheckStatus::Fail));
    CHECK_FALSE(bad.all_trusted_pass());
  }
  SUBCASE("non-thin verdict without override is rejected") {
    ThinnessVerdict tv;
    CHECK_THROWS_AS(weak_cartan_construct(g, chain, x, r, 3, tv), PreconditionError);
  }
}

TEST_CASE("smallness in annuli") {
  auto g = build_grid(2, 1.0, 512, WeightSpec::uniform());
  Point x{0.0, 0.0};
  double r = 0.45;  // the capacity window 2r must stay 2h inside the domain

  SUBCASE("empty obstacle") {
    SmallnessResult s = smallness_in_annuli_check(g, CellSet(g), x, r);
    CHECK(s.density_max == 0.0);
    CHECK(s.bound == 0.0);
  }
  SUBCASE("small square deep inside keeps the stripe empty") {
    CellSet a = box_set(g, -0.03, 0.03, -0.03, 0.03);
    SmallnessResult s = smallness_in_annuli_check(g, a, x, r);
    CHECK(s.density_max == 0.0);
    CHECK(s.solution.is_subset_of(ball(g, x, 0.25 * r)));
  }
  SUBCASE("hypothesis violation is caught") {
    CellSet a = ball(g, x, 0.4 * r);
    CHECK_THROWS_AS(smallness_in_annuli_check(g, a, x, r), PreconditionError);
  }
}

TEST_CASE("strong Cartan construction on the weighted grid") {
  auto g = build_grid(2, 1.0, 512, WeightSpec::power_law(-1.5));
  Point x{0.0, 0.0};
  double r = 0.8;
  CellSet chain = strong_cartan_chain(g, r);

  StrongCartanResult sc = strong_cartan_construct(g, chain, x, r, 4);
  CHECK_FALSE(sc.partial);
  CHECK(sc.levels_built == 4);
  REQUIRE(sc.divergence_witness.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(sc.divergence_witness[k - 1] == static_cast<double>(k));
  }
  CHECK(sc.value_at_x <= 1.0);
  SUBCASE("radii decrease and capacities fit their budgets") {
    for (int i = 0; i + 1 < sc.levels_built; ++i) CHECK(sc.radii[i] > sc.radii[i + 1]);
    for (int i = 0; i < sc.levels_built; ++i) CHECK(sc.capacities[i] < sc.budgets[i]);
  }
  SUBCASE("the stack is integer valued and nested") {
    for (double v : sc.stacked.values()) {
      CHECK(v == std::floor(v));
      CHECK(v >= 0.0);
      CHECK(v <= 4.0);
    }
    for (std::size_t i = 0; i + 1 < sc.nested_sets.size(); ++i) {
      CHECK(sc.nested_sets[i + 1].is_subset_of(sc.nested_sets[i]));
    }
  }
  SUBCASE("uniform grids are rejected") {
    auto u = build_grid(2, 1.0, 64, WeightSpec::uniform());
    CHECK_THROWS_AS(strong_cartan_construct(u, CellSet(u), x, 0.5, 2), PreconditionError);
  }
}

TEST_CASE("counterexample run at a reduced resolution keeps its exact rows") {
  // depth 0 resolves on a 512^2 grid over [-2,2]^2 (A_1 needs h <= 2e-3);
  // the full acceptance configuration (2048^2, depth 2) runs in the
  // acceptance suite
  CounterexampleReport ce = counterexample_run(0.1, 512, 0);
  CHECK(ce.resolved_depth >= 0);
  int fails = 0;
  for (const CheckRow& row : ce.report.rows) {
    if (row.status == CheckStatus::Fail) ++fails;
  }
  CHECK(fails == 0);

  SUBCASE("identity: the solution is the rasterized chain") {
    CHECK(ce.solution == ce.set_a);
  }
  SUBCASE("stripe density is exactly zero") {
    const CheckRow* row = nullptr;
    for (const CheckRow& r : ce.report.rows) {
      if (r.name == "ex59_stripe_density_zero") row = &r;
    }
    REQUIRE(row != nullptr);
    CHECK(row->lhs == 0.0);
    CHECK(row->status == CheckStatus::Pass);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(counterexample_run(0.3, 512, 1), InvalidArgument);
    CHECK_THROWS_AS(counterexample_run(0.1, 512, 1), ResolutionInsufficient);
  }
}
