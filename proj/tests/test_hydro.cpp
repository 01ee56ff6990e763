#include "dsw/hydro.hpp"

#include <cmath>

#include "doctest.h"
#include "dsw/errors.hpp"
#include "test_util.hpp"

using namespace dsw;

TEST_CASE("invariants_from_state spot values") {
  auto p = invariants_from_state({2.0, 1.0});
  CHECK(p.l_minus == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.l_plus == doctest::Approx(2.0).epsilon(1e-14));

  p = invariants_from_state({4.0, 0.5});
  CHECK(p.l_minus == doctest::Approx(0.25));
  CHECK(p.l_plus == doctest::Approx(2.25));

  p = invariants_from_state({0.0, 0.8});
  CHECK(p.l_minus == doctest::Approx(0.4));
  CHECK(p.l_plus == doctest::Approx(0.4));

  CHECK_THROWS_AS(invariants_from_state({-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(invariants_from_state({1.0, -0.1}), DomainError);
}

TEST_CASE("state_from_invariants on both branches") {
  DispersionlessPair p{0.25, 2.25};
  auto up = state_from_invariants(p, Branch::Upper);
  CHECK(up.rho == doctest::Approx(4.0));
  CHECK(up.nu == doctest::Approx(0.5));
  auto lo = state_from_invariants(p, Branch::Lower);
  CHECK(lo.rho == doctest::Approx(1.0));
  CHECK(lo.nu == doctest::Approx(2.0));

  double c = 0.7;
  auto du = state_from_invariants({c, c}, Branch::Upper);
  CHECK(du.rho == doctest::Approx(4 * c));
  CHECK(du.nu == doctest::Approx(0.0));
  auto dl = state_from_invariants({c, c}, Branch::Lower);
  CHECK(dl.rho == doctest::Approx(0.0));
  CHECK(dl.nu == doctest::Approx(2 * c));
}

TEST_CASE("round trip through invariants") {
  testutil::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    HydroState s{rng.uniform(0.0, 6.0), rng.uniform(0.0, 3.0)};
    auto p = invariants_from_state(s);
    auto back = state_from_invariants(p, branch_of(s));
    CHECK(std::fabs(back.rho - s.rho) < 1e-12 * std::max(1.0, s.rho));
    CHECK(std::fabs(back.nu - s.nu) < 1e-12 * std::max(1.0, s.nu));
    if (branch_of(s) == Branch::Upper)
      CHECK(std::fabs(s.rho - 2 * s.nu - 4 * std::sqrt(p.l_plus * p.l_minus)) < 1e-12 * std::max(1.0, s.rho));
  }
}

TEST_CASE("branch boundary goes Upper") {
  CHECK(branch_of({2.0, 1.0}) == Branch::Upper);
  CHECK(branch_of({2.0, 1.0 + 1e-9}) == Branch::Lower);
}

TEST_CASE("characteristic velocities") {
  auto [vm, vp] = char_velocities({0.0, 2.0});
  CHECK(vm == doctest::Approx(-6.0));
  CHECK(vp == doctest::Approx(-30.0));
  auto z = char_velocities({0.0, 0.0});
  CHECK(z.first == 0.0);
  CHECK(z.second == 0.0);
  auto e = char_velocities({1.0, 1.0});
  CHECK(e.first == doctest::Approx(-12.0));
  CHECK(e.second == doctest::Approx(-12.0));

  testutil::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    double lm = rng.uniform(0.0, 3.0);
    double lp = lm + rng.uniform(0.0, 3.0);
    auto [a, b] = char_velocities({lm, lp});
    CHECK(a <= 0.0);
    CHECK(b <= a + 1e-12);
    if (lp > lm + 1e-9) CHECK(b < a);
  }
}

TEST_CASE("simple wave solves the Hopf equation") {
  // l_minus frozen; l_plus advected by v_plus.  The characteristic solution
  // l(x,t) = l0(x - v_plus(l) t) must satisfy l_t + v_plus l_x = 0.
  const double lm = 0.3;
  auto l0 = [](double x) { return 1.0 + 0.2 * std::tanh(x); };
  auto solve_l = [&](double x, double t) {
    double l = l0(x);  // fixed point iteration (small t keeps it contracting)
    for (int k = 0; k < 200; ++k) l = l0(x - char_v_plus(lm, l) * t);
    return l;
  };
  double t = 0.01, h = 1e-5;
  for (double x : {-0.7, 0.0, 0.9}) {
    double lt = (solve_l(x, t + h) - solve_l(x, t - h)) / (2 * h);
    double lx = (solve_l(x + h, t) - solve_l(x - h, t)) / (2 * h);
    double res = lt + char_v_plus(lm, solve_l(x, t)) * lx;
    CHECK(std::fabs(res) < 1e-5);
  }
}
