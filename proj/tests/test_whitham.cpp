#include "dsw/whitham.hpp"

#include <cmath>

#include "doctest.h"
#include "dsw/errors.hpp"
#include "dsw/hydro.hpp"
#include "dsw/onephase.hpp"
#include "test_util.hpp"

using namespace dsw;

namespace {

// Independent long-double transcription of the general velocities, fed by
// the long-double AGM oracle; used only to pin golden values.
std::array<long double, 4> general_oracle(long double l1, long double l2, long double l3,
                                          long double l4) {
  long double s1 = l1 + l2 + l3 + l4;
  long double s2 = l1 * l2 + l1 * l3 + l1 * l4 + l2 * l3 + l2 * l4 + l3 * l4;
  long double V = 2 * s2 - 1.5L * s1 * s1;
  long double m = ((l1 - l2) * (l3 - l4)) / ((l1 - l3) * (l2 - l4));
  auto ke = testutil::agm_oracle(m);
  long double K = ke.K, E = ke.E;
  return {
      V - 2 * (l1 - l2) * (l1 - l4) * (3 * l1 + l2 + l3 + l4) * K / ((l4 - l2) * E + (l1 - l4) * K),
      V - 2 * (l1 - l2) * (l2 - l3) * (l1 + 3 * l2 + l3 + l4) * K / ((l1 - l3) * E + (l3 - l2) * K),
      V - 2 * (l3 - l4) * (l2 - l3) * (l1 + l2 + 3 * l3 + l4) * K / ((l4 - l2) * E + (l2 - l3) * K),
      V - 2 * (l1 - l4) * (l4 - l3) * (l1 + l2 + l3 + 3 * l4) * K / ((l3 - l1) * E + (l1 - l4) * K)};
}

}  // namespace

TEST_CASE("closed-form limits at exact degeneracy") {
  auto v = whitham_velocities({{0, 1, 1, 2}, SignBranch::UpperSigns});
  CHECK(v[0] == doctest::Approx(-6.0));
  CHECK(v[1] == doctest::Approx(-14.0));
  CHECK(v[2] == doctest::Approx(-14.0));
  CHECK(v[3] == doctest::Approx(-30.0));

  v = whitham_velocities({{0, 0, 1, 2}, SignBranch::UpperSigns});
  CHECK(v[0] == doctest::Approx(-1.5));
  CHECK(v[1] == doctest::Approx(-1.5));
  CHECK(v[2] == doctest::Approx(-19.5));
  CHECK(v[3] == doctest::Approx(-37.5));

  // l3 -> l4 merge: V(l1,l2,l4,l4) minus the rational correction.  The
  // corrected sign follows the limit of the general expressions (and is
  // required for edge ordering); at (0,1,2,2) it gives -45.5, not +2.5.
  v = whitham_velocities({{0, 1, 2, 2}, SignBranch::UpperSigns});
  CHECK(v[0] == doctest::Approx(-1.5));
  CHECK(v[1] == doctest::Approx(-7.5));
  CHECK(v[2] == doctest::Approx(-45.5));
  CHECK(v[3] == doctest::Approx(-45.5));
  CHECK(v_merge34(0, 1, 2) == doctest::Approx(-21.5 - 24.0));

  auto c = whitham_velocities({{0.7, 0.7, 0.7, 0.7}, SignBranch::UpperSigns});
  for (double vi : c) CHECK(vi == doctest::Approx(-12 * 0.49));
}

TEST_CASE("golden general values at (0.25, 1, 2.25, 4)") {
  auto v = whitham_velocities({{0.25, 1.0, 2.25, 4.0}, SignBranch::UpperSigns});
  // frozen from the long-double oracle below (and cross-checked at higher
  // precision externally)
  CHECK(v[0] == doctest::Approx(-8.8989071317684368).epsilon(1e-13));
  CHECK(v[1] == doctest::Approx(-16.289425997703342).epsilon(1e-13));
  CHECK(v[2] == doctest::Approx(-87.437679186281566).epsilon(1e-13));
  CHECK(v[3] == doctest::Approx(-153.23053282558366).epsilon(1e-13));
  auto o = general_oracle(0.25L, 1.0L, 2.25L, 4.0L);
  for (int i = 0; i < 4; ++i)
    CHECK(std::fabs(v[i] - static_cast<double>(o[i])) < 1e-12 * std::fabs(v[i]));
}

TEST_CASE("limit consistency: merged pairs converge to closed forms") {
  testutil::Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    double l1 = rng.uniform(0.01, 1.0);
    double g1 = rng.uniform(0.2, 1.0), g2 = rng.uniform(0.2, 1.0);

    // m -> 1 (l2 -> l3): v2, v3 converge; v1, v4 converge only like 1/K.
    {
      double l3 = l1 + g1, l4 = l3 + g2, l2 = l3 - 1e-8;
      auto v = whitham_velocities({{l1, l2, l3, l4}, SignBranch::UpperSigns});
      double lim = v_merge23(l1, l3, l4);
      CHECK(std::fabs(v[1] - lim) < 1e-4 * std::fabs(lim));
      CHECK(std::fabs(v[2] - lim) < 1e-4 * std::fabs(lim));
    }
    // m -> 0 (l2 -> l1): all four converge algebraically.
    {
      double l2 = l1 + 1e-8, l3 = l1 + g1, l4 = l3 + g2;
      auto v = whitham_velocities({{l1, l2, l3, l4}, SignBranch::UpperSigns});
      auto lim = limit_velocities_12(l1, l3, l4);
      for (int k = 0; k < 4; ++k)
        CHECK(std::fabs(v[k] - lim[k]) < 1e-4 * std::max(1.0, std::fabs(lim[k])));
    }
    // m -> 0 (l3 -> l4): all four converge algebraically.
    {
      double l2 = l1 + g1, l4 = l2 + g2, l3 = l4 - 1e-8;
      auto v = whitham_velocities({{l1, l2, l3, l4}, SignBranch::UpperSigns});
      auto lim = limit_velocities_34(l1, l2, l4);
      for (int k = 0; k < 4; ++k)
        CHECK(std::fabs(v[k] - lim[k]) < 1e-4 * std::max(1.0, std::fabs(lim[k])));
    }
  }
}

TEST_CASE("continuity across the degeneracy switch") {
  // the switch sits at m (or 1-m) = 1e-8; straddle it and compare
  testutil::Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    double l1 = rng.uniform(0.01, 1.0);
    double l3 = l1 + rng.uniform(0.3, 1.0);
    double l4 = l3 + rng.uniform(0.3, 1.0);
    // l2 gaps placing m just below / just above the 1e-8 switch
    double denom = (l3 - l1) * (l4 - l1);  // ~ (l1-l3)(l2-l4) at l2 ~ l1
    double g_lo = 0.5e-8 * denom / (l4 - l3);
    double g_hi = 2.0e-8 * denom / (l4 - l3);
    auto va = whitham_velocities({{l1, l1 + g_lo, l3, l4}, SignBranch::UpperSigns});
    auto vb = whitham_velocities({{l1, l1 + g_hi, l3, l4}, SignBranch::UpperSigns});
    for (int k = 0; k < 4; ++k)
      CHECK(std::fabs(va[k] - vb[k]) < 1e-5 * std::max(1.0, std::fabs(va[k])));
  }
}

TEST_CASE("soliton edge moves with the phase velocity") {
  testutil::Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    double l1 = rng.uniform(0.0, 1.0);
    double l23 = l1 + rng.uniform(0.05, 1.5);
    double l4 = l23 + rng.uniform(0.05, 1.5);
    ModulationState ms{{l1, l23, l23, l4}, SignBranch::UpperSigns};
    auto v = whitham_velocities(ms);
    double V = phase_velocity(ms);
    CHECK(std::fabs(v[1] - V) < 1e-10 * std::max(1.0, std::fabs(V)));
    CHECK(std::fabs(v[2] - V) < 1e-10 * std::max(1.0, std::fabs(V)));
  }
}

TEST_CASE("dispersionless reduction at the harmonic edges") {
  testutil::Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    double a = rng.uniform(0.0, 1.0);
    double b = a + rng.uniform(0.05, 1.5);
    double c = b + rng.uniform(0.05, 1.5);
    // l2 = l1: (v3, v4) are the characteristic velocities of (l3, l4)
    auto v = whitham_velocities({{a, a, b, c}, SignBranch::UpperSigns});
    CHECK(std::fabs(v[2] - char_v_minus(b, c)) < 1e-10 * std::max(1.0, std::fabs(v[2])));
    CHECK(std::fabs(v[3] - char_v_plus(b, c)) < 1e-10 * std::max(1.0, std::fabs(v[3])));
    // l3 = l4: (v1, v2) are the characteristic velocities of (l1, l2)
    v = whitham_velocities({{a, b, c, c}, SignBranch::UpperSigns});
    CHECK(std::fabs(v[0] - char_v_minus(a, b)) < 1e-10 * std::max(1.0, std::fabs(v[0])));
    CHECK(std::fabs(v[1] - char_v_plus(a, b)) < 1e-10 * std::max(1.0, std::fabs(v[1])));
  }
}

TEST_CASE("invalid ordering rejected") {
  CHECK_THROWS_AS(whitham_velocities({{1.0, 0.5, 2.0, 3.0}, SignBranch::UpperSigns}), DomainError);
}
