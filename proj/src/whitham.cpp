#include "dsw/whitham.hpp"

#include <algorithm>
#include <cmath>

#include "dsw/errors.hpp"
#include "dsw/hydro.hpp"
#include "dsw/specfun.hpp"

namespace dsw {

namespace {

constexpr double kMSwitch = 1e-8;   // parameter distance from a degenerate end
constexpr double kTieTol = 1e-13;   // exact-degeneracy tie tolerance (relative)

double phase_velocity4(const std::array<double, 4>& l) {
  double s1 = l[0] + l[1] + l[2] + l[3];
  double s2 = l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3];
  return 2.0 * s2 - 1.5 * s1 * s1;
}

}  // namespace

double v_merge23(double l1, double l23, double l4) {
  return 0.5 * (-3.0 * l1 * l1 - 8.0 * l23 * l23 - 4.0 * l23 * l4 - 3.0 * l4 * l4 -
                2.0 * l1 * (2.0 * l23 + l4));
}

double v_merge12(double l12, double l3, double l4) {
  double num = 48.0 * l12 * l12 * l12 - 6.0 * l12 * (l3 - l4) * (l3 - l4) -
               24.0 * l12 * l12 * (l3 + l4) - 3.0 * (l3 - l4) * (l3 - l4) * (l3 + l4);
  double den = 4.0 * l12 - 2.0 * (l3 + l4);
  if (den == 0.0) throw SolverError("v_merge12: singular configuration 2 l1 = l3 + l4");
  return -num / den;
}

double v_merge34(double l1, double l2, double l34) {
  // V(l1,l2,l34,l34) minus the rational correction; the subtracted sign is
  // fixed by the limit of the general expressions and by edge ordering.
  double head = 0.5 * (-3.0 * l1 * l1 - 3.0 * l2 * l2 - 4.0 * l2 * l34 - 8.0 * l34 * l34 -
                       2.0 * l1 * (2.0 * l34 + l2));
  double den = l1 + l2 - 2.0 * l34;
  if (den == 0.0) throw SolverError("v_merge34: singular configuration 2 l4 = l1 + l2");
  double corr = 4.0 * (l1 - l34) * (l34 - l2) * (l1 + l2 + 4.0 * l34) / den;
  return head - corr;
}

std::array<double, 4> limit_velocities_23(double l1, double l23, double l4) {
  double v23 = v_merge23(l1, l23, l4);
  return {char_v_minus(l1, l4), v23, v23, char_v_plus(l1, l4)};
}

std::array<double, 4> limit_velocities_12(double l12, double l3, double l4) {
  double v12 = v_merge12(l12, l3, l4);
  return {v12, v12, char_v_minus(l3, l4), char_v_plus(l3, l4)};
}

std::array<double, 4> limit_velocities_34(double l1, double l2, double l34) {
  double v34 = v_merge34(l1, l2, l34);
  return {char_v_minus(l1, l2), char_v_plus(l1, l2), v34, v34};
}

std::array<double, 4> whitham_velocities(const ModulationState& ms) {
  validate(ms);
  const auto& l = ms.l;
  double scale = std::max(l[3], 1e-300);
  double g12 = l[1] - l[0], g23 = l[2] - l[1], g34 = l[3] - l[2];

  // Fully merged pairs: the dispersionless / exact-degenerate cases.
  bool tie12 = g12 <= kTieTol * scale;
  bool tie23 = g23 <= kTieTol * scale;
  bool tie34 = g34 <= kTieTol * scale;
  if (tie23) return limit_velocities_23(l[0], 0.5 * (l[1] + l[2]), l[3]);
  if (tie12 && tie34) {
    double a = 0.5 * (l[0] + l[1]), b = 0.5 * (l[2] + l[3]);
    return {char_v_minus(a, b), char_v_minus(a, b), char_v_plus(a, b), char_v_plus(a, b)};
  }
  if (tie12) return limit_velocities_12(0.5 * (l[0] + l[1]), l[2], l[3]);
  if (tie34) return limit_velocities_34(l[0], l[1], 0.5 * (l[2] + l[3]));

  double d13 = l[2] - l[0], d24 = l[3] - l[1];
  double m = (g12 * g34) / (d13 * d24);
  m = std::clamp(m, 0.0, 1.0);
  double one_minus_m = g23 * (l[3] - l[0]) / (d13 * d24);

  double V = phase_velocity4(l);
  double K, E;
  if (one_minus_m < 1e-10) {
    // asymptotics from the stably computed gap, not the clamped m
    K = 0.5 * std::log(16.0 / one_minus_m);
    E = 1.0 + 0.5 * one_minus_m * (0.5 * std::log(16.0 / one_minus_m) - 0.5);
  } else {
    K = specfun::ellip_K(m);
    E = specfun::ellip_E(m);
  }

  auto gen1 = [&] {
    return V - 2.0 * (l[0] - l[1]) * (l[0] - l[3]) * (3.0 * l[0] + l[1] + l[2] + l[3]) * K /
                   ((l[3] - l[1]) * E + (l[0] - l[3]) * K);
  };
  auto gen2 = [&] {
    return V - 2.0 * (l[0] - l[1]) * (l[1] - l[2]) * (l[0] + 3.0 * l[1] + l[2] + l[3]) * K /
                   ((l[0] - l[2]) * E + (l[2] - l[1]) * K);
  };
  auto gen3 = [&] {
    return V - 2.0 * (l[2] - l[3]) * (l[1] - l[2]) * (l[0] + l[1] + 3.0 * l[2] + l[3]) * K /
                   ((l[3] - l[1]) * E + (l[1] - l[2]) * K);
  };
  auto gen4 = [&] {
    return V - 2.0 * (l[0] - l[3]) * (l[3] - l[2]) * (l[0] + l[1] + l[2] + 3.0 * l[3]) * K /
                   ((l[2] - l[0]) * E + (l[0] - l[3]) * K);
  };

  std::array<double, 4> v{};
  if (one_minus_m < kMSwitch) {
    double v23 = v_merge23(l[0], 0.5 * (l[1] + l[2]), l[3]);
    v = {gen1(), v23, v23, gen4()};
  } else if (m < kMSwitch && g12 * d13 <= g34 * d24) {
    double v12 = v_merge12(0.5 * (l[0] + l[1]), l[2], l[3]);
    v = {v12, v12, gen3(), gen4()};
  } else if (m < kMSwitch) {
    double v34 = v_merge34(l[0], l[1], 0.5 * (l[2] + l[3]));
    v = {gen1(), gen2(), v34, v34};
  } else {
    v = {gen1(), gen2(), gen3(), gen4()};
  }
  return v;
}

}  // namespace dsw
