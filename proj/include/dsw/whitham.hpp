#ifndef DSW_WHITHAM_HPP
#define DSW_WHITHAM_HPP

#include <array>

#include "dsw/onephase.hpp"

namespace dsw {

// The four characteristic velocities of the modulation system.  Near the
// degenerate ends the 0/0 pair switches to its closed-form limit:
//   l2 -> l3 (m -> 1): v2 = v3 merge (soliton edge),
//   l2 -> l1 (m -> 0): v1 = v2 merge (harmonic edge, type i),
//   l3 -> l4 (m -> 0): v3 = v4 merge (harmonic edge, type ii).
// The non-degenerate components keep the general expression, which stays
// finite there and converges to its own limit only logarithmically.
std::array<double, 4> whitham_velocities(const ModulationState& ms);

// Closed-form merged velocities at the three degeneracies.
double v_merge23(double l1, double l23, double l4);            // m -> 1
double v_merge12(double l12, double l3, double l4);            // m -> 0, l2 -> l1
double v_merge34(double l1, double l2, double l34);            // m -> 0, l3 -> l4

// Companion (non-merging) closed forms at exact degeneracy.
std::array<double, 4> limit_velocities_23(double l1, double l23, double l4);
std::array<double, 4> limit_velocities_12(double l12, double l3, double l4);
std::array<double, 4> limit_velocities_34(double l1, double l2, double l34);

}  // namespace dsw

#endif
