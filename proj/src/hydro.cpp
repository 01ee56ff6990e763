#include "dsw/hydro.hpp"

#include <cmath>
#include <string>

#include "dsw/errors.hpp"

namespace dsw {

DispersionlessPair invariants_from_state(const HydroState& s) {
  if (!(s.rho >= 0.0) || !(s.nu >= 0.0))
    throw DomainError("invariants_from_state: need rho >= 0 and nu >= 0, got rho=" +
                      std::to_string(s.rho) + " nu=" + std::to_string(s.nu));
  double a = std::sqrt(s.rho), b = std::sqrt(2.0 * s.nu);
  double lm = 0.25 * (a - b) * (a - b);
  double lp = 0.25 * (a + b) * (a + b);
  return {lm, lp};
}

HydroState state_from_invariants(const DispersionlessPair& p, Branch b) {
  double sp = std::sqrt(p.l_plus), sm = std::sqrt(p.l_minus);
  if (b == Branch::Upper)
    return {(sp + sm) * (sp + sm), 0.5 * (sp - sm) * (sp - sm)};
  return {(sp - sm) * (sp - sm), 0.5 * (sp + sm) * (sp + sm)};
}

Branch branch_of(const HydroState& s) {
  return s.rho >= 2.0 * s.nu ? Branch::Upper : Branch::Lower;
}

double char_v_plus(double lm, double lp) {
  return -1.5 * (5.0 * lp * lp + 2.0 * lp * lm + lm * lm);
}

double char_v_minus(double lm, double lp) {
  return -1.5 * (5.0 * lm * lm + 2.0 * lp * lm + lp * lp);
}

std::pair<double, double> char_velocities(const DispersionlessPair& p) {
  return {char_v_minus(p.l_minus, p.l_plus), char_v_plus(p.l_minus, p.l_plus)};
}

}  // namespace dsw
