#ifndef DSW_HYDRO_HPP
#define DSW_HYDRO_HPP

#include <utility>

namespace dsw {

// Madelung hydrodynamic state.  The admissible (hyperbolic) domain is
// rho >= 0, nu >= 0.
struct HydroState {
  double rho = 0.0;  // density
  double nu = 0.0;   // velocity
};

// Dispersionless Riemann invariants, l_plus >= l_minus >= 0.
struct DispersionlessPair {
  double l_minus = 0.0;
  double l_plus = 0.0;
};

// The line rho = 2 nu splits the hyperbolicity domain into two regions on
// which the state <-> invariant map is one-to-one.  Upper: rho >= 2 nu.
enum class Branch { Upper, Lower };

// l_pm = (sqrt(rho) +- sqrt(2 nu))^2 / 4.  Throws DomainError outside the
// hyperbolicity domain.
DispersionlessPair invariants_from_state(const HydroState& s);

// Inverse map on the chosen branch:
//   Upper: rho = (sqrt(l+) + sqrt(l-))^2,  nu = (sqrt(l+) - sqrt(l-))^2 / 2
//   Lower: rho = (sqrt(l+) - sqrt(l-))^2,  nu = (sqrt(l+) + sqrt(l-))^2 / 2
HydroState state_from_invariants(const DispersionlessPair& p, Branch b);

// Upper iff rho >= 2 nu (ties resolve to Upper).
Branch branch_of(const HydroState& s);

// Characteristic velocities of the dispersionless system,
//   v_pm = -(3/2)(5 l_pm^2 + 2 l_+ l_- + l_mp^2),
// returned as (v_minus, v_plus); v_plus <= v_minus <= 0.
std::pair<double, double> char_velocities(const DispersionlessPair& p);

double char_v_plus(double l_minus, double l_plus);
double char_v_minus(double l_minus, double l_plus);

}  // namespace dsw

#endif
