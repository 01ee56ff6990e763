#ifndef DSW_HODOGRAPH_HPP
#define DSW_HODOGRAPH_HPP

#include "dsw/hydro.hpp"
#include "dsw/onephase.hpp"

namespace dsw {

// Background data of the cubic-root breaking problem: the frozen lower
// invariant and the upper invariant at the breaking point (x = 0, t = 0).
struct CubicBreakData {
  double l_minus = 0.0;  // constant l- background
  double l_plus = 1.0;   // l+ at the breaking point
};

// Coefficients of the truncated generating-function expansion matched so
// the soliton edge continues the cubic dispersionless profile.
struct HodographCoeffs {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 16.0 / 35.0;
};

HodographCoeffs hodograph_coefficients(const CubicBreakData& d);

// omega_i(l) = sum_k C^(k) (1 - (L / d_i L) d_i) W^(k),  i in 1..4.
// Derivatives of the wavelength are analytic (dK/dm form).  Throws
// DegenerateError when the wavelength (or its derivative) is undefined.
double omega(int i, const ModulationState& ms, const CubicBreakData& d);

// Closed-form soliton-edge limit of omega_4 (l3 -> l2, where L/d4L tends
// to -2(l4 - l2)); equals (l4 - l_plus)^3 by the choice of coefficients.
double omega4_at_soliton_edge(double l4, const CubicBreakData& d);

struct EdgeLaws {
  double xL = 0.0;                  // small-amplitude edge position
  double xR = 0.0;                  // soliton edge position
  double l4_soliton = 0.0;          // l4 carried by the soliton edge
  double l4_small_amplitude = 0.0;  // merged l3 = l4 value at the xL edge
};

// Closed-form soliton edge and parametric small-amplitude edge at time t.
EdgeLaws edge_laws(double t, const CubicBreakData& d);

// Modulation state inside the fan: l1 = l-, l2 = l+ frozen, (l3, l4)
// solving x - v_i t = omega_i for i = 3, 4 simultaneously.
// Throws OutOfRegionError outside [xL(t), xR(t)].
ModulationState solve_cubic_modulation(double x, double t, const CubicBreakData& d);

// Dispersionless continuation outside the fan (or any x when t <= 0):
// l+ solves  x + (3/2)(5 l+^2 + 2 l+ l- + l-^2) t = (l+ - l+L)^3  on the
// branch continuous with the far field of the chosen side.
DispersionlessPair dispersionless_profile(double x, double t, const CubicBreakData& d);

}  // namespace dsw

#endif
