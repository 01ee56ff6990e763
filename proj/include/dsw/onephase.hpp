#ifndef DSW_ONEPHASE_HPP
#define DSW_ONEPHASE_HPP

#include <array>
#include <functional>

namespace dsw {

// Sign rows of the map from modulation invariants to the turning-point
// densities.  UpperSigns pairs with the High oscillation band of a cnoidal
// DSW, LowerSigns with the Low band; contact structures swap the bands.
enum class SignBranch { UpperSigns, LowerSigns };

// Ordered modulation invariants 0 <= l1 <= l2 <= l3 <= l4 plus the sign
// row selecting one of the two density mappings.
struct ModulationState {
  std::array<double, 4> l{};
  SignBranch signs = SignBranch::UpperSigns;
};

// Turning points rho1 <= rho2 <= rho3 <= rho4 of the density oscillation;
// -R(rho) >= 0 exactly on [rho1,rho2] U [rho3,rho4].
struct WaveParams {
  std::array<double, 4> rho{};
};

// Which band the density oscillates in.
enum class OscInterval { Low, High };   // [rho1,rho2] vs [rho3,rho4]

// Throws DomainError if the invariants are unordered or negative.
void validate(const ModulationState& ms);

// Turning-point densities for the chosen sign row, sorted ascending.
WaveParams wave_params(const ModulationState& ms);

struct ModulusWavelength {
  double m = 0.0;  // elliptic parameter in [0,1]
  double L = 0.0;  // spatial period of the density oscillation
};

// m = (l1-l2)(l3-l4) / ((l1-l3)(l2-l4)),  L = 2K(m)/sqrt((l3-l1)(l4-l2)).
// Throws DegenerateError when l1 = l3 or l2 = l4.
ModulusWavelength modulus_and_wavelength(const ModulationState& ms);

// Phase -> angular argument scale: omega = (1/4) sqrt((rho3-rho1)(rho4-rho2)) xi.
double omega_scale(const WaveParams& wp);

// One-phase density at phase xi.  Low band: rho(0) = rho1, rho = rho2 at
// omega = K(m).  High band: rho(0) = rho4, rho = rho3 at omega = K(m).
double density_profile(double xi, const WaveParams& wp, double m, OscInterval band);

enum class LimitKind { Soliton, Trig };

// Degenerate profiles: Soliton requires rho2 = rho3 (m = 1); Trig requires
// rho1 = rho2 or rho3 = rho4 (m = 0).  Returns rho as a function of xi.
// Throws DomainError when the required degeneracy is absent.
std::function<double(double)> limit_profile(const WaveParams& wp, OscInterval band,
                                            LimitKind kind);

// Monic quartic prod_i (rho - rho_i).
double quartic_R(double rho, const WaveParams& wp);

// V = 2 sum_{i<j} l_i l_j - (3/2) (sum_i l_i)^2; the traveling-wave speed.
double phase_velocity(const ModulationState& ms);

}  // namespace dsw

#endif
