#ifndef DSW_RIEMANN_HPP
#define DSW_RIEMANN_HPP

#include <array>
#include <vector>

#include "dsw/hydro.hpp"
#include "dsw/onephase.hpp"

namespace dsw {

// Step (Riemann) initial data with the derived invariants and branches.
struct StepData {
  HydroState left, right;
  DispersionlessPair inv_left, inv_right;
  Branch branch_left = Branch::Upper, branch_right = Branch::Upper;

  static StepData from_states(const HydroState& l, const HydroState& r);
};

enum class CaseLetter { A, B, C, D, E, F };

// SameSide: both boundary states in one monotonicity region of rho = 2 nu;
// CrossSide: the pattern additionally carries a trailing contact DSW.
enum class SideMode { SameSide, CrossSide };

struct PatternCase {
  CaseLetter letter;
  SideMode side;
};

enum class RegionKind { Plateau, Rarefaction, CnoidalDsw, CnoidalZone, ContactDsw, VacuumFan };

// One self-similar region.  The modulation 4-tuple interpolates between
// l_lo (at z_lo) and l_hi (at z_hi); the entries flagged in vary_mask move
// together, all others are frozen.
struct Region {
  RegionKind kind = RegionKind::Plateau;
  double z_lo = 0.0, z_hi = 0.0;            // infinite for outer plateaus
  std::array<double, 4> l_lo{}, l_hi{};
  unsigned vary_mask = 0;                   // bit i => l[i] varies
  int whitham_index = -1;                   // v_{i}(l) = z for cnoidal fans
};

struct VacuumFlag {
  int region = 0;
  SignBranch mapping = SignBranch::LowerSigns;
  bool at_soliton_edge = false;
  double z = 0.0;  // location of the vanishing envelope minimum
};

struct WavePattern {
  PatternCase pcase{};
  StepData data{};
  std::vector<Region> regions;              // leftmost plateau ... rightmost plateau
  std::vector<double> edge_speeds;          // s1..s4 (s5 appended for CrossSide)
  std::vector<DispersionlessPair> plateaus; // left, [middle], right
  std::vector<VacuumFlag> vacuum_flags;

  // cumulative oscillation cycle counts per region (empty when smooth):
  // N(x) = t * cycles(z) measured from the region anchor.
  std::vector<std::vector<double>> phase_cycles;
  std::vector<int> phase_anchor_hi;         // 1 if anchored at z_hi (soliton there)
};

// Per-mapping sample: reconstructed density, slow mean-flow velocity, and
// the local envelope of the oscillation band.
struct MappingSample {
  double rho = 0.0;                    // reconstructed oscillation sample
  double rho_mean = 0.0;               // period average of the band profile
  double nu = 0.0;                     // slow mean-flow estimate
  double env_min = 0.0, env_max = 0.0;
  std::array<double, 4> turning_points{};  // local rho_1..rho_4
};

struct PatternSample {
  std::array<double, 4> invariants{};
  int region = 0;
  MappingSample upper, lower;
  double env_min = 0.0, env_max = 0.0;      // combined over the two mappings
};

// Classify step data into one of the twelve cases.  Ties within 1e-10
// (relative) are treated as equalities and fold into the adjacent case.
PatternCase classify(const StepData& sd);

// Edge speeds s1..s4 (plus s5 for CrossSide), weakly increasing.
std::vector<double> edge_speeds(const PatternCase& pc, const StepData& sd);

// with_phase_tables = false skips the oscillation-phase integrals (bulk
// sweeps that only query invariants); reconstruction then samples the
// anchor phase of each fan.
WavePattern build_pattern(const StepData& sd, bool with_phase_tables = true);

// Invariant 4-tuple at self-similar coordinate z = x/t (cheap path).
std::array<double, 4> sample_invariants(const WavePattern& wp, double z);

// Full sample at (x, t), t > 0.  Oscillation phase is accumulated from the
// soliton edge of each fan; envelopes and invariants depend on z only.
PatternSample sample_pattern(const WavePattern& wp, double x, double t);

}  // namespace dsw

#endif
