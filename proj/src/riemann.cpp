#include "dsw/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsw/errors.hpp"
#include "dsw/specfun.hpp"
#include "dsw/whitham.hpp"

namespace dsw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-10;       // classification tie tolerance (relative)
constexpr int kPhaseNodes = 513;

double sq(double x) { return x * x; }

// ---------------------------------------------------------------- regions

std::array<double, 4> tuple_at(const Region& r, double val) {
  std::array<double, 4> l = r.l_lo;
  for (int i = 0; i < 4; ++i)
    if (r.vary_mask & (1u << i)) l[static_cast<size_t>(i)] = val;
  return l;
}

int first_vary(const Region& r) {
  for (int i = 0; i < 4; ++i)
    if (r.vary_mask & (1u << i)) return i;
  return -1;
}

// velocity of the varying invariant as a function of its value
double fan_velocity(const Region& r, double val) {
  switch (r.kind) {
    case RegionKind::Rarefaction:
      if (r.vary_mask == 0b1100u) return char_v_plus(r.l_lo[0], val);
      return char_v_minus(val, r.l_lo[2]);
    case RegionKind::VacuumFan:
      return -12.0 * val * val;
    case RegionKind::ContactDsw:
      return v_merge12(val, r.l_lo[2], r.l_lo[3]);
    case RegionKind::CnoidalDsw: {
      auto v = whitham_velocities({tuple_at(r, val), SignBranch::UpperSigns});
      return v[static_cast<size_t>(r.whitham_index)];
    }
    default:
      throw SolverError("fan_velocity: region has no fan");
  }
}

// Solve fan_velocity(val) = z for val between the region's end values.
// A 64-point scan locates sign changes; if several exist, the bracket whose
// midpoint lies closest to the linear interpolation in z wins (the branch
// continuous in z across non-monotone stretches of the non-convex system).
double solve_region_value(const Region& r, double z) {
  int iv = first_vary(r);
  double va = r.l_lo[static_cast<size_t>(iv)];
  double vb = r.l_hi[static_cast<size_t>(iv)];
  if (va == vb) return va;
  if (r.kind == RegionKind::VacuumFan) return std::sqrt(std::max(0.0, -z) / 12.0);
  if (r.kind == RegionKind::Rarefaction) {
    double fixed = (r.vary_mask == 0b1100u) ? r.l_lo[0] : r.l_lo[2];
    double disc = -4.0 * fixed * fixed - 10.0 * z / 3.0;
    double val = (-fixed + std::sqrt(std::max(0.0, disc))) / 5.0;
    return std::clamp(val, std::min(va, vb), std::max(va, vb));
  }

  double lo = std::min(va, vb), hi = std::max(va, vb);
  double frac = (r.z_hi > r.z_lo) ? std::clamp((z - r.z_lo) / (r.z_hi - r.z_lo), 0.0, 1.0) : 0.0;
  double guess = va + (vb - va) * frac;

  const int NS = 64;
  double best_a = lo, best_b = hi, best_d = kInf;
  double fprev = fan_velocity(r, lo) - z;
  double xprev = lo;
  bool found = false;
  for (int i = 1; i <= NS; ++i) {
    double x = std::min(lo + (hi - lo) * i / NS, hi);
    double f = fan_velocity(r, x) - z;
    if (fprev == 0.0 || fprev * f <= 0.0) {
      double mid = 0.5 * (xprev + x);
      double d = std::fabs(mid - guess);
      if (d < best_d) {
        best_d = d;
        best_a = xprev;
        best_b = x;
        found = true;
      }
    }
    fprev = f;
    xprev = x;
  }
  if (!found) {
    // z marginally outside the fan (round-off at an edge): clamp
    double fa = fan_velocity(r, lo) - z;
    double fb = fan_velocity(r, hi) - z;
    return std::fabs(fa) <= std::fabs(fb) ? lo : hi;
  }
  double a = best_a, b = best_b;
  double fa = fan_velocity(r, a) - z;
  for (int it = 0; it < 100; ++it) {
    double m = 0.5 * (a + b);
    double fm = fan_velocity(r, m) - z;
    if (fa * fm <= 0.0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
    if (b - a < 1e-15 * std::max(1.0, std::fabs(b))) break;
  }
  return std::clamp(0.5 * (a + b), lo, hi);
}

std::array<double, 4> region_invariants_at(const Region& r, double z) {
  if (r.vary_mask == 0u) return r.l_lo;
  double zc = std::clamp(z, r.z_lo, r.z_hi);
  return tuple_at(r, solve_region_value(r, zc));
}

// ------------------------------------------------------- band bookkeeping

bool region_oscillates(RegionKind k) {
  return k == RegionKind::CnoidalDsw || k == RegionKind::CnoidalZone ||
         k == RegionKind::ContactDsw;
}

// Physical oscillation band per density mapping, fixed by which band
// pinches at the region's degenerate edge.
OscInterval region_band(const Region& r, SignBranch mapping) {
  if (r.kind == RegionKind::ContactDsw)
    return mapping == SignBranch::UpperSigns ? OscInterval::Low : OscInterval::High;
  if (r.kind == RegionKind::CnoidalDsw && r.whitham_index == 1)  // l2 varies
    return mapping == SignBranch::UpperSigns ? OscInterval::High : OscInterval::Low;
  // l3-varying fans and the constant cnoidal zone: Low on both mappings
  return OscInterval::Low;
}

struct BandInterval {
  double lo, hi;
};

BandInterval band_interval(const std::array<double, 4>& l, SignBranch mapping,
                           OscInterval band) {
  auto wp = wave_params({l, mapping});
  if (band == OscInterval::Low) return {wp.rho[0], wp.rho[1]};
  return {wp.rho[2], wp.rho[3]};
}

// Slow mean-flow estimate inside the fans: the effective dispersionless
// pair interpolates in sqrt-space between the pairs the two edges of the
// region collapse to.
void mean_flow(const Region& r, const std::array<double, 4>& l, double& nu_u, double& nu_l) {
  double A = std::sqrt(l[0]), B = std::sqrt(l[1]), C = std::sqrt(l[2]), D = std::sqrt(l[3]);
  switch (r.kind) {
    case RegionKind::CnoidalDsw:
      if (r.whitham_index == 1) {  // (l1,.,l3,l4) frozen, l2 varies
        double w = A + C - B;
        nu_u = 0.5 * sq(D - w);
        nu_l = 0.5 * sq(D + w);
      } else {                     // (l1,l2,.,l4) frozen, l3 varies
        double w = B + D - C;
        nu_u = 0.5 * sq(w - A);
        nu_l = 0.5 * sq(w + A);
      }
      return;
    case RegionKind::CnoidalZone: {
      double w = B + D - C;
      nu_u = 0.5 * sq(w - A);
      nu_l = 0.5 * sq(w + A);
      return;
    }
    case RegionKind::ContactDsw:   // (c,c,l3,l4), c = l[0]
      nu_u = 0.5 * sq(C + D - 2.0 * A);
      nu_l = 0.5 * sq(2.0 * A + D - C);
      return;
    case RegionKind::VacuumFan:
      nu_u = 0.0;
      nu_l = 2.0 * l[0];
      return;
    default: {
      nu_u = 0.5 * sq(D - A);
      nu_l = 0.5 * sq(D + A);
      return;
    }
  }
}

double tie_scale(const StepData& sd) {
  return std::max({sd.inv_left.l_plus, sd.inv_right.l_plus, 1e-30});
}

}  // namespace

StepData StepData::from_states(const HydroState& l, const HydroState& r) {
  StepData sd;
  sd.left = l;
  sd.right = r;
  sd.inv_left = invariants_from_state(l);
  sd.inv_right = invariants_from_state(r);
  sd.branch_left = branch_of(l);
  sd.branch_right = branch_of(r);
  return sd;
}

PatternCase classify(const StepData& sd) {
  double aL = sd.inv_left.l_minus, bL = sd.inv_left.l_plus;
  double aR = sd.inv_right.l_minus, bR = sd.inv_right.l_plus;
  double tol = kTie * tie_scale(sd);

  SideMode side = (sd.branch_left == sd.branch_right) ? SideMode::SameSide : SideMode::CrossSide;
  CaseLetter letter;
  if (bR < aL - tol)
    letter = CaseLetter::A;
  else if (aR > bL + tol)
    letter = CaseLetter::F;
  else if (aR <= aL + tol)
    letter = (bR <= bL + tol) ? CaseLetter::B : CaseLetter::D;
  else
    letter = (bR <= bL + tol) ? CaseLetter::C : CaseLetter::E;
  return {letter, side};
}

std::vector<double> edge_speeds(const PatternCase& pc, const StepData& sd) {
  double aL = sd.inv_left.l_minus, bL = sd.inv_left.l_plus;
  double aR = sd.inv_right.l_minus, bR = sd.inv_right.l_plus;

  std::vector<double> s;
  switch (pc.letter) {
    case CaseLetter::A:
      s = {char_v_plus(aL, bL), -12.0 * aL * aL, -12.0 * bR * bR, char_v_minus(aR, bR)};
      break;
    case CaseLetter::B:
      s = {char_v_plus(aL, bL), char_v_plus(aL, bR), char_v_minus(aL, bR),
           char_v_minus(aR, bR)};
      break;
    case CaseLetter::C:
      s = {char_v_plus(aL, bL), char_v_plus(aL, bR), v_merge23(aL, aR, bR),
           v_merge12(aL, aR, bR)};
      break;
    case CaseLetter::D:
      s = {v_merge34(aL, bL, bR), v_merge23(aL, bL, bR), char_v_minus(aL, bR),
           char_v_minus(aR, bR)};
      break;
    case CaseLetter::E:
      s = {v_merge34(aL, bL, bR), v_merge23(aL, bL, bR), v_merge23(aL, aR, bR),
           v_merge12(aL, aR, bR)};
      break;
    case CaseLetter::F: {
      auto v = whitham_velocities({{aL, bL, aR, bR}, SignBranch::UpperSigns});
      s = {v_merge34(aL, bL, bR), v[2], v[1], v_merge12(aL, aR, bR)};
      break;
    }
  }
  if (pc.side == SideMode::CrossSide) s.push_back(-1.5 * sq(aR - bR));

  for (double si : s)
    if (!std::isfinite(si)) throw SolverError("edge_speeds: non-finite speed");
  for (size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] > s[i + 1] + 1e-9 * std::max(1.0, std::fabs(s[i])))
      throw SolverError("edge_speeds: speeds not weakly increasing");
  return s;
}

namespace {

Region make_plateau(double z_lo, double z_hi, double lm, double lp) {
  Region r;
  r.kind = RegionKind::Plateau;
  r.z_lo = z_lo;
  r.z_hi = z_hi;
  r.l_lo = r.l_hi = {lm, lm, lp, lp};
  return r;
}

Region make_rarefaction(double z_lo, double z_hi, double fixed, double from, double to,
                        bool upper_varies) {
  Region r;
  r.kind = RegionKind::Rarefaction;
  r.z_lo = z_lo;
  r.z_hi = z_hi;
  if (upper_varies) {
    r.vary_mask = 0b1100u;
    r.l_lo = {fixed, fixed, from, from};
    r.l_hi = {fixed, fixed, to, to};
  } else {
    r.vary_mask = 0b0011u;
    r.l_lo = {from, from, fixed, fixed};
    r.l_hi = {to, to, fixed, fixed};
  }
  return r;
}

Region make_dsw_i(double z_lo, double z_hi, double l1, double l3, double l4, double from,
                  double to) {
  Region r;
  r.kind = RegionKind::CnoidalDsw;
  r.z_lo = z_lo;
  r.z_hi = z_hi;
  r.vary_mask = 0b0010u;
  r.whitham_index = 1;
  r.l_lo = {l1, from, l3, l4};
  r.l_hi = {l1, to, l3, l4};
  return r;
}

Region make_dsw_ii(double z_lo, double z_hi, double l1, double l2, double l4, double from,
                   double to) {
  Region r;
  r.kind = RegionKind::CnoidalDsw;
  r.z_lo = z_lo;
  r.z_hi = z_hi;
  r.vary_mask = 0b0100u;
  r.whitham_index = 2;
  r.l_lo = {l1, l2, from, l4};
  r.l_hi = {l1, l2, to, l4};
  return r;
}

// Signed square root of the oscillation-band floor: the envelope minimum is
// p^2 with p linear in the square roots of the invariants, so a vacuum
// point is a sign change of p along the fan.
double band_floor_signed(const Region& r, SignBranch mapping, double val) {
  auto l = tuple_at(r, val);
  double A = std::sqrt(l[0]), B = std::sqrt(l[1]), C = std::sqrt(l[2]), D = std::sqrt(l[3]);
  if (r.kind == RegionKind::ContactDsw)
    return mapping == SignBranch::UpperSigns ? (2.0 * A + C - D) : (C + D - 2.0 * A);
  OscInterval band = region_band(r, mapping);
  if (mapping == SignBranch::LowerSigns)
    return band == OscInterval::Low ? (-A + B + C - D) : (C + D - A - B);
  return band == OscInterval::Low ? (A + B + C - D) : (A + C + D - B);
}

void detect_vacuum(WavePattern& wp) {
  for (size_t ri = 0; ri < wp.regions.size(); ++ri) {
    const Region& r = wp.regions[ri];
    double scale = std::sqrt(std::max(tie_scale(wp.data), 1e-30));
    if (r.kind == RegionKind::VacuumFan) {
      wp.vacuum_flags.push_back(
          {static_cast<int>(ri), SignBranch::LowerSigns, false, 0.5 * (r.z_lo + r.z_hi)});
      continue;
    }
    if (!region_oscillates(r.kind)) continue;
    if (r.kind == RegionKind::CnoidalZone) {
      for (SignBranch sb : {SignBranch::UpperSigns, SignBranch::LowerSigns}) {
        auto bi = band_interval(r.l_lo, sb, region_band(r, sb));
        if (bi.lo < 1e-12 * sq(scale))
          wp.vacuum_flags.push_back({static_cast<int>(ri), sb, false, r.z_lo});
      }
      continue;
    }
    int iv = first_vary(r);
    double va = r.l_lo[static_cast<size_t>(iv)], vb = r.l_hi[static_cast<size_t>(iv)];
    for (SignBranch sb : {SignBranch::UpperSigns, SignBranch::LowerSigns}) {
      double pa = band_floor_signed(r, sb, va);
      double pb = band_floor_signed(r, sb, vb);
      bool touches_end = std::min(std::fabs(pa), std::fabs(pb)) <= 1e-8 * scale;
      if (pa * pb > 0.0 && !touches_end) continue;
      double vstar;
      if (pa * pb <= 0.0) {
        double a = va, b = vb, fa = pa;
        for (int it = 0; it < 200 && std::fabs(b - a) > 1e-15 * std::max(1.0, std::fabs(b));
             ++it) {
          double m = 0.5 * (a + b);
          double fm = band_floor_signed(r, sb, m);
          if (fa * fm <= 0.0) {
            b = m;
          } else {
            a = m;
            fa = fm;
          }
        }
        vstar = std::clamp(0.5 * (a + b), std::min(va, vb), std::max(va, vb));
      } else {
        vstar = std::fabs(pa) <= std::fabs(pb) ? va : vb;
      }
      double zstar = std::clamp(fan_velocity(r, vstar), r.z_lo, r.z_hi);
      bool at_edge = false;
      if (r.kind == RegionKind::CnoidalDsw) {
        // soliton end = the fan end where l2 and l3 merge
        auto ends_merged = [&](const std::array<double, 4>& lref) {
          return std::fabs(lref[1] - lref[2]) < 1e-9 * std::max(1.0, lref[3]);
        };
        double vtol = 1e-6 * std::max(1.0, std::fabs(vb - va));
        if (ends_merged(r.l_lo) && std::fabs(vstar - va) < vtol) at_edge = true;
        if (ends_merged(r.l_hi) && std::fabs(vstar - vb) < vtol) at_edge = true;
      }
      wp.vacuum_flags.push_back({static_cast<int>(ri), sb, at_edge, zstar});
    }
  }
}

void build_phase_tables(WavePattern& wp) {
  wp.phase_cycles.assign(wp.regions.size(), {});
  wp.phase_anchor_hi.assign(wp.regions.size(), 0);
  for (size_t ri = 0; ri < wp.regions.size(); ++ri) {
    const Region& r = wp.regions[ri];
    if (!region_oscillates(r.kind) || !(r.z_hi > r.z_lo)) continue;

    bool soliton_hi = false;
    if (r.kind == RegionKind::CnoidalDsw) {
      double scale = std::max(1.0, r.l_hi[3]);
      soliton_hi = std::fabs(r.l_hi[1] - r.l_hi[2]) < 1e-9 * scale;
    }
    wp.phase_anchor_hi[ri] = soliton_hi ? 1 : 0;

    std::vector<double> g(kPhaseNodes);
    for (int k = 0; k < kPhaseNodes; ++k) {
      double z = r.z_lo + (r.z_hi - r.z_lo) * k / (kPhaseNodes - 1);
      auto l = region_invariants_at(r, z);
      double d13 = l[2] - l[0], d24 = l[3] - l[1];
      if (d13 <= 0.0 || d24 <= 0.0) {
        g[k] = 0.0;
        continue;
      }
      double m = std::clamp(((l[1] - l[0]) * (l[3] - l[2])) / (d13 * d24), 0.0, 1.0);
      g[k] = (m >= 1.0) ? 0.0 : std::sqrt(d13 * d24) / (2.0 * specfun::ellip_K(m));
    }
    std::vector<double> cyc(kPhaseNodes, 0.0);
    double h = (r.z_hi - r.z_lo) / (kPhaseNodes - 1);
    for (int k = 1; k < kPhaseNodes; ++k) cyc[k] = cyc[k - 1] + 0.5 * h * (g[k - 1] + g[k]);
    if (soliton_hi)
      for (double& c : cyc) c -= cyc.back();
    wp.phase_cycles[ri] = std::move(cyc);
  }
}

int region_index_at(const WavePattern& wp, double z) {
  for (size_t i = 0; i + 1 < wp.regions.size(); ++i)
    if (z <= wp.regions[i].z_hi) return static_cast<int>(i);
  return static_cast<int>(wp.regions.size()) - 1;
}

}  // namespace

WavePattern build_pattern(const StepData& sd, bool with_phase_tables) {
  WavePattern wp;
  wp.pcase = classify(sd);
  wp.data = sd;
  wp.edge_speeds = edge_speeds(wp.pcase, sd);
  const auto& s = wp.edge_speeds;

  double aL = sd.inv_left.l_minus, bL = sd.inv_left.l_plus;
  double aR = sd.inv_right.l_minus, bR = sd.inv_right.l_plus;

  wp.plateaus.push_back(sd.inv_left);
  wp.regions.push_back(make_plateau(-kInf, s[0], aL, bL));
  switch (wp.pcase.letter) {
    case CaseLetter::A: {
      wp.regions.push_back(make_rarefaction(s[0], s[1], aL, bL, aL, true));
      Region vf;
      vf.kind = RegionKind::VacuumFan;
      vf.z_lo = s[1];
      vf.z_hi = s[2];
      vf.vary_mask = 0b1111u;
      vf.l_lo = {aL, aL, aL, aL};
      vf.l_hi = {bR, bR, bR, bR};
      wp.regions.push_back(vf);
      wp.regions.push_back(make_rarefaction(s[2], s[3], bR, bR, aR, false));
      break;
    }
    case CaseLetter::B:
      wp.regions.push_back(make_rarefaction(s[0], s[1], aL, bL, bR, true));
      wp.regions.push_back(make_plateau(s[1], s[2], aL, bR));
      wp.plateaus.push_back({aL, bR});
      wp.regions.push_back(make_rarefaction(s[2], s[3], bR, aL, aR, false));
      break;
    case CaseLetter::C:
      wp.regions.push_back(make_rarefaction(s[0], s[1], aL, bL, bR, true));
      wp.regions.push_back(make_plateau(s[1], s[2], aL, bR));
      wp.plateaus.push_back({aL, bR});
      wp.regions.push_back(make_dsw_i(s[2], s[3], aL, aR, bR, aR, aL));
      break;
    case CaseLetter::D:
      wp.regions.push_back(make_dsw_ii(s[0], s[1], aL, bL, bR, bR, bL));
      wp.regions.push_back(make_plateau(s[1], s[2], aL, bR));
      wp.plateaus.push_back({aL, bR});
      wp.regions.push_back(make_rarefaction(s[2], s[3], bR, aL, aR, false));
      break;
    case CaseLetter::E:
      wp.regions.push_back(make_dsw_ii(s[0], s[1], aL, bL, bR, bR, bL));
      wp.regions.push_back(make_plateau(s[1], s[2], aL, bR));
      wp.plateaus.push_back({aL, bR});
      wp.regions.push_back(make_dsw_i(s[2], s[3], aL, aR, bR, aR, aL));
      break;
    case CaseLetter::F: {
      wp.regions.push_back(make_dsw_ii(s[0], s[1], aL, bL, bR, bR, aR));
      Region zone;
      zone.kind = RegionKind::CnoidalZone;
      zone.z_lo = s[1];
      zone.z_hi = s[2];
      zone.l_lo = zone.l_hi = {aL, bL, aR, bR};
      wp.regions.push_back(zone);
      wp.regions.push_back(make_dsw_i(s[2], s[3], aL, aR, bR, bL, aL));
      break;
    }
  }

  if (wp.pcase.side == SideMode::CrossSide) {
    // the contact fan continues the rightmost wave: it starts from the
    // invariant value the neighbour hands over (l-^L after a type-i DSW,
    // l-^R after a rarefaction or plateau) and runs down to zero
    double c0 = (wp.pcase.letter == CaseLetter::C || wp.pcase.letter == CaseLetter::E ||
                 wp.pcase.letter == CaseLetter::F)
                    ? aL
                    : aR;
    Region ct;
    ct.kind = RegionKind::ContactDsw;
    ct.z_lo = s[s.size() - 2];
    ct.z_hi = s.back();
    ct.vary_mask = 0b0011u;
    ct.l_lo = {c0, c0, aR, bR};
    ct.l_hi = {0.0, 0.0, aR, bR};
    wp.regions.push_back(ct);
  }
  wp.plateaus.push_back(sd.inv_right);
  wp.regions.push_back(make_plateau(s.back(), kInf, aR, bR));

  // round-off at tied data can invert a zero-width fan; collapse it
  for (auto& r : wp.regions) {
    if (std::isfinite(r.z_lo) && std::isfinite(r.z_hi) && r.z_hi < r.z_lo) {
      double mid = 0.5 * (r.z_lo + r.z_hi);
      r.z_lo = r.z_hi = mid;
      r.l_hi = r.l_lo;
    }
  }
  detect_vacuum(wp);
  if (with_phase_tables) {
    build_phase_tables(wp);
  } else {
    wp.phase_cycles.assign(wp.regions.size(), {});
    wp.phase_anchor_hi.assign(wp.regions.size(), 0);
  }
  return wp;
}

std::array<double, 4> sample_invariants(const WavePattern& wp, double z) {
  const Region& r = wp.regions[static_cast<size_t>(region_index_at(wp, z))];
  return region_invariants_at(r, z);
}

PatternSample sample_pattern(const WavePattern& wp, double x, double t) {
  if (!(t > 0.0)) throw DomainError("sample_pattern: need t > 0");
  double z = x / t;
  PatternSample out;
  out.region = region_index_at(wp, z);
  const Region& r = wp.regions[static_cast<size_t>(out.region)];
  auto l = region_invariants_at(r, z);
  out.invariants = l;

  mean_flow(r, l, out.upper.nu, out.lower.nu);

  if (!region_oscillates(r.kind)) {
    double lm = l[0], lp = l[3];
    if (r.kind == RegionKind::VacuumFan) lp = l[0];
    auto su = state_from_invariants({lm, lp}, Branch::Upper);
    auto sl = state_from_invariants({lm, lp}, Branch::Lower);
    out.upper.rho = out.upper.rho_mean = su.rho;
    out.lower.rho = out.lower.rho_mean = sl.rho;
    out.upper.env_min = out.upper.env_max = su.rho;
    out.lower.env_min = out.lower.env_max = sl.rho;
    out.upper.turning_points = wave_params({{lm, lm, lp, lp}, SignBranch::UpperSigns}).rho;
    out.lower.turning_points = wave_params({{lm, lm, lp, lp}, SignBranch::LowerSigns}).rho;
  } else {
    double cycles = 0.0;
    const auto& tab = wp.phase_cycles[static_cast<size_t>(out.region)];
    if (!tab.empty() && r.z_hi > r.z_lo) {
      double u = std::clamp((z - r.z_lo) / (r.z_hi - r.z_lo), 0.0, 1.0) * (kPhaseNodes - 1);
      int k = std::min(static_cast<int>(u), kPhaseNodes - 2);
      double w = u - k;
      cycles = (1.0 - w) * tab[static_cast<size_t>(k)] + w * tab[static_cast<size_t>(k) + 1];
    }
    double N = t * cycles;
    double frac = N - std::floor(N);

    double d13 = l[2] - l[0], d24 = l[3] - l[1];
    double m = (d13 > 0.0 && d24 > 0.0)
                   ? std::clamp(((l[1] - l[0]) * (l[3] - l[2])) / (d13 * d24), 0.0, 1.0)
                   : 1.0;
    double L = (m >= 1.0 - 1e-14 || d13 <= 0.0 || d24 <= 0.0)
                   ? kInf
                   : 2.0 * specfun::ellip_K(m) / std::sqrt(d13 * d24);

    for (SignBranch sb : {SignBranch::UpperSigns, SignBranch::LowerSigns}) {
      OscInterval band = region_band(r, sb);
      auto bi = band_interval(l, sb, band);
      MappingSample& ms = (sb == SignBranch::UpperSigns) ? out.upper : out.lower;
      ms.env_min = bi.lo;
      ms.env_max = bi.hi;
      auto wpar = wave_params({l, sb});
      ms.turning_points = wpar.rho;
      double xi = std::isfinite(L) ? frac * L : 0.0;
      ms.rho = density_profile(xi, wpar, m, band);
      if (std::isfinite(L) && m < 1.0 - 1e-12) {
        double acc = 0.0;
        const int np = 32;
        for (int p = 0; p < np; ++p) acc += density_profile(L * p / np, wpar, m, band);
        ms.rho_mean = acc / np;
      } else {
        // soliton limit: the average collapses onto the background
        ms.rho_mean = (band == OscInterval::Low) ? ms.env_max : ms.env_min;
      }
    }
  }

  out.env_min = std::min(out.upper.env_min, out.lower.env_min);
  out.env_max = std::max(out.upper.env_max, out.lower.env_max);
  return out;
}

}  // namespace dsw
