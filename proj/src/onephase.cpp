#include "dsw/onephase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsw/errors.hpp"
#include "dsw/specfun.hpp"

namespace dsw {

namespace {
constexpr double kDegTol = 1e-9;
}

void validate(const ModulationState& ms) {
  if (!(ms.l[0] >= 0.0))
    throw DomainError("modulation state: l1 must be >= 0");
  for (int i = 0; i < 3; ++i)
    if (!(ms.l[i] <= ms.l[i + 1]))
      throw DomainError("modulation state: invariants must be ordered l1<=l2<=l3<=l4, got " +
                        std::to_string(ms.l[0]) + " " + std::to_string(ms.l[1]) + " " +
                        std::to_string(ms.l[2]) + " " + std::to_string(ms.l[3]));
}

WaveParams wave_params(const ModulationState& ms) {
  validate(ms);
  double a = std::sqrt(ms.l[0]), b = std::sqrt(ms.l[1]);
  double c = std::sqrt(ms.l[2]), d = std::sqrt(ms.l[3]);
  std::array<double, 4> r{};
  if (ms.signs == SignBranch::UpperSigns) {
    r = {(a + b + c - d) * (a + b + c - d), (a + b - c + d) * (a + b - c + d),
         (a - b + c + d) * (a - b + c + d), (-a + b + c + d) * (-a + b + c + d)};
  } else {
    r = {(-a + b + c - d) * (-a + b + c - d), (a - b + c - d) * (a - b + c - d),
         (a + b - c - d) * (a + b - c - d), (a + b + c + d) * (a + b + c + d)};
  }
  std::sort(r.begin(), r.end());
  return {r};
}

ModulusWavelength modulus_and_wavelength(const ModulationState& ms) {
  validate(ms);
  const auto& l = ms.l;
  double d13 = l[2] - l[0], d24 = l[3] - l[1];
  if (d13 <= 0.0 || d24 <= 0.0)
    throw DegenerateError("modulus_and_wavelength: need l1 < l3 and l2 < l4");
  double m = ((l[1] - l[0]) * (l[3] - l[2])) / (d13 * d24);
  m = std::clamp(m, 0.0, 1.0);
  double L = (m >= 1.0) ? std::numeric_limits<double>::infinity()
                        : 2.0 * specfun::ellip_K(m) / std::sqrt(d13 * d24);
  return {m, L};
}

double omega_scale(const WaveParams& wp) {
  return 0.25 * std::sqrt((wp.rho[2] - wp.rho[0]) * (wp.rho[3] - wp.rho[1]));
}

double density_profile(double xi, const WaveParams& wp, double m, OscInterval band) {
  const auto& r = wp.rho;
  double w = omega_scale(wp) * xi;
  auto j = specfun::jacobi_sn_cn_dn(w, m);
  double sn2 = j.sn * j.sn, cn2 = j.cn * j.cn;
  if (band == OscInterval::Low) {
    return (r[1] * (r[3] - r[0]) - r[3] * (r[1] - r[0]) * cn2) /
           (r[3] - r[1] + (r[1] - r[0]) * sn2);
  }
  return (r[2] * (r[0] - r[3]) + r[0] * (r[3] - r[2]) * cn2) /
         (r[0] - r[2] + (r[2] - r[3]) * sn2);
}

std::function<double(double)> limit_profile(const WaveParams& wp, OscInterval band,
                                            LimitKind kind) {
  const auto r = wp.rho;
  double scale = std::max(r[3], 1.0);
  if (kind == LimitKind::Soliton) {
    if (std::fabs(r[2] - r[1]) > kDegTol * scale)
      throw DomainError("limit_profile: soliton limit requires rho2 = rho3");
    return [r, band](double xi) {
      double w = 0.25 * std::sqrt((r[2] - r[0]) * (r[3] - r[1])) * xi;
      double th = std::tanh(w), sh = 1.0 / std::cosh(w);
      double sn2 = th * th, cn2 = sh * sh;
      if (band == OscInterval::Low)
        return (r[1] * (r[3] - r[0]) - r[3] * (r[1] - r[0]) * cn2) /
               (r[3] - r[1] + (r[1] - r[0]) * sn2);
      return (r[2] * (r[0] - r[3]) + r[0] * (r[3] - r[2]) * cn2) /
             (r[0] - r[2] + (r[2] - r[3]) * sn2);
    };
  }
  if (std::fabs(r[1] - r[0]) > kDegTol * scale && std::fabs(r[3] - r[2]) > kDegTol * scale)
    throw DomainError("limit_profile: trig limit requires rho1 = rho2 or rho3 = rho4");
  return [r, band](double xi) {
    double w = 0.25 * std::sqrt((r[2] - r[0]) * (r[3] - r[1])) * xi;
    double sn2 = std::sin(w) * std::sin(w), cn2 = std::cos(w) * std::cos(w);
    if (band == OscInterval::Low)
      return (r[1] * (r[3] - r[0]) - r[3] * (r[1] - r[0]) * cn2) /
             (r[3] - r[1] + (r[1] - r[0]) * sn2);
    return (r[2] * (r[0] - r[3]) + r[0] * (r[3] - r[2]) * cn2) /
           (r[0] - r[2] + (r[2] - r[3]) * sn2);
  };
}

double quartic_R(double rho, const WaveParams& wp) {
  double p = 1.0;
  for (double ri : wp.rho) p *= rho - ri;
  return p;
}

double phase_velocity(const ModulationState& ms) {
  validate(ms);
  const auto& l = ms.l;
  double s1 = l[0] + l[1] + l[2] + l[3];
  double s2 = l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3];
  return 2.0 * s2 - 1.5 * s1 * s1;
}

}  // namespace dsw
