#include "dsw/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsw/errors.hpp"

namespace dsw::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Switch to the m -> 1 asymptotic forms above this parameter.
constexpr double kNearOne = 1.0 - 1e-10;

struct AgmResult {
  double agm;      // common limit of a_n, b_n
  double csum;     // sum 2^(n-1) c_n^2, c_0 = sqrt(m)
};

AgmResult agm_with_csum(double m) {
  double a = 1.0, b = std::sqrt(1.0 - m);
  double csum = 0.5 * m;         // 2^(-1) c_0^2
  double pow2 = 0.5;
  for (int i = 0; i < 64; ++i) {
    double c = 0.5 * (a - b);
    // once a - b reaches round-off, further c's are noise amplified by 2^n
    if (std::fabs(c) <= 1e-16 * a) break;
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    csum += pow2 * c * c;
  }
  return {a, csum};
}

}  // namespace

double ellip_K(double m) {
  if (!(m >= 0.0) || m >= 1.0)
    throw DomainError("ellip_K: parameter must satisfy 0 <= m < 1, got " + std::to_string(m));
  if (m > kNearOne) return 0.5 * std::log(16.0 / (1.0 - m));
  return kPi / (2.0 * agm_with_csum(m).agm);
}

double ellip_E(double m) {
  if (!(m >= 0.0) || m > 1.0)
    throw DomainError("ellip_E: parameter must satisfy 0 <= m <= 1, got " + std::to_string(m));
  if (m == 1.0) return 1.0;
  if (m > kNearOne) {
    double m1 = 1.0 - m;
    return 1.0 + 0.5 * m1 * (0.5 * std::log(16.0 / m1) - 0.5);
  }
  auto r = agm_with_csum(m);
  double K = kPi / (2.0 * r.agm);
  return K * (1.0 - r.csum);
}

double dK_dm(double m) {
  if (!(m > 0.0) || m >= 1.0)
    throw DomainError("dK_dm: parameter must satisfy 0 < m < 1");
  return (ellip_E(m) - (1.0 - m) * ellip_K(m)) / (2.0 * m * (1.0 - m));
}

double dE_dm(double m) {
  if (!(m > 0.0) || m >= 1.0)
    throw DomainError("dE_dm: parameter must satisfy 0 < m < 1");
  return (ellip_E(m) - ellip_K(m)) / (2.0 * m);
}

JacobiSCD jacobi_sn_cn_dn(double u, double m) {
  if (!(m >= 0.0) || m > 1.0)
    throw DomainError("jacobi_sn_cn_dn: parameter must satisfy 0 <= m <= 1");
  if (!std::isfinite(u)) throw DomainError("jacobi_sn_cn_dn: argument must be finite");

  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m > kNearOne) {
    // soliton limit: sn -> tanh, cn -> sech; dn from the defining identity
    double sn = std::tanh(u);
    double cn = 1.0 / std::cosh(u);
    return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
  }

  // Reduce the argument modulo the 4K period.
  double fourK = 4.0 * ellip_K(m);
  u -= fourK * std::round(u / fourK);

  // AGM scale, then the Gauss phase recursion (A&S 16.4).
  double a[32], c[32];
  double an = 1.0, bn = std::sqrt(1.0 - m);
  int n = 0;
  a[0] = an;
  c[0] = std::sqrt(m);
  while (std::fabs(c[n]) > 1e-17 * an && n < 31) {
    double cn1 = 0.5 * (an - bn);
    double an1 = 0.5 * (an + bn);
    bn = std::sqrt(an * bn);
    an = an1;
    ++n;
    a[n] = an;
    c[n] = cn1;
  }
  double phi = std::ldexp(1.0, n) * a[n] * u;
  for (int i = n; i > 0; --i)
    phi = 0.5 * (phi + std::asin(std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0)));

  double sn = std::sin(phi), cn = std::cos(phi);
  return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
}

}  // namespace dsw::specfun
