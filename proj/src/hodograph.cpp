#include "dsw/hodograph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dsw/errors.hpp"
#include "dsw/specfun.hpp"
#include "dsw/whitham.hpp"

namespace dsw {

namespace {

double sq(double x) { return x * x; }
double cube(double x) { return x * x * x; }

// Wavelength L(l) = 2 K(m) / sqrt((l3-l1)(l4-l2)) with analytic gradient.
struct Wavelength {
  double L;
  std::array<double, 4> dL;
};

Wavelength wavelength_with_grad(const std::array<double, 4>& l) {
  double d13 = l[2] - l[0], d24 = l[3] - l[1];
  if (!(d13 > 0.0) || !(d24 > 0.0))
    throw DegenerateError("wavelength: need l1 < l3 and l2 < l4");
  double N = (l[1] - l[0]) * (l[3] - l[2]);
  double D = d13 * d24;
  double m = std::clamp(N / D, 0.0, 1.0);
  if (m >= 1.0) throw DegenerateError("wavelength: soliton limit, derivative undefined");

  double K = specfun::ellip_K(m);
  double dK = m > 0.0 ? specfun::dK_dm(m)
                      : 3.14159265358979323846 / 8.0;  // m -> 0 limit of dK/dm
  double P = 1.0 / std::sqrt(D);

  std::array<double, 4> dN{-(l[3] - l[2]), l[3] - l[2], -(l[1] - l[0]), l[1] - l[0]};
  std::array<double, 4> dD{-d24, -d13, d24, d13};

  Wavelength w;
  w.L = 2.0 * K * P;
  for (size_t i = 0; i < 4; ++i) {
    double dm = (dN[i] - m * dD[i]) / D;
    double dP = -0.5 * P * dD[i] / D;
    w.dL[i] = 2.0 * (dK * dm * P + K * dP);
  }
  return w;
}

// Expansion coefficients W^(0..3) of the generating function in inverse
// powers of the spectral variable, with gradients.
struct Wexp {
  std::array<double, 4> W;
  std::array<std::array<double, 4>, 4> dW;  // dW[k][i]
};

Wexp w_expansion(const std::array<double, 4>& l) {
  double e1 = l[0] + l[1] + l[2] + l[3];
  double e2 = l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3];
  double e3 = l[0] * l[1] * l[2] + l[0] * l[1] * l[3] + l[0] * l[2] * l[3] + l[1] * l[2] * l[3];

  Wexp w;
  w.W = {1.0, e1 / 2.0, 3.0 * e1 * e1 / 8.0 - e2 / 2.0,
         e3 / 2.0 + 5.0 * cube(e1) / 16.0 - 3.0 * e1 * e2 / 4.0};
  for (size_t i = 0; i < 4; ++i) {
    double li = l[i];
    double de2 = e1 - li;
    double de3 = e2 - li * (e1 - li);
    w.dW[0][i] = 0.0;
    w.dW[1][i] = 0.5;
    w.dW[2][i] = 0.75 * e1 - 0.5 * de2;
    w.dW[3][i] = 0.5 * de3 + 15.0 * e1 * e1 / 16.0 - 0.75 * (e2 + e1 * de2);
  }
  return w;
}

double omega_impl(size_t i, const std::array<double, 4>& l, const HodographCoeffs& c) {
  auto wl = wavelength_with_grad(l);
  auto we = w_expansion(l);
  if (wl.dL[i] == 0.0) throw DegenerateError("omega: dL/dl_i vanishes");
  double ratio = wl.L / wl.dL[i];
  const double C[4] = {c.c0, c.c1, c.c2, c.c3};
  double sum = 0.0;
  for (size_t k = 0; k < 4; ++k) sum += C[k] * (we.W[k] - ratio * we.dW[k][i]);
  return sum;
}

// Small-amplitude edge locus l3 = l4 = lam: the time at which the x(lam)
// envelope extremum passes lam, and the matching position.
double t_of_lambda(double lam, const CubicBreakData& d) {
  double lm = d.l_minus, lp = d.l_plus;
  double num = 8.0 * sq(lam - lp) *
               (16.0 * lam * lam - 4.0 * lam * (5.0 * lm + 3.0 * lp) + 7.0 * lm * lm +
                6.0 * lm * lp + 3.0 * lp * lp);
  double den = 35.0 * (16.0 * cube(lam) - 16.0 * lam * lam * (lm + lp) +
                       sq(lm - lp) * (lm + lp) + 4.0 * lam * sq(lm + lp));
  return num / den;
}

double xL_of_lambda(double lam, const CubicBreakData& d) {
  double lm = d.l_minus, lp = d.l_plus;
  double den = 16.0 * cube(lam) - 16.0 * lam * lam * (lm + lp) + sq(lm - lp) * (lm + lp) +
               4.0 * lam * sq(lm + lp);
  double poly = 128.0 * cube(lam) * (lam - lm + lp) +
                8.0 * lam * lam * (lm * lm - 30.0 * lp * lm - 19.0 * lp * lp) +
                sq(lm - lp) * (21.0 * lm * lm + 46.0 * lm * lp + 13.0 * lp * lp) -
                4.0 * lam * (cube(lm) - 23.0 * lm * lm * lp - 45.0 * lm * lp * lp + 3.0 * cube(lp));
  return -4.0 * sq(lam - lp) * poly / (35.0 * den);
}

void validate_break_data(const CubicBreakData& d) {
  if (!(d.l_minus >= 0.0) || !(d.l_plus > d.l_minus))
    throw DomainError("cubic break data: need 0 <= l_minus < l_plus");
}

}  // namespace

HodographCoeffs hodograph_coefficients(const CubicBreakData& d) {
  validate_break_data(d);
  double lp = d.l_plus, lm = d.l_minus;
  HodographCoeffs c;
  c.c0 = -(35.0 * cube(lp) + 35.0 * lp * lp * lm - 7.0 * lp * lm * lm + cube(lm)) / 35.0;
  c.c1 = 2.0 * (35.0 * lp * lp + 14.0 * lp * lm - lm * lm) / 35.0;
  c.c2 = -8.0 * (7.0 * lp + lm) / 35.0;
  c.c3 = 16.0 / 35.0;
  return c;
}

double omega(int i, const ModulationState& ms, const CubicBreakData& d) {
  if (i < 1 || i > 4) throw DomainError("omega: index must be 1..4");
  validate(ms);
  return omega_impl(static_cast<size_t>(i - 1), ms.l, hodograph_coefficients(d));
}

double omega4_at_soliton_edge(double l4, const CubicBreakData& d) {
  auto c = hodograph_coefficients(d);
  std::array<double, 4> l{d.l_minus, d.l_plus, d.l_plus, l4};
  auto we = w_expansion(l);
  double ratio = -2.0 * (l4 - d.l_plus);  // limit of L / d4L at l3 = l2
  const double C[4] = {c.c0, c.c1, c.c2, c.c3};
  double sum = 0.0;
  for (size_t k = 0; k < 4; ++k) sum += C[k] * (we.W[k] - ratio * we.dW[k][3]);
  return sum;
}

EdgeLaws edge_laws(double t, const CubicBreakData& d) {
  validate_break_data(d);
  if (t < 0.0) throw DomainError("edge_laws: need t >= 0");
  double lm = d.l_minus, lp = d.l_plus;
  if (t == 0.0) return {0.0, 0.0, lp, lp};

  EdgeLaws e;
  double arg = t * (4.0 * lm + 20.0 * lp + 21.0 * t);
  e.l4_soliton = lp + 3.5 * t + 0.5 * std::sqrt(7.0 / 3.0) * std::sqrt(arg);
  e.xR = -49.0 * cube(t) / 4.0 -
         t * (1.5 * lm * lm + 3.0 * lm * lp + 7.5 * lp * lp +
              (7.0 * lm * t + 35.0 * lp * t) / 2.0) -
         std::sqrt(7.0 / 3.0) / 12.0 * std::pow(arg, 1.5);

  // invert t(lambda) on (l_plus, l4_soliton]: t grows with the edge value
  double a = lp, b = e.l4_soliton;
  int guard = 0;
  while (t_of_lambda(b, d) < t && guard++ < 60) b *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    if (t_of_lambda(mid, d) < t)
      a = mid;
    else
      b = mid;
    if (b - a < 1e-15 * std::max(1.0, b)) break;
  }
  e.l4_small_amplitude = 0.5 * (a + b);
  e.xL = xL_of_lambda(e.l4_small_amplitude, d);
  if (!(e.xL <= e.xR)) throw SolverError("edge_laws: edge ordering failed (xL > xR)");
  return e;
}

ModulationState solve_cubic_modulation(double x, double t, const CubicBreakData& d) {
  validate_break_data(d);
  if (t < 0.0) throw DomainError("solve_cubic_modulation: need t >= 0");
  double lm = d.l_minus, lp = d.l_plus;
  if (t == 0.0) {
    if (x != 0.0)
      throw OutOfRegionError("solve_cubic_modulation: fan is the point x = 0 at t = 0");
    return {{lm, lp, lp, lp}, SignBranch::UpperSigns};
  }
  auto edges = edge_laws(t, d);
  if (x < edges.xL || x > edges.xR)
    throw OutOfRegionError("solve_cubic_modulation: x = " + std::to_string(x) +
                           " outside the fan [" + std::to_string(edges.xL) + ", " +
                           std::to_string(edges.xR) + "]");

  auto c = hodograph_coefficients(d);
  double span = edges.xR - edges.xL;
  x = std::max(x, edges.xL + 1e-9 * span);

  // Soliton-edge corner: within it the l3 gap shrinks past the resolution
  // of the modulation formulas, but l4 simply continues the dispersionless
  // cubic (the merged i=4 relation), so solve that scalar relation instead.
  const double corner = 3e-5 * span;
  auto corner_state = [&](double xc) {
    auto g4 = [&](double u) {
      return cube(u - lp) - xc - 1.5 * (5.0 * u * u + 2.0 * u * lm + lm * lm) * t;
    };
    double a = lp, b = 2.0 * edges.l4_soliton + 1.0;
    // largest root: start above the upper critical point of the cubic
    double B = -6.0 * lp - 15.0 * t, C = 3.0 * lp * lp - 3.0 * t * lm;
    double disc = B * B - 12.0 * C;
    if (disc > 0.0) a = std::max(a, (-B + std::sqrt(disc)) / 6.0);
    int guard = 0;
    while (g4(b) < 0.0 && guard++ < 60) b *= 2.0;
    double ga = g4(a);
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      double gm = g4(mid);
      if (ga * gm <= 0.0) {
        b = mid;
      } else {
        a = mid;
        ga = gm;
      }
      if (b - a < 1e-16 * std::max(1.0, b)) break;
    }
    double l4 = 0.5 * (a + b);
    // the i=3 relation fixes the (tiny) l3 gap; accuracy there is
    // immaterial this close to the edge
    double glo = 1e-13 * std::max(1.0, lp), ghi = 1e-3 * (l4 - lp);
    auto g3 = [&](double gap) {
      std::array<double, 4> l{lm, lp, lp + gap, l4};
      auto v = whitham_velocities({l, SignBranch::UpperSigns});
      return xc - v[2] * t - omega_impl(2, l, c);
    };
    double flo = g3(glo), fhi = g3(ghi);
    double gap = std::fabs(flo) < std::fabs(fhi) ? glo : ghi;
    if (flo * fhi <= 0.0) {
      for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(glo * ghi);  // log bisection
        double fm = g3(mid);
        if (flo * fm <= 0.0) {
          ghi = mid;
        } else {
          glo = mid;
          flo = fm;
        }
        if (ghi - glo < 1e-3 * glo) break;
      }
      gap = std::sqrt(glo * ghi);
    }
    return ModulationState{{lm, lp, lp + gap, l4}, SignBranch::UpperSigns};
  };
  if (x > edges.xR - corner) return corner_state(x);
  double scale = std::max(1.0, edges.l4_soliton);
  const double gap_min = 1e-13 * scale;

  auto residual = [&](double l3, double l4, double xx, double& r3, double& r4) {
    std::array<double, 4> l{lm, lp, l3, l4};
    auto v = whitham_velocities({l, SignBranch::UpperSigns});
    r3 = xx - v[2] * t - omega_impl(2, l, c);
    r4 = xx - v[3] * t - omega_impl(3, l, c);
  };

  // damped 2x2 Newton with finite-difference Jacobian
  auto newton = [&](double& l3, double& l4, double xx) {
    double r3, r4;
    residual(l3, l4, xx, r3, r4);
    for (int it = 0; it < 60; ++it) {
      double nrm = std::fabs(r3) + std::fabs(r4);
      if (nrm < 1e-13 * std::max(1.0, std::fabs(xx))) return true;
      double h3 = std::min(1e-7 * scale, 0.05 * (l3 - lp));
      h3 = std::min(h3, 0.05 * std::max(l4 - l3, gap_min));
      double h4 = std::min(1e-7 * scale, 0.05 * std::max(l4 - l3, gap_min));
      h3 = std::max(h3, 1e-14 * scale);
      h4 = std::max(h4, 1e-14 * scale);
      double a3, a4, b3, b4;
      residual(l3 + h3, l4, xx, a3, a4);
      residual(std::max(lp + gap_min, l3 - h3), l4, xx, b3, b4);
      double d3 = l3 + h3 - std::max(lp + gap_min, l3 - h3);
      double J11 = (a3 - b3) / d3, J21 = (a4 - b4) / d3;
      residual(l3, l4 + h4, xx, a3, a4);
      residual(l3, std::max(l3 + gap_min, l4 - h4), xx, b3, b4);
      double d4 = l4 + h4 - std::max(l3 + gap_min, l4 - h4);
      double J12 = (a3 - b3) / d4, J22 = (a4 - b4) / d4;
      double det = J11 * J22 - J12 * J21;
      if (det == 0.0 || !std::isfinite(det)) return false;
      double dl3 = (-r3 * J22 + r4 * J12) / det;
      double dl4 = (-r4 * J11 + r3 * J21) / det;
      bool moved = false;
      for (double damp = 1.0; damp > 1.0 / 1024.0; damp *= 0.5) {
        double n3 = l3 + damp * dl3, n4 = l4 + damp * dl4;
        n3 = std::max(n3, lp + gap_min);
        n4 = std::max(n4, n3 + 0.0);
        if (n4 < n3) std::swap(n3, n4);
        double s3, s4;
        residual(n3, n4, xx, s3, s4);
        if (std::fabs(s3) + std::fabs(s4) < nrm) {
          l3 = n3;
          l4 = n4;
          r3 = s3;
          r4 = s4;
          moved = true;
          break;
        }
      }
      if (!moved) return std::fabs(r3) + std::fabs(r4) < 1e-10 * std::max(1.0, std::fabs(xx));
    }
    return std::fabs(r3) + std::fabs(r4) < 1e-10 * std::max(1.0, std::fabs(xx));
  };

  // continuation in x from the corner boundary, whose state anchors the
  // branch with a comfortably resolved l3 gap
  double x0 = edges.xR - corner;
  auto anchor = corner_state(x0);
  double l3 = anchor.l[2], l4 = anchor.l[3];
  int nsteps = std::max(8, static_cast<int>(std::ceil(80.0 * (x0 - x) / span)));
  bool ok = true;
  for (int k = 1; k <= nsteps; ++k) {
    double xx = x0 + (x - x0) * k / nsteps;
    ok = newton(l3, l4, xx);
    if (!ok) break;
  }
  if (!ok) {
    l3 = anchor.l[2];
    l4 = anchor.l[3];
    nsteps *= 8;
    for (int k = 1; k <= nsteps; ++k) {
      double xx = x0 + (x - x0) * k / nsteps;
      ok = newton(l3, l4, xx);
      if (!ok)
        throw SolverError("solve_cubic_modulation: continuation failed at x = " +
                          std::to_string(xx));
    }
  }
  return {{lm, lp, l3, l4}, SignBranch::UpperSigns};
}

DispersionlessPair dispersionless_profile(double x, double t, const CubicBreakData& d) {
  validate_break_data(d);
  double lm = d.l_minus, lp = d.l_plus;
  bool right_side;
  if (t > 0.0) {
    auto e = edge_laws(t, d);
    if (x > e.xL && x < e.xR)
      throw OutOfRegionError("dispersionless_profile: (x,t) lies inside the DSW fan");
    right_side = x >= e.xR;
  } else {
    right_side = x >= 0.0;
  }
  auto g = [&](double u) {
    return cube(u - lp) - x - 1.5 * (5.0 * u * u + 2.0 * u * lm + lm * lm) * t;
  };

  double a, b;
  if (t > 0.0) {
    // critical points of the cubic separate its three branches
    double B = -6.0 * lp - 15.0 * t, C = 3.0 * lp * lp - 3.0 * t * lm;
    double disc = B * B - 12.0 * C;
    double c1 = lp, c2 = lp;
    if (disc > 0.0) {
      c1 = (-B - std::sqrt(disc)) / 6.0;
      c2 = (-B + std::sqrt(disc)) / 6.0;
    }
    if (right_side) {
      a = c2;
      b = std::max(c2 + 1.0, lp + 2.0 * std::cbrt(std::fabs(x) + 1.0));
      int guard = 0;
      while (g(b) < 0.0 && guard++ < 200) b *= 2.0;
    } else {
      b = c1;
      a = std::min(c1 - 1.0, lp - 2.0 * std::cbrt(std::fabs(x) + 1.0));
      int guard = 0;
      while (g(a) > 0.0 && guard++ < 200) a -= std::fabs(a) + 1.0;
    }
  } else {
    double reach = 2.0 * std::cbrt(std::fabs(x) + 1.0) + 10.0 * std::fabs(t) * (1.0 + lp * lp);
    a = lp - reach;
    b = lp + reach;
    int guard = 0;
    while (g(a) > 0.0 && guard++ < 200) a -= std::fabs(a) + 1.0;
    guard = 0;
    while (g(b) < 0.0 && guard++ < 200) b += std::fabs(b) + 1.0;
  }
  double ga = g(a);
  if (ga * g(b) > 0.0) throw SolverError("dispersionless_profile: root not bracketed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    double gm = g(mid);
    if (ga * gm <= 0.0) {
      b = mid;
    } else {
      a = mid;
      ga = gm;
    }
    if (b - a < 1e-16 * std::max(1.0, std::fabs(b))) break;
  }
  return {lm, 0.5 * (a + b)};
}

}  // namespace dsw
