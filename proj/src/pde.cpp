#include "dsw/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "dsw/errors.hpp"

namespace dsw::pde {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

struct Fft {
  int n;
  fftw_plan fwd, bwd;
  std::vector<cplx> buf;

  explicit Fft(int n_) : n(n_), buf(static_cast<size_t>(n_)) {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::vector<cplx>& a) {
    buf = a;
    fftw_execute(fwd);
    double s = 1.0 / n;
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)] = buf[static_cast<size_t>(i)] * s;
  }
  void backward(std::vector<cplx>& a) {
    buf = a;
    fftw_execute(bwd);
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)] = buf[static_cast<size_t>(i)];
  }
};

std::vector<double> wavenumbers(const Grid& g) {
  std::vector<double> k(static_cast<size_t>(g.n));
  double dk = 2.0 * kPi / g.length;
  for (int i = 0; i < g.n; ++i)
    k[static_cast<size_t>(i)] = dk * (i <= g.n / 2 ? i : i - g.n);
  k[static_cast<size_t>(g.n) / 2] = 0.0;  // unpaired Nyquist mode carries no derivative
  return k;
}

// Periodized unit bump: ~1 on (0, L/2), ~0 on (-L/2, 0).
double step_bump(double x, double L, double w) {
  auto G = [&](double y) { return 0.5 * (std::tanh(y / w) - std::tanh((y - 0.5 * L) / w)); };
  return G(x - L) + G(x) + G(x + L);
}

FieldState assemble(const Grid& g, const std::vector<double>& rho,
                    const std::vector<double>& nu) {
  const int n = g.n;
  // phase = integral of nu anchored at x = 0; the total winding is brought
  // to a 2 pi multiple by a ramp confined to the far half
  std::vector<double> phi(static_cast<size_t>(n) + 1, 0.0);
  double dx = g.spacing();
  for (int i = 0; i < n; ++i) {
    double nu_next = nu[static_cast<size_t>((i + 1) % n)];
    phi[static_cast<size_t>(i) + 1] =
        phi[static_cast<size_t>(i)] + 0.5 * dx * (nu[static_cast<size_t>(i)] + nu_next);
  }
  double winding = phi[static_cast<size_t>(n)];
  double target = 2.0 * kPi * std::round(winding / (2.0 * kPi));
  double deficit = target - winding;

  double w2 = g.length / 32.0;
  std::vector<double> bump(static_cast<size_t>(n));
  double btot = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = g.node(i);
    double b = 1.0 - 0.5 * (std::tanh((x + 0.25 * g.length) / w2) -
                            std::tanh((x - 0.25 * g.length) / w2));
    bump[static_cast<size_t>(i)] = b;
    btot += b * dx;
  }
  FieldState fs{g, std::vector<cplx>(static_cast<size_t>(n)), 0.0};
  double bcum = 0.0;
  int i0 = n / 2;  // index of x = 0
  double phi0 = phi[static_cast<size_t>(i0)];
  for (int i = 0; i < n; ++i) {
    double ph = phi[static_cast<size_t>(i)] - phi0 + deficit * bcum / btot;
    fs.u[static_cast<size_t>(i)] =
        std::sqrt(rho[static_cast<size_t>(i)]) * std::polar(1.0, ph);
    bcum += bump[static_cast<size_t>(i)] * dx;
  }
  return fs;
}

}  // namespace

void validate_grid(const Grid& g) {
  if (g.n < 16 || (g.n & (g.n - 1)) != 0)
    throw DomainError("grid: n_points must be a power of two, at least 16");
  if (!(g.length > 0.0)) throw DomainError("grid: length must be positive");
}

FieldState init_from_step(const Grid& g, const StepData& sd, double width) {
  validate_grid(g);
  if (width < 4.0 * g.spacing())
    throw ResolutionError("init_from_step: smoothing width under 4 grid spacings");
  std::vector<double> rho(static_cast<size_t>(g.n)), nu(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    double s = step_bump(x, g.length, width);
    rho[static_cast<size_t>(i)] = sd.left.rho + (sd.right.rho - sd.left.rho) * s;
    nu[static_cast<size_t>(i)] = sd.left.nu + (sd.right.nu - sd.left.nu) * s;
  }
  return assemble(g, rho, nu);
}

FieldState init_from_profile(const Grid& g, const std::function<double(double)>& rho_fn,
                             const std::function<double(double)>& nu_fn, double width) {
  validate_grid(g);
  if (width < 4.0 * g.spacing())
    throw ResolutionError("init_from_profile: smoothing width under 4 grid spacings");
  double q = 0.25 * g.length;
  double w2 = std::max(width, g.length / 32.0);
  std::vector<double> rho(static_cast<size_t>(g.n)), nu(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    if (std::fabs(x) <= q) {
      rho[static_cast<size_t>(i)] = rho_fn(x);
      nu[static_cast<size_t>(i)] = nu_fn(x);
    } else {
      // bridge from f(+L/4) back to f(-L/4) across the far half
      double d = x > 0 ? x - q : x + 3.0 * q;  // arc distance from +L/4
      double wgt = 0.5 * (1.0 + std::tanh((d - q) / w2));
      rho[static_cast<size_t>(i)] = rho_fn(q) * (1.0 - wgt) + rho_fn(-q) * wgt;
      nu[static_cast<size_t>(i)] = nu_fn(q) * (1.0 - wgt) + nu_fn(-q) * wgt;
    }
  }
  return assemble(g, rho, nu);
}

double total_mass(const FieldState& fs) {
  double m = 0.0;
  for (const auto& v : fs.u) m += std::norm(v);
  return m * fs.grid.spacing();
}

namespace {

// u_t = -u_xxx - (3/2) i |u|^2 u_xx + (3/4) |u|^4 u_x - (3/2) i u_x^2 u*.
// The u_xxx term is integrated exactly (phase exp(i k^3 t) per mode); the
// remaining terms advance by classical RK4 on the transformed variable,
// with 2/3-rule truncation of the nonlinear products.
class Stepper {
 public:
  Stepper(const Grid& g, double dealias_fraction)
      : g_(g), fft_(g.n), k_(wavenumbers(g)), mask_(static_cast<size_t>(g.n), 1.0) {
    double kmax = kPi / g.spacing();
    for (int i = 0; i < g.n; ++i)
      if (std::fabs(k_[static_cast<size_t>(i)]) > dealias_fraction * kmax)
        mask_[static_cast<size_t>(i)] = 0.0;
  }

  void nonlinear(const std::vector<cplx>& uh, std::vector<cplx>& out) {
    size_t n = uh.size();
    u_.assign(uh.begin(), uh.end());
    ux_.resize(n);
    uxx_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      ux_[i] = cplx(0.0, k_[i]) * uh[i];
      uxx_[i] = -k_[i] * k_[i] * uh[i];
    }
    fft_.backward(u_);
    fft_.backward(ux_);
    fft_.backward(uxx_);
    out.resize(n);
    for (size_t i = 0; i < n; ++i) {
      double r = std::norm(u_[i]);
      out[i] = cplx(0.0, -1.5) * r * uxx_[i] + 0.75 * r * r * ux_[i] +
               cplx(0.0, -1.5) * ux_[i] * ux_[i] * std::conj(u_[i]);
    }
    fft_.forward(out);
    for (size_t i = 0; i < n; ++i) out[i] *= mask_[i];
  }

  void step(std::vector<cplx>& uh, double h) {
    size_t n = uh.size();
    e_.resize(n);
    e2_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      double th = k_[i] * k_[i] * k_[i] * 0.5 * h;
      e_[i] = std::polar(1.0, th);  // exp(i k^3 h / 2)
      e2_[i] = e_[i] * e_[i];
    }
    nonlinear(uh, k1_);
    t1_.resize(n);
    for (size_t i = 0; i < n; ++i) t1_[i] = e_[i] * (uh[i] + 0.5 * h * k1_[i]);
    nonlinear(t1_, k2_);
    for (size_t i = 0; i < n; ++i) k2_[i] *= std::conj(e_[i]);
    for (size_t i = 0; i < n; ++i) t1_[i] = e_[i] * (uh[i] + 0.5 * h * k2_[i]);
    nonlinear(t1_, k3_);
    for (size_t i = 0; i < n; ++i) k3_[i] *= std::conj(e_[i]);
    for (size_t i = 0; i < n; ++i) t1_[i] = e2_[i] * (uh[i] + h * k3_[i]);
    nonlinear(t1_, k4_);
    for (size_t i = 0; i < n; ++i) k4_[i] *= std::conj(e2_[i]);
    for (size_t i = 0; i < n; ++i)
      uh[i] = e2_[i] * (uh[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]));
  }

  Fft& fft() { return fft_; }
  const std::vector<double>& mask() const { return mask_; }

 private:
  Grid g_;
  Fft fft_;
  std::vector<double> k_, mask_;
  std::vector<cplx> u_, ux_, uxx_, t1_, k1_, k2_, k3_, k4_, e_, e2_;
};

}  // namespace

void evolve(FieldState& fs, double T, const SolverConfig& cfg,
            const std::function<void(const FieldState&)>& on_snapshot) {
  if (T < 0.0) throw DomainError("evolve: need T >= 0");
  if (!(cfg.dealias_fraction > 0.0) || cfg.dealias_fraction > 1.0)
    throw DomainError("evolve: dealias_fraction must be in (0, 1]");
  if (T == 0.0) return;

  double rho0 = 0.0;
  for (const auto& v : fs.u) rho0 = std::max(rho0, std::norm(v));
  double rho_scale = cfg.rho_scale > 0.0 ? cfg.rho_scale : 1.2 * rho0;

  Stepper st(fs.grid, cfg.dealias_fraction);
  double keff = cfg.dealias_fraction * kPi / fs.grid.spacing();
  double dt = cfg.dt > 0.0
                  ? cfg.dt
                  : std::min(0.4 * fs.grid.spacing(),
                             1.8 / (1.5 * std::max(1.0, rho_scale) * keff * keff));

  const FieldState saved = fs;
  const double blowup = 1e6 * std::max(rho0, 1.0);

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<cplx> uh = fs.u;
    st.fft().forward(uh);
    for (size_t i = 0; i < uh.size(); ++i) uh[i] *= st.mask()[i];

    double t_end = saved.time + T;
    double t = saved.time;
    auto snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    size_t isnap = 0;
    while (isnap < snaps.size() && snaps[isnap] <= t) ++isnap;

    bool bad = false;
    long since_check = 0;
    while (t < t_end - 1e-14 * std::max(1.0, std::fabs(t_end))) {
      double target = t_end;
      if (isnap < snaps.size() && snaps[isnap] < target) target = snaps[isnap];
      double h = std::min(dt, target - t);
      st.step(uh, h);
      t += h;
      if (++since_check >= 25) {
        since_check = 0;
        double s2 = 0.0;
        for (const auto& v : uh) s2 += std::norm(v);
        if (!std::isfinite(s2) || s2 * uh.size() > blowup * 1e4) {
          bad = true;
          break;
        }
      }
      if (isnap < snaps.size() && t >= snaps[isnap] - 1e-12 * std::max(1.0, std::fabs(t))) {
        if (on_snapshot) {
          FieldState snap{fs.grid, uh, t};
          st.fft().backward(snap.u);
          on_snapshot(snap);
        }
        ++isnap;
      }
    }
    if (!bad) {
      FieldState out{fs.grid, uh, t};
      st.fft().backward(out.u);
      double mx = 0.0;
      for (const auto& v : out.u) mx = std::max(mx, std::norm(v));
      if (std::isfinite(mx) && mx < blowup) {
        fs = std::move(out);
        return;
      }
      bad = true;
    }
    if (attempt == 0) {
      fs = saved;
      dt *= 0.5;  // one retry at half step
    }
  }
  throw InstabilityError("evolve: blow-up detected twice (auto dt and dt/2)");
}

Observables measure(const FieldState& fs, double window_len, double threshold_frac,
                    double jump_scale, double x_min, double x_max) {
  const int n = fs.grid.n;
  Observables ob;
  ob.x.resize(static_cast<size_t>(n));
  ob.rho.resize(static_cast<size_t>(n));
  ob.nu.resize(static_cast<size_t>(n));
  ob.nu_valid.resize(static_cast<size_t>(n));

  Fft fft(n);
  auto k = wavenumbers(fs.grid);
  std::vector<cplx> uh = fs.u;
  fft.forward(uh);
  std::vector<cplx> ux(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    ux[static_cast<size_t>(i)] =
        cplx(0.0, k[static_cast<size_t>(i)]) * uh[static_cast<size_t>(i)];
  fft.backward(ux);

  double rho_max = 0.0;
  for (int i = 0; i < n; ++i)
    rho_max = std::max(rho_max, std::norm(fs.u[static_cast<size_t>(i)]));
  double eps = 1e-6 * rho_max;

  for (int i = 0; i < n; ++i) {
    size_t si = static_cast<size_t>(i);
    ob.x[si] = fs.grid.node(i);
    ob.rho[si] = std::norm(fs.u[si]);
    bool ok = ob.rho[si] > eps;
    ob.nu_valid[si] = ok;
    ob.nu[si] = ok ? std::imag(ux[si] * std::conj(fs.u[si])) / ob.rho[si] : 0.0;
  }
  ob.mass = total_mass(fs);

  // oscillation amplitude: sliding max-min of the moving-average residual
  // (the symmetric average removes the local linear trend)
  int hw = std::max(2, static_cast<int>(std::lround(0.5 * window_len / fs.grid.spacing())));
  std::vector<double> resid(static_cast<size_t>(n));
  std::vector<double> pref(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i)
    pref[static_cast<size_t>(i) + 1] =
        pref[static_cast<size_t>(i)] + ob.rho[static_cast<size_t>(i)];
  for (int i = 0; i < n; ++i) {
    int a = std::max(0, i - hw), b = std::min(n - 1, i + hw);
    double avg =
        (pref[static_cast<size_t>(b) + 1] - pref[static_cast<size_t>(a)]) / (b - a + 1);
    resid[static_cast<size_t>(i)] = ob.rho[static_cast<size_t>(i)] - avg;
  }

  double scale = jump_scale;
  if (scale <= 0.0) {
    double lo = 1e300, hi = -1e300;
    for (double r : ob.rho) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    scale = hi - lo;
  }
  double thresh = threshold_frac * scale;

  ob.edges_found = false;
  for (int i = 0; i < n; ++i) {
    double x = fs.grid.node(i);
    if (x < x_min || x > x_max) continue;
    int a = std::max(0, i - hw), b = std::min(n - 1, i + hw);
    double lo = 1e300, hi = -1e300;
    for (int j = a; j <= b; ++j) {
      lo = std::min(lo, resid[static_cast<size_t>(j)]);
      hi = std::max(hi, resid[static_cast<size_t>(j)]);
    }
    if (hi - lo > thresh) {
      if (!ob.edges_found) {
        ob.edges_found = true;
        ob.osc_left = x;
      }
      ob.osc_right = x;
    }
  }
  return ob;
}

}  // namespace dsw::pde
