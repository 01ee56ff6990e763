#ifndef DSW_PDE_HPP
#define DSW_PDE_HPP

#include <complex>
#include <functional>
#include <vector>

#include "dsw/riemann.hpp"

namespace dsw::pde {

// Uniform periodic grid on [-length/2, length/2).
struct Grid {
  int n = 4096;          // power of two
  double length = 400.0;

  double spacing() const { return length / n; }
  double node(int i) const { return -0.5 * length + i * spacing(); }
};

// Throws DomainError unless n_points is a power of two (>= 16) with a
// positive length.
void validate_grid(const Grid& g);

struct FieldState {
  Grid grid;
  std::vector<std::complex<double>> u;
  double time = 0.0;
};

struct SolverConfig {
  double dt = 0.0;                    // 0: pick from the stability estimate
  double dealias_fraction = 2.0 / 3.0;
  double rho_scale = 0.0;             // 0: from the initial data
  std::vector<double> snapshot_times; // callback fires at these times
};

// Smoothed two-sided step: |u|^2 ramps rho_L -> rho_R at x = 0 over scale
// `width`, with the mirrored return ramp at the domain wrap; the phase is
// the integral of the smoothed velocity, de-wound to a 2 pi multiple over
// the far half.  Throws ResolutionError when width < 4 spacings.
FieldState init_from_step(const Grid& g, const StepData& sd, double width);

// General profile initializer: rho/nu sampled on [-length/4, length/4],
// closed periodically across the far half.
FieldState init_from_profile(const Grid& g, const std::function<double(double)>& rho,
                             const std::function<double(double)>& nu, double width);

// Integrate to fs.time + T: exact integrating factor for the third
// derivative, explicit RK4 for the remaining nonlinear terms, 2/3-rule
// dealiasing.  On detected blow-up the run restarts once with dt halved;
// a second blow-up throws InstabilityError.
void evolve(FieldState& fs, double T, const SolverConfig& cfg,
            const std::function<void(const FieldState&)>& on_snapshot = {});

struct Observables {
  std::vector<double> x, rho, nu;
  std::vector<bool> nu_valid;         // false in vacuum cells
  double mass = 0.0;
  bool edges_found = false;
  double osc_left = 0.0, osc_right = 0.0;
};

// Density/velocity fields, total mass, and the left/rightmost positions
// where the detrended oscillation amplitude exceeds threshold_frac of
// jump_scale inside [x_min, x_max].  jump_scale = 0 uses max - min of rho.
Observables measure(const FieldState& fs, double window_len = 8.0,
                    double threshold_frac = 0.05, double jump_scale = 0.0,
                    double x_min = -1e300, double x_max = 1e300);

// dx * sum |u|^2.
double total_mass(const FieldState& fs);

}  // namespace dsw::pde

#endif
