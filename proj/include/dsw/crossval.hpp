#ifndef DSW_CROSSVAL_HPP
#define DSW_CROSSVAL_HPP

#include <string>
#include <vector>

#include "dsw/hodograph.hpp"
#include "dsw/pde.hpp"
#include "dsw/riemann.hpp"

namespace dsw::crossval {

struct Entry {
  std::string name;
  double predicted = 0.0;
  double measured = 0.0;
  double rel_error = 0.0;
};

struct Report {
  std::vector<Entry> edges;
  std::vector<Entry> plateaus;
  double mass_drift_rel = 0.0;
  double time = 0.0;
};

// Detrended sliding-window oscillation amplitude of the measured density.
std::vector<double> oscillation_amplitude(const pde::Observables& ob, double window_len);

// Left/rightmost positions inside [x_lo, x_hi] where the amplitude exceeds
// threshold; returns false when nothing crosses.
bool oscillation_extent(const pde::Observables& ob, const std::vector<double>& amp,
                        double threshold, double x_lo, double x_hi, double& left,
                        double& right);

// Matched-filter position of a smooth pattern edge: the shift minimizing
// the L2 mismatch between the measured density and the translated
// analytic profile around the edge.  Returns the shift (measured minus
// predicted position).
double edge_shift(const pde::Observables& ob, const WavePattern& wp, double t, double x_edge,
                  double half_window, double shift_max);

double window_average(const std::vector<double>& x, const std::vector<double>& f, double a,
                      double b);

// Run the direct simulation for step data and compare plateau levels and
// edge positions against the modulation-theory pattern.
Report compare_step(const StepData& sd, double t, const pde::Grid& g, double width);

// Same for the cubic-breaking fan: initial data is the smoothed
// dispersionless profile at the breaking instant; compares both DSW edge
// positions against the closed-form laws.
Report compare_cubic(const CubicBreakData& d, double t, const pde::Grid& g, double width);

}  // namespace dsw::crossval

#endif
