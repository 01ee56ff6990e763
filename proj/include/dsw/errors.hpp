#ifndef DSW_ERRORS_HPP
#define DSW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dsw {

// Invalid physical input (outside the admissible domain).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A configuration that is degenerate for the requested operation
// (coincident Riemann invariants, undefined wavelength, ...).
struct DegenerateError : std::domain_error {
  using std::domain_error::domain_error;
};

// Root-finding / nonlinear-solve failure, with diagnostics in what().
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query lies outside the region where the requested solution branch exists.
struct OutOfRegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time integration blew up.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid cannot resolve the requested feature.
struct ResolutionError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace dsw

#endif
