#pragma once

#include <complex>

namespace mslab {

using cplx = std::complex<double>;

// Knobs shared by the numeric kernels. Every residual threshold used for
// construction-time validation lives here so callers can loosen or tighten
// a whole pipeline at once.
struct NumericOptions {
  double quad_target = 1e-12;  // relative step-to-step convergence target on the circle
  int quad_min_nodes = 256;    // first trapezoid grid, power of two
  int quad_max_nodes = 65536;  // divergence cap, power of two
  double cluster_tol = 1e-6;   // relative radius for root clustering
  double verify_tol = 1e-9;    // residual tolerance for invariant checks
};

inline const NumericOptions& default_options() {
  static const NumericOptions opts{};
  return opts;
}

}  // namespace mslab
