#pragma once

#include <vector>

#include "qepi/diffusion.hpp"
#include "qepi/fisher.hpp"

namespace qepi {

// --- Gaussian backend --------------------------------------------------------

// S(E_lambda(X x Y)) - lambda S(X) - (1-lambda) S(Y), exact covariance rule.
CheckReport gaussian_qepi_prime_check(const GaussianState& x,
                                      const GaussianState& y, double lambda,
                                      double tolerance = 1e-9);

// exp(S_out/n) - exp(S_X/n)/2 - exp(S_Y/n)/2 at lambda = 1/2.
CheckReport gaussian_qepi_power_check(const GaussianState& x,
                                      const GaussianState& y,
                                      double tolerance = 1e-9);

// --- Fock backend ------------------------------------------------------------

// Entropy rate under diffusion vs J/4 at base point e^{tL}(rho); residual
// must be <= max(1e-3 * J/4, 1e-5).
CheckReport de_bruijn_residual(const DensityMatrix& rho, double t, double h,
                               const EvolveOptions& opts = {});

CheckReport qepi_prime_check(const DensityMatrix& rho_x,
                             const DensityMatrix& rho_y, double lambda,
                             double tolerance = 1e-6);

CheckReport qepi_power_check(const DensityMatrix& rho_x,
                             const DensityMatrix& rho_y,
                             double tolerance = 1e-6);

// delta(t) = S(e^{tL} E_lambda(X x Y)) - lambda S(e^{tL} X)
//          - (1-lambda) S(e^{tL} Y), evaluated on the grid; must be
// non-increasing within the per-step tolerance and end nonnegative.
struct DeltaTrace {
  std::vector<double> t;
  std::vector<double> delta;
};
CheckReport delta_monotonicity_trace(const DensityMatrix& rho_x,
                                     const DensityMatrix& rho_y, double lambda,
                                     const std::vector<double>& t_grid,
                                     const EvolveOptions& opts = {},
                                     DeltaTrace* trace_out = nullptr);

// Blachman construction for the 50:50 entropy power inequality: diffusion
// clocks F, G driven by the entropy powers, H = (F+G)/2, and the ratio
// delta(t) = (E_X(F) + E_Y(G)) / (2 E_Z(H)).
struct BlachmanTrace {
  std::vector<double> t;
  std::vector<double> F, G, H;
  std::vector<double> E_x, E_y, E_z;
  std::vector<double> delta;
  // Stam slack 2/J_Z - 1/J_X - 1/J_Y at grid points where all three states
  // pass the rank condition (NaN where skipped).
  std::vector<double> stam_slack;
};

struct BlachmanOptions {
  double t_max = 2.0;
  int grid_points = 17;
  // Clocks beyond this diffusion time overflow the truncation-safe horizon.
  double clock_horizon = 6.0;
  EvolveOptions evolve = {1e-7, std::numeric_limits<double>::infinity()};
  double ode_tol = 1e-6;  // clock integrator accuracy
  // Entropy-vs-diffusion-time profiles are tabulated once per input on a
  // uniform grid up to the horizon and interpolated inside the clock ODE.
  int profile_points = 201;
  bool record_stam = false;
};

// Verifies monotone non-decrease of delta along the trajectory and
// delta <= 1 at the far end (the ratio converges to 1 from below, and
// delta(0) <= 1 is the 50:50 entropy power inequality); margin is
// min(smallest per-step increase, 1 - delta(end)).
CheckReport blachman_replay(const DensityMatrix& rho_x,
                            const DensityMatrix& rho_y,
                            const BlachmanOptions& opts = {},
                            BlachmanTrace* trace_out = nullptr);

}  // namespace qepi
