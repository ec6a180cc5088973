#pragma once

#include <limits>
#include <vector>

#include "qepi/fock.hpp"

namespace qepi {

// Diffusion generator L(rho) = -(1/4) sum_j [R_j, [R_j, rho]].
// Traceless, Hermitian output; L itself is Hermitian with respect to the
// Hilbert-Schmidt inner product.
CMat lindblad_rhs(const FockSpace& space, const CMat& rho);
DensityMatrix lindblad_rhs(const DensityMatrix& rho);

struct EvolveOptions {
  double tol = 1e-9;  // local error target of the adaptive integrator
  // Top-level population budget; infinity disables the truncation guard
  // (the truncated-space semigroup is still exact in its own right).
  double budget = kDefaultTruncationBudget;
};

// rho_t = e^{tL}(rho) by adaptive embedded Runge-Kutta (Dormand-Prince 5(4)).
// The run is refused up front when the cutoff cannot hold the photon growth
// <n> -> <n> + t/2, and the output tail is re-checked afterwards.
DensityMatrix evolve_ode(const DensityMatrix& rho, double t,
                         const EvolveOptions& opts = {});

// Exact e^{tL} on a one-mode register. The generator preserves the
// coherence offset m - n of the Fock matrix elements, so it splits into
// real symmetric tridiagonal blocks which are diagonalized once; every
// subsequent application costs a few small matvecs.
class DiffusionPropagator {
 public:
  explicit DiffusionPropagator(FockPtr space);

  DensityMatrix apply(const DensityMatrix& rho, double t,
                      double budget = kDefaultTruncationBudget) const;

 private:
  FockPtr space_;
  std::vector<Mat> vecs_;  // one block per offset k >= 0
  std::vector<Vec> vals_;
};

// Cached-propagator convenience wrapper (one-mode registers only).
DensityMatrix evolve_spectral(const DensityMatrix& rho, double t,
                              double budget = kDefaultTruncationBudget);

// Independent realization of e^{tL}: Gaussian mixture of displacements with
// per-quadrature variance t/2, discretized by Gauss-Hermite quadrature of
// the given order per phase-space dimension.
DensityMatrix evolve_random_displacement(const DensityMatrix& rho, double t,
                                         int order,
                                         double budget = kDefaultTruncationBudget);

// Gauss-Hermite nodes/weights for int f(x) e^{-x^2} dx (physicists' weight).
void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights);

// E_lambda(e^{tX L} x e^{tY L}) vs e^{tL} E_lambda with t = l tX + (1-l) tY;
// margin is minus the trace distance between the two compositions.
CheckReport check_beamsplitter_compatibility(const DensityMatrix& rho_x,
                                             const DensityMatrix& rho_y,
                                             double lambda, double t_x,
                                             double t_y,
                                             const EvolveOptions& opts = {});

// n g(N(t-1)) <= S(e^{tL} rho) <= sum_k g(N(t + nu_k)), stated for t > 2.
// Margin is the smaller of the two slacks.
CheckReport check_scaling_bounds(const DensityMatrix& rho, double t,
                                 const EvolveOptions& opts = {});

// |S(e^{tL} rho)/n - (1 - ln 2 + ln t)| must decrease along the grid.
CheckReport check_asymptotics(const DensityMatrix& rho,
                              const std::vector<double>& t_grid,
                              const EvolveOptions& opts = {});

// S(e^{tL}(rho^G)) - S(e^{tL}(rho)), the relative entropy to the evolved
// gaussification; decreasing in t.
double gaussification_gap(const DensityMatrix& rho, double t,
                          const EvolveOptions& opts = {});

}  // namespace qepi
