#pragma once

#include <functional>

#include "qepi/fock.hpp"

namespace qepi {

// Phase-space directions are indexed like the quadratures: even k is Q_{k/2},
// odd k is P_{k/2}. The translation family in direction R is
// rho^(theta) = D_R(theta) rho D_R(theta)^dag with D_R(theta) = D(theta e_R),
// a covariant family with Hermitian generator H (H = -P_j for R = Q_j,
// H = Q_j for R = P_j), normalized so the mean shifts by +theta e_R.

// Minimum eigenvalue below which the divergence-based quantity is treated as
// ill-defined (relative to the log clamp).
constexpr double kRankFloor = 10.0 * kEigClamp;

struct TranslationFamily {
  DensityMatrix base;
  int direction;  // quadrature index in [0, 2n)

  TranslationFamily(DensityMatrix base_in, int direction_in);

  const CMat& generator() const { return generator_; }
  // rho^(theta)
  DensityMatrix at(double theta) const;

 private:
  CMat generator_;
};

// Commutator formula tr(rho [H, [H, log rho]]). Throws RankDeficient when
// rho is not full rank after clamping.
double fisher_directional_commutator(const DensityMatrix& rho, int direction);

// Independent oracle: Richardson-extrapolated second central difference of
// theta -> S(rho || rho^(theta)) at steps h and h/2.
double fisher_directional_fd(const DensityMatrix& rho, int direction,
                             double h = 5e-3);

// Sum over all 2n directions via the commutator formula, reusing one
// eigendecomposition of rho.
double fisher_total(const DensityMatrix& rho);

// (1 - eps) rho + eps thermal(0.5)^n; guarantees full rank.
DensityMatrix regularize(const DensityMatrix& rho, double eps = 1e-3);

// J(rho^(c theta); theta) = c^2 J(rho^(theta); theta), via finite differences.
CheckReport check_reparametrization(const DensityMatrix& rho, int direction,
                                    double c);

using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

// Data processing: Fisher information of the processed family does not
// exceed that of the input family. Both sides via the finite-difference
// oracle; margin = J_in - J_out.
CheckReport check_data_processing(const DensityMatrix& rho, int direction,
                                  const Channel& channel,
                                  const std::string& channel_name = "channel",
                                  double h = 5e-3);

// Quantum Stam at lambda = 1/2: margin = 2/J_out - 1/J_X - 1/J_Y.
CheckReport check_stam(const DensityMatrix& rho_x, const DensityMatrix& rho_y);

// Convexity: margin = lambda J_X + (1-lambda) J_Y - J_out.
CheckReport check_convexity(const DensityMatrix& rho_x,
                            const DensityMatrix& rho_y, double lambda);

// Weighted form: margin = wX^2 J_X + wY^2 J_Y - w^2 J_out,
// w = sqrt(lambda) wX + sqrt(1-lambda) wY.
CheckReport check_weighted_convexity(const DensityMatrix& rho_x,
                                     const DensityMatrix& rho_y, double lambda,
                                     double w_x, double w_y);

// E_lambda(rho_X^(wX theta) x rho_Y^(wY theta)) equals
// (E_lambda(rho_X x rho_Y))^(w theta); margin is minus the trace distance.
CheckReport check_translation_compatibility(const DensityMatrix& rho_x,
                                            const DensityMatrix& rho_y,
                                            double lambda, double w_x,
                                            double w_y, double theta,
                                            int direction);

}  // namespace qepi
