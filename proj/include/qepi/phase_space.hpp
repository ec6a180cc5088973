#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qepi/check_report.hpp"
#include "qepi/errors.hpp"
#include "qepi/rng.hpp"

namespace qepi {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Quadrature ordering is R = (Q1, P1, ..., Qn, Pn) throughout.
//
// Convention note: dimensionless hbar normalization, fixed by gamma >= iJ
// together with the anticommutator definition of gamma; the vacuum has
// gamma = I.

// The n-fold direct sum of [[0,1],[-1,0]].
Mat symplectic_form(int n_modes);

// Exact Gaussian state: first moments d (2n) and covariance gamma (2n x 2n).
// gamma is symmetrized on construction; gamma + iJ >= 0 and all symplectic
// eigenvalues >= 1 are enforced up to eigensolver noise.
struct GaussianState {
  int n = 0;
  Vec d;
  Mat gamma;

  GaussianState(Vec d_in, Mat gamma_in);
  static GaussianState vacuum(int n_modes);
  static GaussianState thermal(int n_modes, double mean_photon);
};

// Gaussian channel (X, Y, xi): gamma -> X gamma X^T + Y, d -> X d + xi.
struct GaussianChannel {
  int n_in = 0;
  int n_out = 0;
  Mat X;
  Mat Y;
  Vec xi;

  GaussianChannel(Mat X_in, Mat Y_in, Vec xi_in);
};

// Symplectic eigenvalues of gamma, sorted descending. Computed as |Im| of
// the eigenvalues of J*gamma, which occur in +-i*nu pairs.
std::vector<double> symplectic_eigenvalues(const Mat& gamma);

// N(nu) = (nu - 1)/2.
double mean_photon(double nu);

// g(N) = (N+1) ln(N+1) - N ln N, with g(0) = 0 by continuity. Nats.
double g_entropy(double mean_photon);

// S(rho) = sum_k g(N(nu_k)). Independent of d.
double gaussian_entropy(const GaussianState& s);

GaussianState apply_channel(const GaussianChannel& c, const GaussianState& s);

// second after first: (X2 X1, X2 Y1 X2^T + Y2, X2 xi1 + xi2).
GaussianChannel compose(const GaussianChannel& second,
                        const GaussianChannel& first);

GaussianChannel identity_channel(int n_modes);

// 2n modes -> n modes; X = (sqrt(lambda) I | sqrt(1-lambda) I), Y = 0.
GaussianChannel beamsplitter_channel(double lambda, int n_modes);

// e^{tL} on covariance level: X = I, Y = t I, xi = 0.
GaussianChannel diffusion_channel(double t, int n_modes);

// Pure displacement: X = I, Y = 0.
GaussianChannel translate_channel(const Vec& xi);

// Verifies the weak-majorization relation between nu(A+B) and
// nu(A) + nu(B): every ascending partial sum of nu(A+B) dominates the
// matching partial sum of nu(A) + nu(B). Margin is the minimum slack.
CheckReport weak_submajorization_check(const Mat& A, const Mat& B);

// Random symplectic matrix: product of single-mode rotations, single-mode
// squeezers (|r| <= 1) and two-mode beamsplitter-type rotations.
Mat random_symplectic(int n_modes, Rng& rng, int factors = -1);

// gamma = S D S^T with D = diag(nu_1, nu_1, ...), nu_k ~ U[1, 5];
// valid by construction.
GaussianState random_gaussian_state(int n_modes, Rng& rng);

}  // namespace qepi
