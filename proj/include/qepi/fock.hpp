#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qepi/phase_space.hpp"

namespace qepi {

using Complex = std::complex<double>;

// Default truncation budget: maximum tolerated population of the top Fock
// level per mode for states accepted into verification runs.
constexpr double kDefaultTruncationBudget = 1e-8;

// Truncated Fock space of `modes` modes with `cutoff` levels per mode
// (basis |0> ... |cutoff-1>). Owns the cached operator matrices; immutable
// after construction and shareable across threads.
class FockSpace {
 public:
  FockSpace(int modes, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return dim_; }  // cutoff^modes

  const CMat& annihilation(int mode) const { return a_[mode]; }
  const CMat& creation(int mode) const { return adag_[mode]; }
  const CMat& number_op(int mode) const { return num_[mode]; }
  // R_k for k in [0, 2*modes): even k -> Q_{k/2}, odd k -> P_{k/2}.
  const CMat& quadrature(int k) const { return quad_[k]; }

 private:
  int modes_;
  int cutoff_;
  int dim_;
  std::vector<CMat> a_, adag_, num_, quad_;
};

using FockPtr = std::shared_ptr<const FockSpace>;

FockPtr make_space(int modes, int cutoff);

// Truncated density matrix. Hermitized on construction; unit trace and
// positivity are checked.
struct DensityMatrix {
  FockPtr space;
  CMat mat;

  DensityMatrix(FockPtr space_in, CMat mat_in);

  // Maximum over modes of the population of the top Fock level.
  double tail_mass() const;
};

// Throws TruncationBudgetExceeded if tail mass exceeds the budget.
void require_tail(const DensityMatrix& rho,
                  double budget = kDefaultTruncationBudget);

// --- Constructors -----------------------------------------------------------

DensityMatrix make_vacuum(FockPtr space);
// Thermal product state, mean photon N per mode.
DensityMatrix make_thermal(FockPtr space, double mean_photon,
                           double budget = kDefaultTruncationBudget);
// Coherent product state with the same amplitude on every mode.
DensityMatrix make_coherent(FockPtr space, Complex alpha,
                            double budget = kDefaultTruncationBudget);
// Number state |k> per mode.
DensityMatrix make_fock(FockPtr space, int photons);
// Even cat: normalized |alpha> + e^{i phase} |-alpha> per mode.
DensityMatrix make_cat(FockPtr space, Complex alpha, double phase = 0.0,
                       double budget = kDefaultTruncationBudget);
// Haar-random rank-r mixture (partial trace of a Haar purification),
// deterministic per seed. Rank 1 gives a pure state.
DensityMatrix random_state(FockPtr space, std::uint64_t seed, int rank);
DensityMatrix random_state(FockPtr space, Rng& rng, int rank);
// Random mixture with amplitudes damped by a thermal-like envelope of the
// given mean photon number, keeping the tail within the truncation budget.
DensityMatrix random_state_enveloped(FockPtr space, Rng& rng, int rank,
                                     double envelope_mean_photon);

// Convex mixture (1-w) rho + w sigma.
DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma,
                  double w);

// --- Operators --------------------------------------------------------------

// Weyl displacement D(xi) = exp(i (J xi) . R); D(xi) rho D(xi)^dag shifts
// the mean vector by +xi.
CMat displacement_op(const FockSpace& space, const Vec& xi);

// U = exp[sum_j theta (a_j^dag b_j - a_j b_j^dag)], theta = arccos(sqrt(lambda)),
// acting on 2n modes (first n = X register, last n = Y register).
CMat beamsplitter_unitary(const FockSpace& space2n, double lambda);

// Beamsplitter mixer with a cached unitary, for repeated combines on the
// same register shape.
class Beamsplitter {
 public:
  Beamsplitter(FockPtr single_register, double lambda);

  DensityMatrix combine(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                        double budget = kDefaultTruncationBudget) const;
  // Full 2n-mode conjugation without the partial trace.
  DensityMatrix conjugate(const DensityMatrix& rho_xy) const;

  const FockPtr& doubled_space() const { return doubled_; }
  double lambda() const { return lambda_; }

 private:
  FockPtr single_;
  FockPtr doubled_;
  double lambda_;
  CMat unitary_;
};

// One-shot convenience wrapper around Beamsplitter.
DensityMatrix beamsplitter_combine(const DensityMatrix& rho_x,
                                   const DensityMatrix& rho_y, double lambda,
                                   double budget = kDefaultTruncationBudget);

// Tensor product; result lives on a fresh (n_x + n_y)-mode space.
DensityMatrix tensor(const DensityMatrix& rho_x, const DensityMatrix& rho_y);

// Keep the first `keep` modes.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

// --- Functionals ------------------------------------------------------------

// Eigenvalue clamp used inside matrix logarithms.
constexpr double kEigClamp = 1e-12;

double von_neumann_entropy(const DensityMatrix& rho);
// S(rho||sigma); throws SupportMismatch if rho has weight > 1e-6 outside the
// clamped support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity_pure(const DensityMatrix& rho, const DensityMatrix& pure);

// chi_rho(xi) = tr(D(xi) rho).
Complex characteristic_fn(const DensityMatrix& rho, const Vec& xi);
// Q(xi) = (2 pi)^{-n} <xi| rho |xi>.
double q_function(const DensityMatrix& rho, const Vec& xi);

// First and second moments per the anticommutator convention.
struct Moments {
  Vec d;
  Mat gamma;
};
Moments moments(const DensityMatrix& rho);

// Gaussian state with the same first and second moments.
GaussianState gaussify(const DensityMatrix& rho);

}  // namespace qepi
