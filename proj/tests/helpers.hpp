#pragma once

#include <cmath>

#include "doctest.h"
#include "qepi/fock.hpp"
#include "qepi/rng.hpp"

namespace qepi::test {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Random symmetric positive definite matrix with a controlled spectrum.
inline Mat random_spd(int dim, Rng& rng, double shift = 0.5) {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
  }
  return m * m.transpose() / dim + shift * Mat::Identity(dim, dim);
}

// Full-rank random state whose tail stays inside the truncation budget.
// A small maximally mixed admixture keeps every eigenvalue well above the
// Fisher rank floor even at generous cutoffs.
inline DensityMatrix full_rank_state(FockPtr space, Rng& rng) {
  const DensityMatrix raw = random_state_enveloped(space, rng, 3, 0.4);
  const DensityMatrix enveloped = mix(raw, make_thermal(space, 0.4, kInf), 0.2);
  const int d = space->dim();
  const DensityMatrix mixed(space, CMat::Identity(d, d) / double(d));
  return mix(enveloped, mixed, 1e-3);
}

// Smallest cutoff whose top-level thermal population drops below `target`.
// Fisher evaluations need this two-sided: the tail must be negligible while
// every retained population stays above the rank floor.
inline int fisher_thermal_cutoff(double n, double target = 1e-9) {
  const double q = n / (n + 1.0);
  int d = 16;
  while ((1.0 - q) * std::pow(q, d - 1) > target) ++d;
  return d;
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qepi::test
