#include "qepi/phase_space.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace qepi {

namespace {

constexpr double kUncertaintyTol = 1e-10;   // min eig of gamma + iJ
constexpr double kSympEigFloor = 1e-9;      // nu_k >= 1 - this
constexpr double kPairingTol = 1e-8;
constexpr double kPosDefFloor = 1e-12;

void check_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected nonempty 2n x 2n matrix, got " << m.rows()
       << " x " << m.cols();
    throw DimensionMismatch(os.str());
  }
}

// Minimum eigenvalue of the Hermitian matrix gamma + iJ.
double min_eig_uncertainty(const Mat& gamma) {
  const int dim = static_cast<int>(gamma.rows());
  const Mat J = symplectic_form(dim / 2);
  CMat h = gamma.cast<std::complex<double>>() +
           std::complex<double>(0.0, 1.0) * J.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Mat symplectic_form(int n_modes) {
  Mat J = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    J(2 * j, 2 * j + 1) = 1.0;
    J(2 * j + 1, 2 * j) = -1.0;
  }
  return J;
}

GaussianState::GaussianState(Vec d_in, Mat gamma_in)
    : n(static_cast<int>(d_in.size()) / 2),
      d(std::move(d_in)),
      gamma(std::move(gamma_in)) {
  check_square(gamma, "GaussianState covariance");
  if (gamma.rows() != d.size()) {
    throw DimensionMismatch("GaussianState: d and gamma size mismatch");
  }
  gamma = ((gamma + gamma.transpose()) / 2.0).eval();
  const double mu = min_eig_uncertainty(gamma);
  if (mu < -kUncertaintyTol) {
    std::ostringstream os;
    os << "GaussianState: gamma + iJ has min eigenvalue " << mu;
    throw UncertaintyViolation(os.str());
  }
  for (double nu : symplectic_eigenvalues(gamma)) {
    if (nu < 1.0 - kSympEigFloor) {
      std::ostringstream os;
      os << "GaussianState: symplectic eigenvalue " << nu << " < 1";
      throw UncertaintyViolation(os.str());
    }
  }
}

GaussianState GaussianState::vacuum(int n_modes) {
  return GaussianState(Vec::Zero(2 * n_modes),
                       Mat::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState GaussianState::thermal(int n_modes, double mean_photon) {
  if (mean_photon < 0.0) throw DomainError("thermal: N < 0");
  const double nu = 2.0 * mean_photon + 1.0;
  return GaussianState(Vec::Zero(2 * n_modes),
                       nu * Mat::Identity(2 * n_modes, 2 * n_modes));
}

GaussianChannel::GaussianChannel(Mat X_in, Mat Y_in, Vec xi_in)
    : X(std::move(X_in)), Y(std::move(Y_in)), xi(std::move(xi_in)) {
  if (X.rows() % 2 != 0 || X.cols() % 2 != 0 || X.rows() == 0 ||
      X.cols() == 0) {
    throw DimensionMismatch("GaussianChannel: X must be 2n_out x 2n_in");
  }
  n_in = static_cast<int>(X.cols()) / 2;
  n_out = static_cast<int>(X.rows()) / 2;
  if (Y.rows() != X.rows() || Y.cols() != X.rows() || xi.size() != X.rows()) {
    throw DimensionMismatch("GaussianChannel: Y/xi size mismatch with X");
  }
  Y = ((Y + Y.transpose()) / 2.0).eval();
  // Complete positivity: Y + i(J_out - X J_in X^T) >= 0.
  const Mat J_out = symplectic_form(n_out);
  const Mat J_in = symplectic_form(n_in);
  const Mat A = J_out - X * J_in * X.transpose();
  CMat h = Y.cast<std::complex<double>>() +
           std::complex<double>(0.0, 1.0) * A.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  const double mu = es.eigenvalues().minCoeff();
  if (mu < -kUncertaintyTol) {
    std::ostringstream os;
    os << "GaussianChannel: CP condition violated, min eigenvalue " << mu;
    throw DomainError(os.str());
  }
}

std::vector<double> symplectic_eigenvalues(const Mat& gamma) {
  check_square(gamma, "symplectic_eigenvalues");
  const Mat sym = (gamma + gamma.transpose()) / 2.0;
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= kPosDefFloor) {
      std::ostringstream os;
      os << "symplectic_eigenvalues: gamma not positive definite (min "
            "eigenvalue "
         << es.eigenvalues().minCoeff() << ")";
      throw NonPositiveCovariance(os.str());
    }
  }
  const int n = static_cast<int>(gamma.rows()) / 2;
  const Mat jg = symplectic_form(n) * sym;
  Eigen::EigenSolver<Mat> es(jg, /*computeEigenvectors=*/false);
  const CVec ev = es.eigenvalues();

  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  std::vector<double> pos;  // |Im| of eigenvalues with positive imaginary part
  std::vector<double> neg;
  for (int k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k).real()) > kPairingTol * scale) {
      throw PairingFailure(
          "symplectic_eigenvalues: eigenvalue of J*gamma has nonzero real "
          "part");
    }
    (ev(k).imag() >= 0 ? pos : neg).push_back(std::abs(ev(k).imag()));
  }
  if (pos.size() != neg.size()) {
    throw PairingFailure("symplectic_eigenvalues: unpaired eigenvalues");
  }
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (std::abs(pos[k] - neg[k]) > kPairingTol * scale) {
      throw PairingFailure(
          "symplectic_eigenvalues: +-i nu pairing broken beyond tolerance");
    }
  }
  return pos;
}

double mean_photon(double nu) {
  if (nu < 1.0 - kSympEigFloor) {
    throw DomainError("mean_photon: nu < 1");
  }
  return std::max(0.0, (nu - 1.0) / 2.0);
}

double g_entropy(double N) {
  if (N < 0.0) throw DomainError("g_entropy: N < 0");
  if (N == 0.0) return 0.0;
  return (N + 1.0) * std::log(N + 1.0) - N * std::log(N);
}

double gaussian_entropy(const GaussianState& s) {
  double total = 0.0;
  for (double nu : symplectic_eigenvalues(s.gamma)) {
    // Truncation/eigensolver noise can leave nu marginally below 1.
    total += g_entropy(mean_photon(std::max(nu, 1.0)));
  }
  return total;
}

GaussianState apply_channel(const GaussianChannel& c, const GaussianState& s) {
  if (c.n_in != s.n) {
    throw DimensionMismatch("apply_channel: channel/state mode mismatch");
  }
  return GaussianState(c.X * s.d + c.xi,
                       c.X * s.gamma * c.X.transpose() + c.Y);
}

GaussianChannel compose(const GaussianChannel& second,
                        const GaussianChannel& first) {
  if (second.n_in != first.n_out) {
    throw DimensionMismatch("compose: inner dimensions differ");
  }
  return GaussianChannel(second.X * first.X,
                         second.X * first.Y * second.X.transpose() + second.Y,
                         second.X * first.xi + second.xi);
}

GaussianChannel identity_channel(int n_modes) {
  const int dim = 2 * n_modes;
  return GaussianChannel(Mat::Identity(dim, dim), Mat::Zero(dim, dim),
                         Vec::Zero(dim));
}

GaussianChannel beamsplitter_channel(double lambda, int n_modes) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("beamsplitter_channel: lambda must be in (0,1)");
  }
  const int dim = 2 * n_modes;
  Mat X(dim, 2 * dim);
  X << std::sqrt(lambda) * Mat::Identity(dim, dim),
      std::sqrt(1.0 - lambda) * Mat::Identity(dim, dim);
  return GaussianChannel(X, Mat::Zero(dim, dim), Vec::Zero(dim));
}

GaussianChannel diffusion_channel(double t, int n_modes) {
  if (t < 0.0) throw DomainError("diffusion_channel: t < 0");
  const int dim = 2 * n_modes;
  return GaussianChannel(Mat::Identity(dim, dim), t * Mat::Identity(dim, dim),
                         Vec::Zero(dim));
}

GaussianChannel translate_channel(const Vec& xi) {
  const int dim = static_cast<int>(xi.size());
  if (dim % 2 != 0 || dim == 0) {
    throw DimensionMismatch("translate_channel: xi must have length 2n");
  }
  return GaussianChannel(Mat::Identity(dim, dim), Mat::Zero(dim, dim), xi);
}

CheckReport weak_submajorization_check(const Mat& A, const Mat& B) {
  // Ascending partial sums: the smallest symplectic eigenvalues of A + B
  // dominate the corresponding sums of nu(A) + nu(B). (At one mode this is
  // Minkowski's determinant inequality.)
  const std::vector<double> nu_sum = symplectic_eigenvalues(A + B);
  const std::vector<double> nu_a = symplectic_eigenvalues(A);
  const std::vector<double> nu_b = symplectic_eigenvalues(B);
  const std::size_t n = nu_a.size();

  double min_slack = std::numeric_limits<double>::infinity();
  double lhs_part = 0.0, rhs_part = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;  // spectra are sorted descending
    lhs_part += nu_sum[i];
    rhs_part += nu_a[i] + nu_b[i];
    min_slack = std::min(min_slack, lhs_part - rhs_part);
  }
  return make_report("weak_submajorization", "A,B SPD", min_slack, 1e-9,
                     {{"n", static_cast<double>(n)}});
}

Mat random_symplectic(int n_modes, Rng& rng, int factors) {
  const int dim = 2 * n_modes;
  if (factors < 0) factors = 3 * n_modes + 2;
  Mat S = Mat::Identity(dim, dim);
  for (int it = 0; it < factors; ++it) {
    const int kind = static_cast<int>(rng.uniform_int(0, n_modes > 1 ? 2 : 1));
    Mat F = Mat::Identity(dim, dim);
    if (kind == 0) {
      // single-mode squeezer diag(e^r, e^-r)
      const int j = static_cast<int>(rng.uniform_int(0, n_modes - 1));
      const double r = rng.uniform(-1.0, 1.0);
      F(2 * j, 2 * j) = std::exp(r);
      F(2 * j + 1, 2 * j + 1) = std::exp(-r);
    } else if (kind == 1) {
      // single-mode phase-space rotation
      const int j = static_cast<int>(rng.uniform_int(0, n_modes - 1));
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      F(2 * j, 2 * j) = std::cos(phi);
      F(2 * j, 2 * j + 1) = std::sin(phi);
      F(2 * j + 1, 2 * j) = -std::sin(phi);
      F(2 * j + 1, 2 * j + 1) = std::cos(phi);
    } else {
      // two-mode beamsplitter-type rotation between modes j < k
      int j = static_cast<int>(rng.uniform_int(0, n_modes - 1));
      int k = static_cast<int>(rng.uniform_int(0, n_modes - 2));
      if (k >= j) ++k;
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double c = std::cos(phi), s = std::sin(phi);
      for (int q = 0; q < 2; ++q) {
        F(2 * j + q, 2 * j + q) = c;
        F(2 * j + q, 2 * k + q) = s;
        F(2 * k + q, 2 * j + q) = -s;
        F(2 * k + q, 2 * k + q) = c;
      }
    }
    S = (F * S).eval();
  }
  return S;
}

GaussianState random_gaussian_state(int n_modes, Rng& rng) {
  const int dim = 2 * n_modes;
  Mat D = Mat::Zero(dim, dim);
  for (int j = 0; j < n_modes; ++j) {
    const double nu = rng.uniform(1.0, 5.0);
    D(2 * j, 2 * j) = nu;
    D(2 * j + 1, 2 * j + 1) = nu;
  }
  const Mat S = random_symplectic(n_modes, rng);
  Vec d(dim);
  for (int k = 0; k < dim; ++k) d(k) = rng.normal();
  return GaussianState(std::move(d), S * D * S.transpose());
}

}  // namespace qepi
