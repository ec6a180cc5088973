#include "qepi/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qepi {

namespace {

constexpr Complex kI{0.0, 1.0};

CMat kron(const CMat& A, const CMat& B) {
  CMat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

// Embed a single-mode operator at position `mode` of an n-mode register.
CMat embed(const CMat& op, int mode, int modes, int cutoff) {
  CMat out = mode == 0 ? op : CMat(CMat::Identity(cutoff, cutoff));
  if (mode == 0) {
    // out already holds op
  } else {
    for (int m = 1; m < mode; ++m) {
      out = kron(out, CMat::Identity(cutoff, cutoff));
    }
    out = kron(out, op);
  }
  for (int m = mode + 1; m < modes; ++m) {
    out = kron(out, CMat::Identity(cutoff, cutoff));
  }
  return out;
}

double trace_of_product(const CMat& A, const CMat& B) {
  // Re tr(A B)
  return (A.array() * B.transpose().array()).sum().real();
}

// exp(i H) for Hermitian H.
CMat unitary_exp(const CMat& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian);
  CVec phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(kI * es.eigenvalues()(k));
  }
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Single-mode coherent amplitude vector (exact Poisson amplitudes,
// truncated without renormalization).
CVec coherent_vector(int cutoff, Complex alpha) {
  CVec v(cutoff);
  Complex amp = std::exp(-0.5 * std::norm(alpha));
  for (int k = 0; k < cutoff; ++k) {
    v(k) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(k + 1));
  }
  return v;
}

}  // namespace

FockSpace::FockSpace(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes < 1 || cutoff < 2) {
    throw DomainError("FockSpace: need modes >= 1 and cutoff >= 2");
  }
  dim_ = 1;
  for (int m = 0; m < modes; ++m) {
    dim_ *= cutoff;
    if (dim_ > (1 << 20)) {
      throw DomainError("FockSpace: dimension too large");
    }
  }
  CMat a1 = CMat::Zero(cutoff, cutoff);
  for (int k = 1; k < cutoff; ++k) {
    a1(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  a_.reserve(modes);
  adag_.reserve(modes);
  num_.reserve(modes);
  quad_.reserve(2 * modes);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int m = 0; m < modes; ++m) {
    CMat a = embed(a1, m, modes, cutoff);
    CMat ad = a.adjoint();
    quad_.push_back((a + ad) * inv_sqrt2);         // Q_m
    quad_.push_back((a - ad) * (-kI * inv_sqrt2));  // P_m = (a - a^dag)/(i sqrt2)
    num_.push_back(ad * a);
    a_.push_back(std::move(a));
    adag_.push_back(std::move(ad));
  }
}

FockPtr make_space(int modes, int cutoff) {
  return std::make_shared<const FockSpace>(modes, cutoff);
}

DensityMatrix::DensityMatrix(FockPtr space_in, CMat mat_in)
    : space(std::move(space_in)), mat(std::move(mat_in)) {
  if (!space) throw DomainError("DensityMatrix: null space");
  if (mat.rows() != space->dim() || mat.cols() != space->dim()) {
    throw DimensionMismatch("DensityMatrix: matrix/space dimension mismatch");
  }
  mat = ((mat + mat.adjoint()) / 2.0).eval();
  const double tr = mat.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " not 1";
    throw DomainError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    std::ostringstream os;
    os << "DensityMatrix: min eigenvalue " << es.eigenvalues().minCoeff();
    throw DomainError(os.str());
  }
}

double DensityMatrix::tail_mass() const {
  const int n = space->modes();
  const int D = space->cutoff();
  double worst = 0.0;
  for (int m = 0; m < n; ++m) {
    double mass = 0.0;
    // stride pattern of mode m in the kron ordering (mode 0 most significant)
    int block = 1;
    for (int q = m + 1; q < n; ++q) block *= D;
    for (int i = 0; i < space->dim(); ++i) {
      if ((i / block) % D == D - 1) mass += mat(i, i).real();
    }
    worst = std::max(worst, mass);
  }
  return worst;
}

void require_tail(const DensityMatrix& rho, double budget) {
  const double tail = rho.tail_mass();
  if (tail > budget) {
    std::ostringstream os;
    os << "tail mass " << tail << " exceeds truncation budget " << budget;
    throw TruncationBudgetExceeded(os.str());
  }
}

DensityMatrix make_vacuum(FockPtr space) {
  CMat m = CMat::Zero(space->dim(), space->dim());
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(space), std::move(m));
}

DensityMatrix make_thermal(FockPtr space, double mean_photon, double budget) {
  if (mean_photon < 0.0) throw DomainError("make_thermal: N < 0");
  const int D = space->cutoff();
  Eigen::VectorXd p(D);
  const double q = mean_photon / (mean_photon + 1.0);
  double w = 1.0;
  for (int k = 0; k < D; ++k) {
    p(k) = w;
    w *= q;
  }
  p /= p.sum();
  if (p(D - 1) > budget) {
    throw TruncationBudgetExceeded(
        "make_thermal: cutoff too small for requested mean photon number");
  }
  CMat one = p.cast<Complex>().asDiagonal();
  CMat m = one;
  for (int mode = 1; mode < space->modes(); ++mode) m = kron(m, one);
  return DensityMatrix(std::move(space), std::move(m));
}

DensityMatrix make_coherent(FockPtr space, Complex alpha, double budget) {
  CVec one = coherent_vector(space->cutoff(), alpha);
  CVec psi = one;
  for (int mode = 1; mode < space->modes(); ++mode) psi = kron(psi, one);
  psi /= psi.norm();
  DensityMatrix rho(std::move(space), psi * psi.adjoint());
  require_tail(rho, budget);
  return rho;
}

DensityMatrix make_fock(FockPtr space, int photons) {
  if (photons < 0 || photons >= space->cutoff()) {
    throw DomainError("make_fock: photon number outside cutoff");
  }
  CVec one = CVec::Zero(space->cutoff());
  one(photons) = 1.0;
  CVec psi = one;
  for (int mode = 1; mode < space->modes(); ++mode) psi = kron(psi, one);
  return DensityMatrix(std::move(space), psi * psi.adjoint());
}

DensityMatrix make_cat(FockPtr space, Complex alpha, double phase,
                       double budget) {
  CVec plus = coherent_vector(space->cutoff(), alpha);
  CVec minus = coherent_vector(space->cutoff(), -alpha);
  CVec one = plus + std::exp(kI * phase) * minus;
  one /= one.norm();
  CVec psi = one;
  for (int mode = 1; mode < space->modes(); ++mode) psi = kron(psi, one);
  DensityMatrix rho(std::move(space), psi * psi.adjoint());
  require_tail(rho, budget);
  return rho;
}

DensityMatrix random_state(FockPtr space, Rng& rng, int rank) {
  const int dim = space->dim();
  if (rank < 1 || rank > dim) throw DomainError("random_state: bad rank");
  CMat g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  CMat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(space), std::move(m));
}

DensityMatrix random_state(FockPtr space, std::uint64_t seed, int rank) {
  Rng rng(seed);
  return random_state(std::move(space), rng, rank);
}

DensityMatrix random_state_enveloped(FockPtr space, Rng& rng, int rank,
                                     double envelope_mean_photon) {
  const int dim = space->dim();
  if (rank < 1 || rank > dim) {
    throw DomainError("random_state_enveloped: bad rank");
  }
  if (envelope_mean_photon <= 0.0) {
    throw DomainError("random_state_enveloped: envelope must be positive");
  }
  const int n = space->modes();
  const int D = space->cutoff();
  const double q = envelope_mean_photon / (envelope_mean_photon + 1.0);
  CMat g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    int rest = i, total_photons = 0;
    for (int m = 0; m < n; ++m) {
      total_photons += rest % D;
      rest /= D;
    }
    const double damp = std::pow(q, total_photons / 2.0);
    for (int j = 0; j < rank; ++j) {
      g(i, j) = damp * Complex(rng.normal(), rng.normal());
    }
  }
  CMat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(space), std::move(m));
}

DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma,
                  double w) {
  if (rho.space->dim() != sigma.space->dim()) {
    throw DimensionMismatch("mix: dimension mismatch");
  }
  return DensityMatrix(rho.space, (1.0 - w) * rho.mat + w * sigma.mat);
}

CMat displacement_op(const FockSpace& space, const Vec& xi) {
  if (xi.size() != 2 * space.modes()) {
    throw DimensionMismatch("displacement_op: xi must have length 2n");
  }
  // Generator (J xi) . R realizes the Schroedinger-picture action: the
  // displaced state has mean vector d + xi while the covariance matrix is
  // unchanged, so D(theta e_{Q_j}) maps the vacuum to the coherent state
  // with d = theta e_{Q_j}.
  const Mat J = symplectic_form(space.modes());
  const Vec coeff = J * xi;
  CMat gen = CMat::Zero(space.dim(), space.dim());
  for (int k = 0; k < 2 * space.modes(); ++k) {
    if (coeff(k) != 0.0) gen += coeff(k) * space.quadrature(k);
  }
  return unitary_exp(gen);
}

CMat beamsplitter_unitary(const FockSpace& space2n, double lambda) {
  if (space2n.modes() % 2 != 0) {
    throw DimensionMismatch("beamsplitter_unitary: need an even mode count");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("beamsplitter_unitary: lambda must be in (0,1)");
  }
  const int n = space2n.modes() / 2;
  const double theta = std::acos(std::sqrt(lambda));
  CMat gen = CMat::Zero(space2n.dim(), space2n.dim());
  for (int j = 0; j < n; ++j) {
    const CMat& a = space2n.annihilation(j);
    const CMat& b = space2n.annihilation(n + j);
    // K = theta (a^dag b - a b^dag) is anti-Hermitian; exponentiate -iK.
    gen += -kI * theta * (a.adjoint() * b - a * b.adjoint());
  }
  return unitary_exp(gen);
}

Beamsplitter::Beamsplitter(FockPtr single_register, double lambda)
    : single_(std::move(single_register)),
      doubled_(make_space(2 * single_->modes(), single_->cutoff())),
      lambda_(lambda),
      unitary_(beamsplitter_unitary(*doubled_, lambda)) {}

DensityMatrix Beamsplitter::conjugate(const DensityMatrix& rho_xy) const {
  if (rho_xy.space->dim() != doubled_->dim()) {
    throw DimensionMismatch("Beamsplitter: input is not on the doubled space");
  }
  return DensityMatrix(doubled_,
                       unitary_ * rho_xy.mat * unitary_.adjoint());
}

DensityMatrix Beamsplitter::combine(const DensityMatrix& rho_x,
                                    const DensityMatrix& rho_y,
                                    double budget) const {
  if (rho_x.space->dim() != single_->dim() ||
      rho_y.space->dim() != single_->dim() ||
      rho_x.space->cutoff() != single_->cutoff() ||
      rho_y.space->cutoff() != single_->cutoff()) {
    throw DimensionMismatch("Beamsplitter: inputs must match the register");
  }
  CMat joint = kron(rho_x.mat, rho_y.mat);
  joint = unitary_ * joint * unitary_.adjoint();
  DensityMatrix out =
      partial_trace(DensityMatrix(doubled_, std::move(joint)),
                    single_->modes());
  require_tail(out, budget);
  return out;
}

DensityMatrix beamsplitter_combine(const DensityMatrix& rho_x,
                                   const DensityMatrix& rho_y, double lambda,
                                   double budget) {
  // Building the doubled-register unitary dwarfs the combine itself, so keep
  // a small cache of recently used mixers.
  static std::vector<std::shared_ptr<Beamsplitter>> cache;
  for (const auto& bs : cache) {
    if (bs->lambda() == lambda &&
        bs->doubled_space()->cutoff() == rho_x.space->cutoff() &&
        bs->doubled_space()->modes() == 2 * rho_x.space->modes()) {
      return bs->combine(rho_x, rho_y, budget);
    }
  }
  auto bs = std::make_shared<Beamsplitter>(rho_x.space, lambda);
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.push_back(bs);
  return bs->combine(rho_x, rho_y, budget);
}

DensityMatrix tensor(const DensityMatrix& rho_x, const DensityMatrix& rho_y) {
  if (rho_x.space->cutoff() != rho_y.space->cutoff()) {
    throw DimensionMismatch("tensor: cutoffs differ");
  }
  FockPtr joint = make_space(rho_x.space->modes() + rho_y.space->modes(),
                             rho_x.space->cutoff());
  return DensityMatrix(std::move(joint), kron(rho_x.mat, rho_y.mat));
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  const int n = rho.space->modes();
  const int D = rho.space->cutoff();
  if (keep < 1 || keep > n) throw DimensionMismatch("partial_trace: bad keep");
  if (keep == n) return rho;
  int dim_keep = 1, dim_drop = 1;
  for (int m = 0; m < keep; ++m) dim_keep *= D;
  for (int m = keep; m < n; ++m) dim_drop *= D;
  CMat out = CMat::Zero(dim_keep, dim_keep);
  for (int i = 0; i < dim_keep; ++i) {
    for (int j = 0; j < dim_keep; ++j) {
      Complex acc = 0.0;
      for (int s = 0; s < dim_drop; ++s) {
        acc += rho.mat(i * dim_drop + s, j * dim_drop + s);
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(make_space(keep, D), std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > kEigClamp) s -= p * std::log(p);
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.space->dim() != sigma.space->dim()) {
    throw DimensionMismatch("relative_entropy: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es_sigma(sigma.mat);
  // Weight of rho outside the clamped support of sigma.
  double outside = 0.0;
  CVec logs(es_sigma.eigenvalues().size());
  for (Eigen::Index k = 0; k < logs.size(); ++k) {
    const double s = es_sigma.eigenvalues()(k);
    if (s < kEigClamp) {
      const auto v = es_sigma.eigenvectors().col(k);
      outside += std::max(0.0, (v.adjoint() * rho.mat * v)(0, 0).real());
    }
    logs(k) = std::log(std::max(s, kEigClamp));
  }
  if (outside > 1e-6) {
    std::ostringstream os;
    os << "relative_entropy: rho has weight " << outside
       << " outside the support of sigma";
    throw SupportMismatch(os.str());
  }
  const CMat log_sigma = es_sigma.eigenvectors() * logs.asDiagonal() *
                         es_sigma.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es_rho(rho.mat, Eigen::EigenvaluesOnly);
  double tr_rho_log_rho = 0.0;
  for (Eigen::Index k = 0; k < es_rho.eigenvalues().size(); ++k) {
    const double p = es_rho.eigenvalues()(k);
    if (p > kEigClamp) tr_rho_log_rho += p * std::log(p);
  }
  return tr_rho_log_rho - trace_of_product(rho.mat, log_sigma);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.space->dim() != sigma.space->dim()) {
    throw DimensionMismatch("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat - sigma.mat,
                                         Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity_pure(const DensityMatrix& rho, const DensityMatrix& pure) {
  return trace_of_product(rho.mat, pure.mat);
}

Complex characteristic_fn(const DensityMatrix& rho, const Vec& xi) {
  const CMat d = displacement_op(*rho.space, xi);
  return (d * rho.mat).trace();
}

double q_function(const DensityMatrix& rho, const Vec& xi) {
  const int n = rho.space->modes();
  if (xi.size() != 2 * n) {
    throw DimensionMismatch("q_function: xi must have length 2n");
  }
  CVec psi = coherent_vector(rho.space->cutoff(),
                             Complex(xi(0), xi(1)) / std::numbers::sqrt2);
  for (int m = 1; m < n; ++m) {
    psi = kron(psi, coherent_vector(rho.space->cutoff(),
                                    Complex(xi(2 * m), xi(2 * m + 1)) /
                                        std::numbers::sqrt2));
  }
  const double val = (psi.adjoint() * rho.mat * psi)(0, 0).real();
  return val / std::pow(2.0 * std::numbers::pi, n);
}

Moments moments(const DensityMatrix& rho) {
  const int dim2n = 2 * rho.space->modes();
  Vec d(dim2n);
  std::vector<CMat> prods(dim2n);  // rho * R_k
  for (int k = 0; k < dim2n; ++k) {
    prods[k] = rho.mat * rho.space->quadrature(k);
    d(k) = prods[k].trace().real();
  }
  Mat gamma(dim2n, dim2n);
  for (int k = 0; k < dim2n; ++k) {
    for (int l = k; l < dim2n; ++l) {
      // tr(rho {R_k, R_l}) = tr((rho R_k) R_l) + tr((rho R_l) R_k)
      const double anti = trace_of_product(prods[k], rho.space->quadrature(l)) +
                          trace_of_product(prods[l], rho.space->quadrature(k));
      gamma(k, l) = gamma(l, k) = anti - 2.0 * d(k) * d(l);
    }
  }
  // Detect truncation damage beyond noise level.
  const Mat J = symplectic_form(rho.space->modes());
  CMat h = gamma.cast<Complex>() + kI * J.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-6) {
    std::ostringstream os;
    os << "moments: gamma + iJ has min eigenvalue "
       << es.eigenvalues().minCoeff() << "; cutoff too small";
    throw UncertaintyViolation(os.str());
  }
  return {std::move(d), std::move(gamma)};
}

GaussianState gaussify(const DensityMatrix& rho) {
  Moments m = moments(rho);
  // Absorb truncation noise: nudge onto the physical set if marginally off.
  const Mat J = symplectic_form(rho.space->modes());
  CMat h = m.gamma.cast<Complex>() + kI * J.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  const double mu = es.eigenvalues().minCoeff();
  if (mu < 0.0) {
    m.gamma += (-mu + 1e-12) * Mat::Identity(m.gamma.rows(), m.gamma.cols());
  }
  return GaussianState(std::move(m.d), std::move(m.gamma));
}

}  // namespace qepi
