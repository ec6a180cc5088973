#include "qepi/diffusion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qepi {

namespace {

constexpr Complex kI{0.0, 1.0};

// Photon growth guard: e^{tL} adds t/2 photons per mode on average. Refuse
// a run whose endpoint cannot fit mean + 6 sigma under the cutoff.
void require_budget(const DensityMatrix& rho, double t, double budget) {
  if (!std::isfinite(budget)) return;
  const auto& space = *rho.space;
  for (int m = 0; m < space.modes(); ++m) {
    const double n0 =
        (rho.mat * space.number_op(m)).trace().real();
    const double nf = n0 + t / 2.0;
    const double sigma = std::sqrt(nf * (nf + 1.0));
    if (nf + 6.0 * sigma > space.cutoff() - 1) {
      std::ostringstream os;
      os << "evolve: cutoff " << space.cutoff()
         << " cannot hold mean photon " << nf << " + 6 sigma";
      throw TruncationBudgetExceeded(os.str());
    }
  }
}

}  // namespace

CMat lindblad_rhs(const FockSpace& space, const CMat& rho) {
  CMat out = CMat::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < 2 * space.modes(); ++k) {
    const CMat& r = space.quadrature(k);
    const CMat inner = r * rho - rho * r;
    out -= 0.25 * (r * inner - inner * r);
  }
  return out;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho) {
  // Not a state; wrap manually for callers that want the operator itself.
  DensityMatrix out = rho;
  out.mat = lindblad_rhs(*rho.space, rho.mat);
  return out;
}

DensityMatrix evolve_ode(const DensityMatrix& rho, double t,
                         const EvolveOptions& opts) {
  if (t < 0.0) throw DomainError("evolve_ode: t < 0");
  require_budget(rho, t, opts.budget);
  if (t == 0.0) return rho;

  // Dormand-Prince 5(4) coefficients.
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
       11.0 / 84}};
  static const double b5[7] = {35.0 / 384,     0.0,          500.0 / 1113,
                               125.0 / 192,    -2187.0 / 6784, 11.0 / 84,
                               0.0};
  static const double b4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695,
                               393.0 / 640,     -92097.0 / 339200,
                               187.0 / 2100,    1.0 / 40};

  const FockSpace& space = *rho.space;
  CMat y = rho.mat;
  double time = 0.0;
  double h = std::min(t, 0.05);
  CMat k[7];
  bool have_first = false;

  while (time < t) {
    h = std::min(h, t - time);
    if (h < 1e-12) {
      throw StiffnessFailure("evolve_ode: step size collapsed below 1e-12");
    }
    if (!have_first) {
      k[0] = lindblad_rhs(space, y);
      have_first = true;
    }
    for (int s = 1; s < 7; ++s) {
      CMat ys = y;
      for (int j = 0; j < s; ++j) {
        if (a[s][j] != 0.0) ys += (h * a[s][j]) * k[j];
      }
      k[s] = lindblad_rhs(space, ys);
    }
    CMat y5 = y, err = CMat::Zero(y.rows(), y.cols());
    for (int s = 0; s < 7; ++s) {
      if (b5[s] != 0.0) y5 += (h * b5[s]) * k[s];
      const double diff = b5[s] - b4[s];
      if (diff != 0.0) err += (h * diff) * k[s];
    }
    const double err_norm = err.cwiseAbs().maxCoeff();
    if (err_norm <= opts.tol) {
      y = std::move(y5);
      time += h;
      // FSAL: stage 7 of DP5 equals stage 1 of the next step.
      k[0] = k[6];
    } else {
      have_first = true;  // k[0] still valid at unchanged y
    }
    const double scale =
        0.9 * std::pow(opts.tol / std::max(err_norm, 1e-300), 0.2);
    h *= std::clamp(scale, 0.2, 5.0);
  }

  // Re-hermitize and renormalize; the generator is trace preserving, so any
  // drift is integrator noise.
  y = ((y + y.adjoint()) / 2.0).eval();
  const double tr = y.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "evolve_ode: trace drifted to " << tr;
    throw StiffnessFailure(os.str());
  }
  y /= tr;
  {
    // project away negative eigenvalue noise of the same order as the local
    // error tolerance
    Eigen::SelfAdjointEigenSolver<CMat> es(y);
    if (es.eigenvalues().minCoeff() < 0.0) {
      if (es.eigenvalues().minCoeff() < -100.0 * opts.tol) {
        throw StiffnessFailure("evolve_ode: output lost positivity");
      }
      const CVec clipped = es.eigenvalues().cwiseMax(0.0).cast<Complex>();
      y = es.eigenvectors() * clipped.asDiagonal() *
          es.eigenvectors().adjoint();
      y /= y.trace().real();
    }
  }
  DensityMatrix out(rho.space, std::move(y));
  if (std::isfinite(opts.budget)) require_tail(out, opts.budget);
  return out;
}

DiffusionPropagator::DiffusionPropagator(FockPtr space)
    : space_(std::move(space)) {
  if (space_->modes() != 1) {
    throw DomainError("DiffusionPropagator: one-mode registers only");
  }
  const int d = space_->cutoff();
  // Written with the truncated ladder operators, sum_r R_r^2 is 2N + 1
  // except at the top level, where a a^dag loses its last entry.
  const auto s_diag = [&](int j) {
    return j == d - 1 ? static_cast<double>(d - 1) : 2.0 * j + 1.0;
  };
  vecs_.reserve(d);
  vals_.reserve(d);
  for (int k = 0; k < d; ++k) {
    const int len = d - k;
    Mat block = Mat::Zero(len, len);
    for (int m = 0; m < len; ++m) {
      block(m, m) = -0.25 * (s_diag(m) + s_diag(m + k));
      if (m + 1 < len) {
        const double off =
            0.5 * std::sqrt(static_cast<double>(m + 1) * (m + k + 1));
        block(m, m + 1) = off;
        block(m + 1, m) = off;
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(block);
    vecs_.push_back(es.eigenvectors());
    vals_.push_back(es.eigenvalues());
  }
}

DensityMatrix DiffusionPropagator::apply(const DensityMatrix& rho, double t,
                                         double budget) const {
  if (t < 0.0) throw DomainError("DiffusionPropagator: t < 0");
  if (rho.space->dim() != space_->dim()) {
    throw DimensionMismatch("DiffusionPropagator: space mismatch");
  }
  const int d = space_->cutoff();
  CMat out = CMat::Zero(d, d);
  Vec vr, vi;
  for (int k = 0; k < d; ++k) {
    const int len = d - k;
    vr.resize(len);
    vi.resize(len);
    for (int m = 0; m < len; ++m) {
      vr(m) = rho.mat(m, m + k).real();
      vi(m) = rho.mat(m, m + k).imag();
    }
    const Mat& v = vecs_[k];
    Vec wr = v.transpose() * vr;
    Vec wi = v.transpose() * vi;
    for (int m = 0; m < len; ++m) {
      const double decay = std::exp(t * vals_[k](m));
      wr(m) *= decay;
      wi(m) *= decay;
    }
    vr = v * wr;
    vi = v * wi;
    for (int m = 0; m < len; ++m) {
      out(m, m + k) = Complex(vr(m), vi(m));
      if (k > 0) out(m + k, m) = Complex(vr(m), -vi(m));
    }
  }
  out /= out.trace().real();
  {
    Eigen::SelfAdjointEigenSolver<CMat> es(out);
    if (es.eigenvalues().minCoeff() < 0.0) {
      if (es.eigenvalues().minCoeff() < -1e-7) {
        throw StiffnessFailure(
            "DiffusionPropagator: output lost positivity; cutoff too small");
      }
      const CVec clipped = es.eigenvalues().cwiseMax(0.0).cast<Complex>();
      out = es.eigenvectors() * clipped.asDiagonal() *
            es.eigenvectors().adjoint();
      out /= out.trace().real();
    }
  }
  DensityMatrix result(rho.space, std::move(out));
  if (std::isfinite(budget)) require_tail(result, budget);
  return result;
}

DensityMatrix evolve_spectral(const DensityMatrix& rho, double t,
                              double budget) {
  static std::vector<std::pair<int, std::shared_ptr<const DiffusionPropagator>>>
      cache;
  if (rho.space->modes() != 1) {
    throw DomainError("evolve_spectral: one-mode registers only");
  }
  for (const auto& [cutoff, prop] : cache) {
    if (cutoff == rho.space->cutoff()) return prop->apply(rho, t, budget);
  }
  auto prop = std::make_shared<const DiffusionPropagator>(rho.space);
  if (cache.size() >= 8) cache.erase(cache.begin());
  cache.emplace_back(rho.space->cutoff(), prop);
  return prop->apply(rho, t, budget);
}

void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (order < 1) throw DomainError("gauss_hermite: order < 1");
  // Golub-Welsch on the Jacobi matrix of the Hermite recurrence.
  Mat jac = Mat::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double off = std::sqrt(k / 2.0);
    jac(k - 1, k) = off;
    jac(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jac);
  nodes.resize(order);
  weights.resize(order);
  const double total = std::sqrt(std::numbers::pi);
  for (int k = 0; k < order; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = total * v0 * v0;
  }
}

DensityMatrix evolve_random_displacement(const DensityMatrix& rho, double t,
                                         int order, double budget) {
  if (t < 0.0) throw DomainError("evolve_random_displacement: t < 0");
  if (order < 5) throw DomainError("evolve_random_displacement: order < 5");
  if (t == 0.0) return rho;
  require_budget(rho, t, budget);

  std::vector<double> x, w;
  gauss_hermite(order, x, w);
  const double sigma = std::sqrt(t / 2.0);
  const int dims = 2 * rho.space->modes();

  // Tensor quadrature over all phase-space dimensions:
  //   E[f(xi)] = pi^{-dims/2} sum_I (prod w) f(sqrt(2) sigma x_I).
  CMat acc = CMat::Zero(rho.mat.rows(), rho.mat.cols());
  std::vector<int> idx(dims, 0);
  const double norm = std::pow(std::numbers::pi, -dims / 2.0);
  while (true) {
    double weight = norm;
    Vec xi(dims);
    for (int d = 0; d < dims; ++d) {
      weight *= w[idx[d]];
      xi(d) = std::numbers::sqrt2 * sigma * x[idx[d]];
    }
    const CMat disp = displacement_op(*rho.space, xi);
    acc += weight * (disp * rho.mat * disp.adjoint());
    int d = 0;
    while (d < dims && ++idx[d] == order) {
      idx[d] = 0;
      ++d;
    }
    if (d == dims) break;
  }
  acc /= acc.trace().real();
  DensityMatrix out(rho.space, std::move(acc));
  if (std::isfinite(budget)) require_tail(out, budget);
  return out;
}

CheckReport check_beamsplitter_compatibility(const DensityMatrix& rho_x,
                                             const DensityMatrix& rho_y,
                                             double lambda, double t_x,
                                             double t_y,
                                             const EvolveOptions& opts) {
  const DensityMatrix lhs =
      beamsplitter_combine(evolve_ode(rho_x, t_x, opts),
                           evolve_ode(rho_y, t_y, opts), lambda, opts.budget);
  const double t = lambda * t_x + (1.0 - lambda) * t_y;
  const DensityMatrix rhs = evolve_ode(
      beamsplitter_combine(rho_x, rho_y, lambda, opts.budget), t, opts);
  const double dist = trace_distance(lhs, rhs);
  std::ostringstream in;
  in << "lambda=" << lambda << " t_x=" << t_x << " t_y=" << t_y;
  return make_report("beamsplitter_compatibility", in.str(), -dist, 1e-4,
                     {{"trace_distance", dist}, {"t", t}});
}

CheckReport check_scaling_bounds(const DensityMatrix& rho, double t,
                                 const EvolveOptions& opts) {
  if (t <= 2.0) throw DomainError("check_scaling_bounds: requires t > 2");
  const int n = rho.space->modes();
  const Moments m = moments(rho);
  const std::vector<double> nu = symplectic_eigenvalues(m.gamma);
  const double lower = n * g_entropy(mean_photon(t - 1.0));
  double upper = 0.0;
  for (double v : nu) upper += g_entropy(mean_photon(t + std::max(v, 1.0)));
  const double s = von_neumann_entropy(evolve_ode(rho, t, opts));
  const double slack_lower = s - lower;
  const double slack_upper = upper - s;
  std::ostringstream in;
  in << "t=" << t;
  return make_report("scaling_bounds", in.str(),
                     std::min(slack_lower, slack_upper), 1e-4,
                     {{"entropy", s},
                      {"lower_bound", lower},
                      {"upper_bound", upper},
                      {"slack_lower", slack_lower},
                      {"slack_upper", slack_upper}});
}

CheckReport check_asymptotics(const DensityMatrix& rho,
                              const std::vector<double>& t_grid,
                              const EvolveOptions& opts) {
  if (t_grid.size() < 2) {
    throw DomainError("check_asymptotics: need at least two grid points");
  }
  const int n = rho.space->modes();
  double prev = 0.0;
  double min_drop = std::numeric_limits<double>::infinity();
  std::map<std::string, double> diag;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t <= 0.0 || (i > 0 && t <= t_grid[i - 1])) {
      throw DomainError("check_asymptotics: grid must be positive increasing");
    }
    const double s = von_neumann_entropy(evolve_ode(rho, t, opts));
    const double residual =
        std::abs(s / n - (1.0 - std::numbers::ln2 + std::log(t)));
    diag["residual_t" + std::to_string(i)] = residual;
    if (i > 0) min_drop = std::min(min_drop, prev - residual);
    prev = residual;
  }
  return make_report("asymptotic_residual", "t_grid", min_drop, 1e-6, diag);
}

double gaussification_gap(const DensityMatrix& rho, double t,
                          const EvolveOptions& opts) {
  const GaussianState g = gaussify(rho);
  const GaussianState g_t = apply_channel(diffusion_channel(t, g.n), g);
  const double s_gauss = gaussian_entropy(g_t);
  const double s_num = von_neumann_entropy(evolve_ode(rho, t, opts));
  return s_gauss - s_num;
}

}  // namespace qepi
