#include "qepi/fisher.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

namespace qepi {

namespace {

void require_direction(const FockSpace& space, int direction) {
  if (direction < 0 || direction >= 2 * space.modes()) {
    throw DomainError("fisher: direction index out of range");
  }
}

void require_full_rank(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kRankFloor) {
    throw RankDeficient(
        "fisher: state is rank deficient after clamping; regularize first");
  }
}

// log rho with the eigenvalue clamp.
CMat clamped_log(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  CVec logs(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < logs.size(); ++k) {
    logs(k) = std::log(std::max(es.eigenvalues()(k), kEigClamp));
  }
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
}

double commutator_fisher(const DensityMatrix& rho, const CMat& log_rho,
                         const CMat& h) {
  const CMat inner = h * log_rho - log_rho * h;
  const CMat outer = h * inner - inner * h;
  const Complex val = (rho.mat * outer).trace();
  if (std::abs(val.imag()) > 1e-9) {
    throw Error("fisher: commutator trace has imaginary residue");
  }
  return val.real();
}

DensityMatrix displaced(const DensityMatrix& rho, int direction,
                        double theta) {
  Vec xi = Vec::Zero(2 * rho.space->modes());
  xi(direction) = theta;
  const CMat d = displacement_op(*rho.space, xi);
  return DensityMatrix(rho.space, d * rho.mat * d.adjoint());
}

// Plain second central difference at step h of S(rho || rho^(theta)).
double second_difference(const DensityMatrix& rho, int direction, double h) {
  const double fp = relative_entropy(rho, displaced(rho, direction, h));
  const double fm = relative_entropy(rho, displaced(rho, direction, -h));
  return (fp + fm) / (h * h);
}

}  // namespace

TranslationFamily::TranslationFamily(DensityMatrix base_in, int direction_in)
    : base(std::move(base_in)), direction(direction_in) {
  require_direction(*base.space, direction);
  const int mode = direction / 2;
  // H = -P_j for a Q_j translation, H = Q_j for a P_j translation, so that
  // e^{i theta H} rho e^{-i theta H} shifts the mean by +theta e_R.
  generator_ = (direction % 2 == 0)
                   ? CMat(-base.space->quadrature(2 * mode + 1))
                   : base.space->quadrature(2 * mode);
}

DensityMatrix TranslationFamily::at(double theta) const {
  return displaced(base, direction, theta);
}

double fisher_directional_commutator(const DensityMatrix& rho, int direction) {
  require_direction(*rho.space, direction);
  require_full_rank(rho.mat);
  TranslationFamily fam(rho, direction);
  return commutator_fisher(rho, clamped_log(rho.mat), fam.generator());
}

double fisher_directional_fd(const DensityMatrix& rho, int direction,
                             double h) {
  require_direction(*rho.space, direction);
  if (h < 1e-4 || h > 1e-1) {
    throw DomainError("fisher_directional_fd: h outside [1e-4, 1e-1]");
  }
  require_full_rank(rho.mat);
  const double coarse = second_difference(rho, direction, h);
  const double fine = second_difference(rho, direction, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;  // one Richardson step
}

double fisher_total(const DensityMatrix& rho) {
  require_full_rank(rho.mat);
  const CMat log_rho = clamped_log(rho.mat);
  double total = 0.0;
  for (int dir = 0; dir < 2 * rho.space->modes(); ++dir) {
    TranslationFamily fam(rho, dir);
    total += commutator_fisher(rho, log_rho, fam.generator());
  }
  return total;
}

DensityMatrix regularize(const DensityMatrix& rho, double eps) {
  const DensityMatrix th = make_thermal(
      rho.space, 0.5, std::numeric_limits<double>::infinity());
  return mix(rho, th, eps);
}

CheckReport check_reparametrization(const DensityMatrix& rho, int direction,
                                    double c) {
  const double base = fisher_directional_fd(rho, direction);
  double sped = 0.0;
  if (c != 0.0) {
    // family theta -> rho^(c theta): step h maps to step c h
    const double h = 5e-3;
    const double fp = relative_entropy(rho, displaced(rho, direction, c * h));
    const double fm = relative_entropy(rho, displaced(rho, direction, -c * h));
    const double coarse = (fp + fm) / (h * h);
    const double fp2 =
        relative_entropy(rho, displaced(rho, direction, c * h / 2.0));
    const double fm2 =
        relative_entropy(rho, displaced(rho, direction, -c * h / 2.0));
    const double fine = (fp2 + fm2) / (h * h / 4.0);
    sped = (4.0 * fine - coarse) / 3.0;
  }
  const double expected = c * c * base;
  std::ostringstream in;
  in << "c=" << c << " direction=" << direction;
  if (c == 0.0) {
    return make_report("fisher_reparametrization", in.str(), 1e-8 - sped, 0.0,
                       {{"sped", sped}, {"base", base}});
  }
  const double rel_err = std::abs(sped - expected) / std::max(expected, 1e-12);
  return make_report("fisher_reparametrization", in.str(), 1e-3 - rel_err, 0.0,
                     {{"sped", sped}, {"expected", expected}});
}

CheckReport check_data_processing(const DensityMatrix& rho, int direction,
                                  const Channel& channel,
                                  const std::string& channel_name, double h) {
  const double j_in = fisher_directional_fd(rho, direction, h);
  // Finite-difference Fisher of the processed family
  // theta -> S(E(rho) || E(rho^(theta))).
  const DensityMatrix out0 = channel(rho);
  auto processed_div = [&](double theta) {
    return relative_entropy(out0, channel(displaced(rho, direction, theta)));
  };
  const double coarse = (processed_div(h) + processed_div(-h)) / (h * h);
  const double fine =
      (processed_div(h / 2.0) + processed_div(-h / 2.0)) / (h * h / 4.0);
  const double j_out = (4.0 * fine - coarse) / 3.0;
  std::ostringstream in;
  in << channel_name << " direction=" << direction;
  return make_report("fisher_data_processing", in.str(), j_in - j_out, 1e-6,
                     {{"j_in", j_in}, {"j_out", j_out}});
}

CheckReport check_stam(const DensityMatrix& rho_x,
                       const DensityMatrix& rho_y) {
  const double j_x = fisher_total(rho_x);
  const double j_y = fisher_total(rho_y);
  const double j_out = fisher_total(beamsplitter_combine(
      rho_x, rho_y, 0.5, std::numeric_limits<double>::infinity()));
  const double margin = 2.0 / j_out - 1.0 / j_x - 1.0 / j_y;
  return make_report("fisher_stam", "lambda=0.5", margin, 1e-6,
                     {{"j_x", j_x}, {"j_y", j_y}, {"j_out", j_out}});
}

CheckReport check_convexity(const DensityMatrix& rho_x,
                            const DensityMatrix& rho_y, double lambda) {
  const double j_x = fisher_total(rho_x);
  const double j_y = fisher_total(rho_y);
  const double j_out = fisher_total(beamsplitter_combine(
      rho_x, rho_y, lambda, std::numeric_limits<double>::infinity()));
  const double margin = lambda * j_x + (1.0 - lambda) * j_y - j_out;
  std::ostringstream in;
  in << "lambda=" << lambda;
  return make_report("fisher_convexity", in.str(), margin, 1e-6,
                     {{"j_x", j_x}, {"j_y", j_y}, {"j_out", j_out}});
}

CheckReport check_weighted_convexity(const DensityMatrix& rho_x,
                                     const DensityMatrix& rho_y, double lambda,
                                     double w_x, double w_y) {
  const double j_x = fisher_total(rho_x);
  const double j_y = fisher_total(rho_y);
  const double j_out = fisher_total(beamsplitter_combine(
      rho_x, rho_y, lambda, std::numeric_limits<double>::infinity()));
  const double w = std::sqrt(lambda) * w_x + std::sqrt(1.0 - lambda) * w_y;
  const double margin = w_x * w_x * j_x + w_y * w_y * j_y - w * w * j_out;
  std::ostringstream in;
  in << "lambda=" << lambda << " w_x=" << w_x << " w_y=" << w_y;
  return make_report("fisher_weighted_convexity", in.str(), margin, 1e-6,
                     {{"j_x", j_x}, {"j_y", j_y}, {"j_out", j_out}, {"w", w}});
}

CheckReport check_translation_compatibility(const DensityMatrix& rho_x,
                                            const DensityMatrix& rho_y,
                                            double lambda, double w_x,
                                            double w_y, double theta,
                                            int direction) {
  require_direction(*rho_x.space, direction);
  const double inf = std::numeric_limits<double>::infinity();
  const DensityMatrix lhs =
      beamsplitter_combine(displaced(rho_x, direction, w_x * theta),
                           displaced(rho_y, direction, w_y * theta), lambda,
                           inf);
  const double w = std::sqrt(lambda) * w_x + std::sqrt(1.0 - lambda) * w_y;
  const DensityMatrix rhs = displaced(
      beamsplitter_combine(rho_x, rho_y, lambda, inf), direction, w * theta);
  const double dist = trace_distance(lhs, rhs);
  std::ostringstream in;
  in << "lambda=" << lambda << " w_x=" << w_x << " w_y=" << w_y
     << " theta=" << theta << " direction=" << direction;
  return make_report("translation_compatibility", in.str(), -dist, 1e-5,
                     {{"trace_distance", dist}, {"w", w}});
}

}  // namespace qepi
