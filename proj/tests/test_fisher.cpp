#include <cmath>

#include "helpers.hpp"
#include "qepi/diffusion.hpp"
#include "qepi/fisher.hpp"

using namespace qepi;
using namespace qepi::test;

TEST_CASE("translation family: generator and covariance") {
  FockPtr space = make_space(1, 28);
  const DensityMatrix th = make_thermal(space, 0.8, kInf);
  const TranslationFamily fam(th, 0);
  CHECK(max_abs(CMat(fam.generator() - fam.generator().adjoint())) < 1e-12);

  // Covariance: displacing twice by theta equals displacing once by 2 theta.
  const TranslationFamily step(fam.at(0.2), 0);
  CHECK(trace_distance(step.at(0.2), fam.at(0.4)) < 1e-8);

  // theta = 0.3 along Q moves d by 0.3 e_Q and keeps gamma.
  const Moments m0 = moments(th);
  const Moments m1 = moments(fam.at(0.3));
  CHECK(m1.d(0) - m0.d(0) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(std::abs(m1.d(1) - m0.d(1)) < 1e-7);
  CHECK(max_abs(Mat(m1.gamma - m0.gamma)) < 1e-6);
}

TEST_CASE("thermal Fisher information equals beta = ln((N+1)/N)") {
  for (double n_bar : {0.5, 1.0, 2.0}) {
    FockPtr space = make_space(1, fisher_thermal_cutoff(n_bar));
    const DensityMatrix th = make_thermal(space, n_bar);
    const double beta = std::log((n_bar + 1.0) / n_bar);
    for (int dir : {0, 1}) {
      CHECK(fisher_directional_commutator(th, dir) ==
            doctest::Approx(beta).epsilon(1e-4));
    }
    CHECK(fisher_total(th) == doctest::Approx(2.0 * beta).epsilon(1e-4));
  }
  // N = 1 specifically gives ln 2 per direction.
  FockPtr one = make_space(1, fisher_thermal_cutoff(1.0));
  CHECK(fisher_directional_fd(make_thermal(one, 1.0), 0, 1e-2) ==
        doctest::Approx(std::log(2.0)).epsilon(2e-4));
}

TEST_CASE("Fisher information decreases with thermal occupation") {
  double prev = kInf;
  for (double n_bar : {0.5, 1.0, 2.0, 4.0}) {
    FockPtr space = make_space(1, fisher_thermal_cutoff(n_bar));
    const double j = fisher_total(make_thermal(space, n_bar, kInf));
    CHECK(j < prev);
    prev = j;
  }
}

TEST_CASE("maximally mixed truncated state has vanishing Fisher information") {
  // log rho is proportional to the identity, so the double commutator is 0.
  FockPtr space = make_space(1, 20);
  const DensityMatrix mixed(space, CMat::Identity(20, 20) / 20.0);
  CHECK(std::abs(fisher_directional_commutator(mixed, 0)) < 1e-10);
  CHECK(std::abs(fisher_directional_commutator(mixed, 1)) < 1e-10);
}

TEST_CASE("commutator formula agrees with the finite-difference oracle") {
  FockPtr space = make_space(1, 16);
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = full_rank_state(space, rng);
    for (int dir : {0, 1}) {
      const double jc = fisher_directional_commutator(rho, dir);
      const double jf = fisher_directional_fd(rho, dir);
      CHECK(jc >= -1e-8);
      CHECK(std::abs(jc - jf) <= std::max(1e-3 * std::abs(jc), 1e-6));
    }
  }
}

TEST_CASE("symplectic covariance: Q direction vs phase-rotated P direction") {
  FockPtr space = make_space(1, 20);
  Rng rng(42);
  const DensityMatrix rho = full_rank_state(space, rng);
  // The quarter phase rotation U = exp(i pi/2 n) maps Q -> P, P -> -Q.
  CMat u = CMat::Zero(20, 20);
  for (int k = 0; k < 20; ++k) {
    u(k, k) = std::exp(Complex(0, 0.5 * M_PI * k));
  }
  const DensityMatrix rotated(space, u * rho.mat * u.adjoint());
  CHECK(std::abs(fisher_directional_commutator(rho, 0) -
                 fisher_directional_commutator(rotated, 1)) < 1e-6);
}

TEST_CASE("rank deficiency and regularization") {
  FockPtr space = make_space(1, 16);
  const DensityMatrix pure = make_coherent(space, 0.5);
  CHECK_THROWS_AS(fisher_directional_commutator(pure, 0), RankDeficient);
  const DensityMatrix reg = regularize(pure);
  CHECK(fisher_directional_commutator(reg, 0) >= 0.0);
}

TEST_CASE("additivity over tensor products") {
  // Additivity is exact on the truncated tensor space, so it can be tested
  // at a modest cutoff where the product spectrum still clears the rank
  // floor; the closed form is only approached as the cutoff grows.
  FockPtr space = make_space(1, 14);
  const DensityMatrix th = make_thermal(space, 1.0, kInf);
  const DensityMatrix prod = tensor(th, th);
  const double single = fisher_total(th);
  CHECK(fisher_total(prod) == doctest::Approx(2.0 * single).epsilon(1e-6));
  CHECK(single == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-2));
}

TEST_CASE("first derivative of the divergence vanishes at the base point") {
  FockPtr space = make_space(1, 20);
  Rng rng(43);
  const DensityMatrix rho = full_rank_state(space, rng);
  const TranslationFamily fam(rho, 0);
  const double h = 2e-3;
  const double first = (relative_entropy(rho, fam.at(h)) -
                        relative_entropy(rho, fam.at(-h))) /
                       (2.0 * h);
  CHECK(std::abs(first) < 1e-6);
  for (double theta : {-0.1, 0.05, 0.2}) {
    CHECK(relative_entropy(rho, fam.at(theta)) >= 0.0);
  }
}

TEST_CASE("reparametrization scaling") {
  FockPtr space = make_space(1, 30);
  const DensityMatrix th = make_thermal(space, 1.0);
  CheckReport r = check_reparametrization(th, 0, 1.0);
  CHECK(r.passed);
  CHECK(r.diagnostics.at("sped") ==
        doctest::Approx(r.diagnostics.at("expected")).epsilon(1e-6));

  r = check_reparametrization(th, 0, 0.0);
  CHECK(std::abs(r.diagnostics.at("sped")) < 1e-8);

  r = check_reparametrization(th, 0, 2.0);
  CHECK(r.passed);
  CHECK(r.diagnostics.at("sped") ==
        doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("data processing inequality") {
  FockPtr space = make_space(1, fisher_thermal_cutoff(1.0));
  const DensityMatrix th = make_thermal(space, 1.0);

  Channel ident = [](const DensityMatrix& rho) { return rho; };
  CheckReport r = check_data_processing(th, 0, ident, "identity");
  CHECK(std::abs(r.diagnostics.at("j_in") - r.diagnostics.at("j_out")) < 1e-6);

  // Full trace to a fixed state kills all information.
  FockPtr out_space = make_space(1, 20);
  const DensityMatrix fixed = make_thermal(out_space, 0.5);
  Channel constant = [&](const DensityMatrix&) { return fixed; };
  r = check_data_processing(th, 0, constant, "constant");
  CHECK(std::abs(r.diagnostics.at("j_out")) < 1e-8);

  // Beamsplitter with a thermal ancilla strictly decreases Fisher info.
  const DensityMatrix ancilla = make_thermal(space, 0.5);
  Channel bs = [&](const DensityMatrix& rho) {
    return beamsplitter_combine(rho, ancilla, 0.7, kInf);
  };
  r = check_data_processing(th, 0, bs, "beamsplitter");
  CHECK(r.passed);
  CHECK(r.margin > 1e-3);
}

TEST_CASE("Stam and convexity inequalities") {
  FockPtr space = make_space(1, 30);
  const DensityMatrix th = make_thermal(space, 1.0);

  // Fixed point: identical thermal inputs give equality.
  CheckReport r = check_stam(th, th);
  CHECK(std::abs(r.margin) <= 1e-5);

  // Distinct occupations give strict slack.  thermal(0.8) is the coldest
  // state whose full spectrum clears the rank floor at this cutoff.
  const DensityMatrix cold = make_thermal(space, 0.8);
  const DensityMatrix hot = make_thermal(space, 2.0, kInf);
  r = check_stam(cold, hot);
  CHECK(r.margin > 1e-3);  // strict slack

  const DensityMatrix mixed_floor(
      space, CMat::Identity(space->dim(), space->dim()) / double(space->dim()));
  r = check_convexity(mix(make_fock(space, 1), mixed_floor, 1e-3), th, 0.3);
  CHECK(r.passed);

  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a = full_rank_state(space, rng);
    const DensityMatrix b = full_rank_state(space, rng);
    const double lambda = rng.uniform(0.2, 0.8);
    CHECK(check_convexity(a, b, lambda).margin >= -1e-6);
    CHECK(check_stam(a, b).margin >= -1e-6);
    CHECK(check_weighted_convexity(a, b, lambda, rng.uniform(0.5, 1.5),
                                   rng.uniform(0.5, 1.5))
              .margin >= -1e-6);
  }
}

TEST_CASE("translation compatibility with the beamsplitter") {
  FockPtr space = make_space(1, 30);
  const DensityMatrix x = make_thermal(space, 0.6);
  const DensityMatrix y = make_thermal(space, 1.0);

  CheckReport r = check_translation_compatibility(x, y, 0.5, 1.0, 1.0, 0.0, 0);
  CHECK(-r.margin <= 1e-10);

  r = check_translation_compatibility(x, y, 0.5, 1.0, 1.0, 0.4, 0);
  CHECK(r.passed);
  CHECK(-r.margin <= 1e-5);

  // Coherent inputs: both sides are coherent with amplitude shifted by
  // w theta / sqrt(2), w = sqrt(lambda) w_x + sqrt(1-lambda) w_y.
  const DensityMatrix cx = make_coherent(space, 0.3);
  const DensityMatrix cy = make_coherent(space, Complex(0.0, 0.4));
  const double lambda = 0.5, theta = 0.3;
  const DensityMatrix lhs = beamsplitter_combine(
      TranslationFamily(cx, 0).at(theta), TranslationFamily(cy, 0).at(theta),
      lambda, kInf);
  const double w = std::sqrt(lambda) + std::sqrt(1 - lambda);
  const Complex shifted = std::sqrt(lambda) * Complex(0.3, 0.0) +
                          std::sqrt(1 - lambda) * Complex(0.0, 0.4) +
                          w * theta / std::sqrt(2.0);
  CHECK(fidelity_pure(lhs, make_coherent(space, shifted)) > 1.0 - 1e-6);
}
