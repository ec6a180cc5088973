#include <cmath>

#include "helpers.hpp"
#include "qepi/epi.hpp"
#include "qepi/phase_space.hpp"

using namespace qepi;
using namespace qepi::test;

TEST_CASE("symplectic form: antisymmetric and squares to minus identity") {
  for (int n : {1, 2, 3}) {
    const Mat J = symplectic_form(n);
    CHECK(max_abs(Mat(J.transpose() + J)) == 0.0);
    CHECK(max_abs(Mat(J * J + Mat::Identity(2 * n, 2 * n))) == 0.0);
  }
}

TEST_CASE("symplectic eigenvalues of diagonal covariances") {
  // One mode already in Williamson form.
  auto nu = symplectic_eigenvalues(3.0 * Mat::Identity(2, 2));
  REQUIRE(nu.size() == 1);
  CHECK(nu[0] == doctest::Approx(3.0).epsilon(1e-12));

  // Pure squeezed state: gamma = diag(e^{2r}, e^{-2r}) has nu = 1. Oracle:
  // J*gamma has eigenvalues +-i (hand computation for r = 0.5).
  const double r = 0.5;
  Mat squeezed = Mat::Zero(2, 2);
  squeezed(0, 0) = std::exp(2 * r);
  squeezed(1, 1) = std::exp(-2 * r);
  nu = symplectic_eigenvalues(squeezed);
  REQUIRE(nu.size() == 1);
  CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-10));

  // Block-diagonal two-mode case, sorted descending.
  Mat two = Mat::Zero(4, 4);
  two.block(0, 0, 2, 2) = 2.0 * Mat::Identity(2, 2);
  two.block(2, 2, 2, 2) = 5.0 * Mat::Identity(2, 2);
  nu = symplectic_eigenvalues(two);
  REQUIRE(nu.size() == 2);
  CHECK(nu[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(nu[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("symplectic eigenvalues reject non-positive covariances") {
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(symplectic_eigenvalues(bad), NonPositiveCovariance);
}

TEST_CASE("symplectic eigenvalues invariant under symplectic congruence") {
  Rng rng(101);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const GaussianState s = random_gaussian_state(n, rng);
      const Mat sp = random_symplectic(n, rng);
      const auto nu_a = symplectic_eigenvalues(s.gamma);
      const auto nu_b = symplectic_eigenvalues(sp * s.gamma * sp.transpose());
      REQUIRE(nu_a.size() == nu_b.size());
      for (std::size_t k = 0; k < nu_a.size(); ++k) {
        CHECK(nu_a[k] == doctest::Approx(nu_b[k]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("mean photon number N(nu) = (nu - 1)/2") {
  CHECK(mean_photon(1.0) == doctest::Approx(0.0));
  CHECK(mean_photon(3.0) == doctest::Approx(1.0));
  CHECK(mean_photon(2.4) == doctest::Approx(0.7));
  CHECK_THROWS_AS(mean_photon(0.9), DomainError);
}

TEST_CASE("g entropy function") {
  CHECK(g_entropy(0.0) == 0.0);
  CHECK(g_entropy(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  // g(0.5) = 1.5 ln 1.5 - 0.5 ln 0.5, evaluated independently.
  const double oracle = 1.5 * std::log(1.5) - 0.5 * std::log(0.5);
  CHECK(oracle == doctest::Approx(0.954771).epsilon(1e-6));
  CHECK(g_entropy(0.5) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK_THROWS_AS(g_entropy(-0.1), DomainError);

  // Strictly increasing and concave on a sample grid.
  double prev = g_entropy(0.1);
  double prev_diff = kInf;
  for (double n = 0.2; n < 3.05; n += 0.1) {
    const double cur = g_entropy(n);
    CHECK(cur > prev);
    CHECK(cur - prev < prev_diff);
    prev_diff = cur - prev;
    prev = cur;
  }
}

TEST_CASE("gaussian entropy from the symplectic spectrum") {
  GaussianState vac = GaussianState::vacuum(1);
  vac.d << 1.5, -0.25;  // entropy must ignore first moments
  CHECK(gaussian_entropy(vac) == doctest::Approx(0.0).epsilon(1e-12));

  const GaussianState th(Vec::Zero(2), 3.0 * Mat::Identity(2, 2));
  CHECK(gaussian_entropy(th) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  Mat two = Mat::Identity(4, 4);
  two.block(0, 0, 2, 2) *= 3.0;
  const GaussianState pair(Vec::Zero(4), two);
  CHECK(gaussian_entropy(pair) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("apply_channel basics") {
  Rng rng(7);
  const GaussianState s = random_gaussian_state(2, rng);

  const GaussianState ident = apply_channel(identity_channel(2), s);
  CHECK(max_abs(Mat(ident.gamma - s.gamma)) < 1e-14);
  CHECK((ident.d - s.d).cwiseAbs().maxCoeff() < 1e-14);

  const GaussianState diffused =
      apply_channel(diffusion_channel(2.0, 1), GaussianState::vacuum(1));
  CHECK(max_abs(Mat(diffused.gamma - 3.0 * Mat::Identity(2, 2))) < 1e-14);
  CHECK(diffused.d.cwiseAbs().maxCoeff() < 1e-14);

  Vec xi(4);
  xi << 0.3, -0.1, 0.0, 2.0;
  const GaussianState moved = apply_channel(translate_channel(xi), s);
  CHECK(max_abs(Mat(moved.gamma - s.gamma)) < 1e-14);
  CHECK((moved.d - s.d - xi).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(apply_channel(identity_channel(1), s), DimensionMismatch);
}

TEST_CASE("channel composition rule") {
  Rng rng(8);
  const GaussianState s = random_gaussian_state(1, rng);
  const GaussianChannel first = diffusion_channel(0.7, 1);
  Vec xi(2);
  xi << 0.4, -0.9;
  const GaussianChannel second = translate_channel(xi);
  const GaussianState via_compose = apply_channel(compose(second, first), s);
  const GaussianState via_steps = apply_channel(second, apply_channel(first, s));
  CHECK(max_abs(Mat(via_compose.gamma - via_steps.gamma)) < 1e-13);
  CHECK((via_compose.d - via_steps.d).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("beamsplitter channel on product inputs") {
  CHECK_THROWS_AS(beamsplitter_channel(0.0, 1), DomainError);
  CHECK_THROWS_AS(beamsplitter_channel(1.0, 1), DomainError);

  // Symmetric mixing fixed point: a I combined with a I stays a I.
  auto combine = [](double lambda, const GaussianState& x,
                    const GaussianState& y) {
    Vec d(4);
    d << x.d, y.d;
    Mat gamma = Mat::Zero(4, 4);
    gamma.block(0, 0, 2, 2) = x.gamma;
    gamma.block(2, 2, 2, 2) = y.gamma;
    return apply_channel(beamsplitter_channel(lambda, 1), GaussianState(d, gamma));
  };
  const GaussianState a(Vec::Zero(2), 2.5 * Mat::Identity(2, 2));
  const GaussianState fixed = combine(0.5, a, a);
  CHECK(max_abs(Mat(fixed.gamma - a.gamma)) < 1e-13);

  // gamma' = lambda gamma_X + (1-lambda) gamma_Y.
  const GaussianState b(Vec::Zero(2), 4.0 * Mat::Identity(2, 2));
  const GaussianState mixed = combine(0.5, a, b);
  CHECK(max_abs(Mat(mixed.gamma - 3.25 * Mat::Identity(2, 2))) < 1e-13);

  // d' = sqrt(lambda) d_X + sqrt(1-lambda) d_Y.
  GaussianState dx = GaussianState::vacuum(1);
  dx.d << 1.0, 0.0;
  GaussianState dy = GaussianState::vacuum(1);
  dy.d << 0.0, 2.0;
  const GaussianState shifted = combine(0.3, dx, dy);
  CHECK(shifted.d(0) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-12));
  CHECK(shifted.d(1) == doctest::Approx(2.0 * std::sqrt(0.7)).epsilon(1e-12));
}

TEST_CASE("diffusion channel semigroup and validity") {
  CHECK_THROWS_AS(diffusion_channel(-0.1, 1), DomainError);
  const GaussianChannel zero = diffusion_channel(0.0, 2);
  CHECK(max_abs(Mat(zero.X - Mat::Identity(4, 4))) == 0.0);
  CHECK(max_abs(zero.Y) == 0.0);

  const GaussianChannel once = diffusion_channel(1.0, 1);
  const GaussianChannel twice = compose(once, once);
  const GaussianChannel direct = diffusion_channel(2.0, 1);
  CHECK(max_abs(Mat(twice.Y - direct.Y)) == 0.0);
  CHECK(max_abs(Mat(twice.X - direct.X)) == 0.0);
}

TEST_CASE("uncertainty is preserved by channels") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianState s = random_gaussian_state(1, rng);
    // Constructor enforces gamma + iJ >= 0; reaching here means it passed.
    const GaussianState out =
        apply_channel(diffusion_channel(rng.uniform(0.0, 2.0), 1), s);
    for (double nu : symplectic_eigenvalues(out.gamma)) CHECK(nu >= 1.0 - 1e-9);
  }
}

TEST_CASE("weak submajorization of symplectic spectra") {
  // Commuting isotropic case: nu(2I) = 2 = 1 + 1, slack 0.
  const Mat eye = Mat::Identity(2, 2);
  CheckReport r = weak_submajorization_check(eye, eye);
  CHECK(r.passed);
  CHECK(r.margin == doctest::Approx(0.0).epsilon(1e-12));

  // Squeezed plus vacuum: nu(A) = nu(B) = 1, nu(A+B) computed numerically.
  Mat squeezed = Mat::Zero(2, 2);
  squeezed(0, 0) = std::exp(2.0);
  squeezed(1, 1) = std::exp(-2.0);
  r = weak_submajorization_check(squeezed, eye);
  CHECK(r.passed);
  // One-mode case is Minkowski's determinant inequality:
  // sqrt(det(A+B)) >= sqrt(det A) + sqrt(det B).
  const double oracle = std::sqrt((squeezed + eye).determinant()) - 2.0;
  CHECK(r.margin == doctest::Approx(oracle).epsilon(1e-9));

  Rng rng(303);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Mat a = random_spd(2 * n, rng);
      const Mat b = random_spd(2 * n, rng);
      CheckReport rep = weak_submajorization_check(a, b);
      CHECK(rep.margin >= -1e-9);
    }
  }
}

TEST_CASE("gaussian qEPI and qEPI prime on random ensembles") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const GaussianState x = random_gaussian_state(n, rng);
    const GaussianState y = random_gaussian_state(n, rng);
    for (double lambda : {0.25, 0.5, 0.75}) {
      CHECK(gaussian_qepi_prime_check(x, y, lambda).margin >= -1e-9);
    }
    CHECK(gaussian_qepi_power_check(x, y).margin >= -1e-9);
  }
}
