#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bellwalk/linalg.hpp"

using namespace bellwalk;

namespace {

const double kLn2 = std::log(2.0);

Mat diag(std::initializer_list<double> d) {
  Mat m(static_cast<int>(d.size()));
  int i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

Mat random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = cplx(g(rng), g(rng));
  Mat h(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
  return h;
}

Mat random_density(std::mt19937& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = cplx(g(rng), g(rng));
  Mat rho = adjoint(a) * a;
  const double tr = trace(rho).real();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) rho(r, c) /= tr;
  return rho;
}

Mat reconstruct(const EigResult& e) {
  const int n = e.vectors.dim();
  Mat m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k)
        s += e.vectors(r, k) * e.values[k] * std::conj(e.vectors(c, k));
      m(r, c) = s;
    }
  return m;
}

}  // namespace

TEST_CASE("matrix basics") {
  CHECK_THROWS_AS(Mat(1), std::invalid_argument);
  CHECK_THROWS_AS(Mat(5), std::invalid_argument);

  const Mat id = Mat::identity(3);
  CHECK(trace(id) == cplx(3.0, 0.0));
  CHECK(max_abs_diff(id * id, id) == 0.0);

  Mat a(2);
  a(0, 1) = cplx(0.0, 2.0);
  const Mat ad = adjoint(a);
  CHECK(ad(1, 0) == cplx(0.0, -2.0));
  CHECK(frobenius_norm(a) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("eigendecomposition of trivial spectra") {
  const EigResult quarter = eig_hermitian(diag({0.25, 0.25, 0.25, 0.25}));
  for (double v : quarter.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

  const EigResult two = eig_hermitian(diag({0.3, 0.7}));
  REQUIRE(two.values.size() == 2);
  CHECK(two.values[0] == doctest::Approx(0.7).epsilon(1e-14));  // descending
  CHECK(two.values[1] == doctest::Approx(0.3).epsilon(1e-14));
  // Standard basis vectors up to phase: top eigenvector concentrated on e1.
  CHECK(std::abs(two.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(two.vectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 25; ++trial) {
    for (int n : {2, 3, 4}) {
      const Mat h = random_hermitian(rng, n);
      const EigResult e = eig_hermitian(h);
      CHECK(max_abs_diff(reconstruct(e), h) < 1e-12);
      // Orthonormal columns.
      const Mat vtv = adjoint(e.vectors) * e.vectors;
      CHECK(max_abs_diff(vtv, Mat::identity(n)) < 1e-12);
      // Descending order.
      for (size_t i = 1; i < e.values.size(); ++i)
        CHECK(e.values[i - 1] >= e.values[i]);
    }
  }
}

TEST_CASE("eigendecomposition rejects non-Hermitian input") {
  Mat m = Mat::identity(2);
  m(0, 1) = cplx(0.5, 0.0);  // m(1,0) stays 0: not Hermitian
  CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}

TEST_CASE("matrix powers") {
  // Projectors are fixed points for every positive power.
  Mat proj(4);
  proj(0, 0) = 0.5;
  proj(0, 3) = 0.5;
  proj(3, 0) = 0.5;
  proj(3, 3) = 0.5;
  for (double p : {0.25, 0.5, 0.75, 1.0, 2.0})
    CHECK(max_abs_diff(mat_power(proj, p), proj) < 1e-13);

  // (I/4)^{1/2} = I/2.
  const Mat quarter = diag({0.25, 0.25, 0.25, 0.25});
  const Mat half = diag({0.5, 0.5, 0.5, 0.5});
  CHECK(max_abs_diff(mat_power(quarter, 0.5), half) < 1e-14);

  // Diagonal case.
  const Mat d = mat_power(diag({0.9, 0.1}), 0.25);
  CHECK(d(0, 0).real() == doctest::Approx(std::pow(0.9, 0.25)).epsilon(1e-14));
  CHECK(d(1, 1).real() == doctest::Approx(std::pow(0.1, 0.25)).epsilon(1e-14));
  CHECK(std::abs(d(0, 1)) < 1e-14);

  // Power round trips on strictly positive states.
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    Mat rho = random_density(rng, 4);
    // Mix with the identity so the spectrum is strictly positive.
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        rho(i, j) = 0.8 * rho(i, j) + (i == j ? 0.05 : 0.0);
    CHECK(max_abs_diff(mat_power(rho, 1.0), rho) < 1e-12);
    for (double p : {0.25, 0.5, 0.75})
      CHECK(max_abs_diff(mat_power(mat_power(rho, p), 1.0 / p), rho) < 1e-10);
  }

  CHECK_THROWS_AS(mat_power(quarter, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mat_power(quarter, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(mat_power(diag({1.1, -0.1}), 0.5), std::invalid_argument);
  // Tiny negative eigenvalues are rounding, clamped to zero.
  CHECK_NOTHROW(mat_power(diag({1.0, -1e-13}), 0.5));
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(diag({1.0, 0.0, 0.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.5, 0.5})) ==
        doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.25, 0.25, 0.25, 0.25})) ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.5, 0.5, 0.0, 0.0})) ==
        doctest::Approx(kLn2).epsilon(1e-14));

  CHECK_THROWS_AS(von_neumann_entropy(diag({0.5, 0.4})), std::invalid_argument);

  // Unitary invariance: conjugate by eigenvectors of random Hermitian matrices.
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat rho = random_density(rng, 4);
    const Mat u = eig_hermitian(random_hermitian(rng, 4)).vectors;
    const Mat rotated = u * rho * adjoint(u);
    CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-12);
  }
}

TEST_CASE("purity") {
  CHECK(purity(diag({1.0, 0.0, 0.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(diag({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(purity(diag({0.5, 0.5, 0.0, 0.0})) == doctest::Approx(0.5).epsilon(1e-14));

  // Off-diagonal coherence counts: pure superposition projector.
  Mat proj(2);
  proj(0, 0) = 0.5;
  proj(0, 1) = cplx(0.0, -0.5);
  proj(1, 0) = cplx(0.0, 0.5);
  proj(1, 1) = 0.5;
  CHECK(purity(proj) == doctest::Approx(1.0).epsilon(1e-14));

  // Matches the spectral definition on random states.
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat rho = random_density(rng, 4);
    double spectral = 0.0;
    for (double v : eig_hermitian(rho).values) spectral += v * v;
    CHECK(purity(rho) == doctest::Approx(spectral).epsilon(1e-12));
  }
}
