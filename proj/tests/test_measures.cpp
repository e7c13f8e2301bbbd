#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bellwalk/measures.hpp"
#include "bellwalk/walk.hpp"

using namespace bellwalk;

namespace {

const CoinParams kP1 = CoinParams::make(0.125, 0.125, 0.1);
const CoinParams kP2 = CoinParams::make(0.125, 1.0 / 12, 0.1);
const CoinParams kP3 = CoinParams::make(1.0 / 6, 0.125, 0.1);
const double kLn2 = std::log(2.0);

SpinVector initen() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, 0.0, 0.0};
}

// Frozen reduced spin density at t = 4, reference parameters, initen spin.
Mat frozen_rho4() {
  Mat r(4);
  r(0, 0) = 0.375;
  r(0, 1) = cplx(0.0096567810742171131, 0.029720516134223565);
  r(0, 2) = cplx(-0.029720516134223541, 0.0096567810742171079);
  r(0, 3) = cplx(5.12e-18, -0.031250000000000014);
  r(1, 1) = 0.375;
  r(1, 2) = cplx(-5.12e-18, -0.031250000000000014);
  r(1, 3) = cplx(0.029720516134223541, 0.0096567810742171079);
  r(2, 2) = 0.12499999999999996;
  r(2, 3) = cplx(0.0096567810742170992, -0.029720516134223517);
  r(3, 3) = 0.12499999999999996;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) r(i, j) = std::conj(r(j, i));
  return r;
}

Mat projector(const SpinVector& s) {
  Mat p(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p(i, j) = s[i] * std::conj(s[j]);
  return p;
}

Mat random_unitary(std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat h(4);
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) {
      const cplx v(g(rng), r == c ? 0.0 : g(rng));
      h(r, c) = v;
      h(c, r) = std::conj(v);
    }
  return eig_hermitian(h).vectors;
}

std::vector<double> random_distribution(std::mt19937& rng, double floor) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> p(4);
  double sum = 0.0;
  for (double& v : p) sum += (v = u(rng));
  for (double& v : p) v /= sum;
  return p;
}

double series_value(const MeasureSeries& s, int t) {
  for (const auto& sample : s.samples)
    if (sample.t == t) {
      REQUIRE(!sample.flagged);
      return sample.value;
    }
  FAIL("no sample at requested t");
  return 0.0;
}

}  // namespace

TEST_CASE("probability grid") {
  SUBCASE("t = 0") {
    const GridDistribution g = probability_grid(initial_state(initen()));
    REQUIRE(g.entries.size() == 1);
    CHECK(g.entries[0].m == 0);
    CHECK(g.entries[0].n == 0);
    CHECK(g.entries[0].value == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("one step of a sector-0 spin") {
    const CoinParams p = CoinParams::make(0.3, 0.2, 0.07);
    const GridDistribution g = probability_grid(simulate({1, 0, 0, 0}, p, 1));
    double p11 = -1.0, pm1 = -1.0;
    for (const auto& e : g.entries) {
      if (e.m == 1 && e.n == 1) p11 = e.value;
      if (e.m == -1 && e.n == -1) pm1 = e.value;
    }
    const double c = std::cos(kTau * p.y), s = std::sin(kTau * p.y);
    CHECK(p11 == doctest::Approx(c * c).epsilon(1e-14));
    CHECK(pm1 == doctest::Approx(s * s).epsilon(1e-14));
  }

  SUBCASE("one step of the reference spin spreads uniformly") {
    const GridDistribution g = probability_grid(simulate(initen(), kP1, 1));
    REQUIRE(g.entries.size() == 4);
    // Sorted by (m, n).
    CHECK(g.entries[0].m == -1);
    CHECK(g.entries[0].n == -1);
    CHECK(g.entries[3].m == 1);
    CHECK(g.entries[3].n == 1);
    for (const auto& e : g.entries)
      CHECK(e.value == doctest::Approx(0.25).epsilon(1e-14));
  }

  SUBCASE("normalization at t = 200") {
    for (const CoinParams& p : {kP1, kP2, kP3}) {
      const GridDistribution g = probability_grid(simulate(initen(), p, 200));
      double total = 0.0;
      for (const auto& e : g.entries) total += e.value;
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("site entanglement") {
  SUBCASE("product spin at the origin") {
    const WalkState st = initial_state(initen());
    CHECK(site_entanglement(st, 0, 0, SiteQubit::KeepA) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(site_entanglement(st, 0, 0, SiteQubit::KeepB) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("Bell spin at the origin") {
    const double r = 1.0 / std::sqrt(2.0);
    const WalkState st = initial_state({r, 0.0, 0.0, r});
    CHECK(site_entanglement(st, 0, 0, SiteQubit::KeepA) ==
          doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(site_entanglement(st, 0, 0, SiteQubit::KeepB) ==
          doctest::Approx(kLn2).epsilon(1e-12));
  }

  SUBCASE("absent sites raise") {
    const WalkState st = initial_state(initen());
    CHECK_THROWS_AS(site_entanglement(st, 2, 2), std::domain_error);
    const WalkState far = simulate(initen(), kP1, 100);
    // On-lattice but with probability ~ cos^198: below the threshold.
    CHECK_THROWS_AS(site_entanglement(far, -100, -100), std::domain_error);
  }

  SUBCASE("full grid at t = 100") {
    const WalkState st = simulate(initen(), kP3, 100);
    const GridDistribution g = probability_grid(st);
    double total = 0.0;
    int present = 0;
    for (const auto& e : g.entries) {
      total += e.value;
      CHECK(std::abs(e.m) == std::abs(e.n));  // support on the diagonals only
      if (e.value >= kSiteProbThreshold) {
        const double ent = site_entanglement(st, e.m, e.n);
        CHECK(ent >= -1e-12);
        CHECK(ent <= kLn2 + 1e-12);
        ++present;
      }
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(present > 100);
  }
}

TEST_CASE("reduced spin density") {
  SUBCASE("t = 0 is the pure projector") {
    const SpinVector s = {0.5, cplx(0.0, 0.5), 0.5, -0.5};
    CHECK(max_abs_diff(reduced_spin_density(initial_state(s)), projector(s)) < 1e-15);
  }

  SUBCASE("one step of a sector-0 spin is diagonal") {
    const CoinParams p = CoinParams::make(0.3, 0.2, 0.07);
    const Mat rho = reduced_spin_density(simulate({1, 0, 0, 0}, p, 1));
    const double c = std::cos(kTau * p.y), s = std::sin(kTau * p.y);
    Mat expect(4);
    expect(0, 0) = c * c;
    expect(3, 3) = s * s;
    CHECK(max_abs_diff(rho, expect) < 1e-14);
  }

  SUBCASE("frozen matrix at t = 4") {
    const Mat rho = reduced_spin_density(simulate(initen(), kP1, 4));
    CHECK(max_abs_diff(rho, frozen_rho4()) < 1e-14);
    CHECK(trace(rho).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(purity(rho) == doctest::Approx(0.32421875).epsilon(1e-13));
    CHECK(von_neumann_entropy(rho) ==
          doctest::Approx(1.2242697985679281).epsilon(1e-12));
  }

  SUBCASE("well-formed at larger t") {
    const Mat rho = reduced_spin_density(simulate(initen(), kP2, 37));
    CHECK(max_abs_diff(rho, adjoint(rho)) < 1e-14);
    CHECK(trace(rho).real() == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : eig_hermitian(rho).values) CHECK(v > -1e-12);
  }
}

TEST_CASE("two-level reductions of the spin density") {
  const Mat rho = frozen_rho4();

  SUBCASE("sector-label reduction") {
    const Mat m = reduce_spin_density(rho, EntropyObservable::SectorLabel);
    REQUIRE(m.dim() == 2);
    CHECK(std::abs(m(0, 0) - (rho(0, 0) + rho(3, 3))) < 1e-15);
    CHECK(std::abs(m(1, 1) - (rho(1, 1) + rho(2, 2))) < 1e-15);
    CHECK(std::abs(m(0, 1) - (rho(0, 1) + rho(3, 2))) < 1e-15);
    CHECK(std::abs(m(1, 0) - std::conj(m(0, 1))) < 1e-15);
    // The off-diagonal magnitude is exactly 1/16 here, so the entropy is
    // that of eigenvalues 0.5 +- 0.0625.
    CHECK(std::abs(m(0, 1)) == doctest::Approx(0.0625).epsilon(1e-12));
  }

  SUBCASE("coin-qubit reduction") {
    const Mat m = reduce_spin_density(rho, EntropyObservable::CoinQubit);
    REQUIRE(m.dim() == 2);
    CHECK(std::abs(m(0, 0) - (rho(0, 0) + rho(2, 2))) < 1e-15);
    CHECK(std::abs(m(1, 1) - (rho(1, 1) + rho(3, 3))) < 1e-15);
    CHECK(std::abs(m(0, 1) - (rho(0, 1) + rho(2, 3))) < 1e-15);
  }

  SUBCASE("full-spin has no 2x2 reduction") {
    CHECK_THROWS_AS(reduce_spin_density(rho, EntropyObservable::FullSpin),
                    std::invalid_argument);
  }
}

TEST_CASE("spin-position entanglement series") {
  const MeasureSeries sector =
      spin_position_entanglement(initen(), kP1, 50, EntropyObservable::SectorLabel);
  REQUIRE(sector.samples.size() == 51);

  SUBCASE("frozen values") {
    CHECK(std::abs(series_value(sector, 0)) < 1e-12);
    CHECK(series_value(sector, 1) == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(series_value(sector, 2) ==
          doctest::Approx(0.56233514461880851).epsilon(1e-12));
    CHECK(series_value(sector, 3) ==
          doctest::Approx(0.6931471805599454).epsilon(1e-12));
    CHECK(series_value(sector, 4) ==
          doctest::Approx(0.6853142072764582).epsilon(1e-12));
    CHECK(series_value(sector, 10) ==
          doctest::Approx(0.69067321589079256).epsilon(1e-12));
    CHECK(series_value(sector, 50) ==
          doctest::Approx(0.69306281414185134).epsilon(1e-12));
  }

  SUBCASE("entropy bounds") {
    for (const auto& s : sector.samples) {
      CHECK(s.value >= -1e-12);
      CHECK(s.value <= kLn2 + 1e-12);
    }
  }

  SUBCASE("observables agree with direct reduction at t = 4") {
    const Mat rho4 = reduced_spin_density(simulate(initen(), kP1, 4));

    const MeasureSeries coin =
        spin_position_entanglement(initen(), kP1, 4, EntropyObservable::CoinQubit);
    const double direct_coin =
        von_neumann_entropy(reduce_spin_density(rho4, EntropyObservable::CoinQubit));
    CHECK(series_value(coin, 4) == doctest::Approx(direct_coin).epsilon(1e-12));

    const MeasureSeries full =
        spin_position_entanglement(initen(), kP1, 4, EntropyObservable::FullSpin);
    CHECK(series_value(full, 4) ==
          doctest::Approx(1.2242697985679281).epsilon(1e-12));
    for (const auto& s : full.samples) CHECK(s.value <= 2.0 * kLn2 + 1e-12);
  }
}

TEST_CASE("divergences on explicit matrices") {
  const Mat quarter = [] {
    Mat m(4);
    for (int i = 0; i < 4; ++i) m(i, i) = 0.25;
    return m;
  }();
  const Mat half = [] {
    Mat m(4);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    return m;
  }();

  SUBCASE("hand-evaluated example") {
    CHECK(srd(half, quarter, 0.5) == doctest::Approx(kLn2).epsilon(1e-13));
    CHECK(rre(half, quarter, 0.5) == doctest::Approx(kLn2).epsilon(1e-13));
    CHECK(classical_renyi({0.5, 0.5, 0.0, 0.0}, {0.25, 0.25, 0.25, 0.25}, 0.5) ==
          doctest::Approx(kLn2).epsilon(1e-14));
    CHECK(classical_renyi({1.0, 0.0}, {0.5, 0.5}, 0.5) ==
          doctest::Approx(kLn2).epsilon(1e-14));
  }

  SUBCASE("identical states give zero") {
    std::mt19937 rng(11);
    const Mat u = random_unitary(rng);
    Mat rho(4);
    const auto p = random_distribution(rng, 0.05);
    for (int i = 0; i < 4; ++i) rho(i, i) = p[i];
    rho = u * rho * adjoint(u);
    for (double alpha : {0.25, 0.5, 0.75}) {
      CHECK(std::abs(srd(rho, rho, alpha)) < 1e-12);
      CHECK(std::abs(rre(rho, rho, alpha)) < 1e-12);
    }
  }

  SUBCASE("commuting pairs reduce to the classical value") {
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_distribution(rng, 0.02);
      const auto q = random_distribution(rng, 0.02);
      const Mat u = random_unitary(rng);
      Mat dp(4), dq(4);
      for (int i = 0; i < 4; ++i) {
        dp(i, i) = p[i];
        dq(i, i) = q[i];
      }
      const Mat rho = u * dp * adjoint(u);
      const Mat sigma = u * dq * adjoint(u);
      for (double alpha : {0.25, 0.5, 0.75}) {
        const double cl = classical_renyi(p, q, alpha);
        CHECK(std::abs(srd(rho, sigma, alpha) - cl) < 1e-12);
        CHECK(std::abs(rre(rho, sigma, alpha) - cl) < 1e-12);
      }
    }
  }

  SUBCASE("domain guards") {
    for (double alpha : {0.0, 1.0, 1.5, -0.25}) {
      CHECK_THROWS_AS(srd(half, quarter, alpha), std::invalid_argument);
      CHECK_THROWS_AS(rre(half, quarter, alpha), std::invalid_argument);
    }
    Mat proj0(4), proj1(4);
    proj0(0, 0) = 1.0;
    proj1(1, 1) = 1.0;
    CHECK_THROWS_AS(srd(proj0, proj1, 0.5), std::domain_error);
    CHECK_THROWS_AS(rre(proj0, proj1, 0.5), std::domain_error);

    CHECK_THROWS_AS(classical_renyi({0.5, 0.5}, {1.0, 0.0}, 0.5),
                    std::invalid_argument);  // support violation
    CHECK_THROWS_AS(classical_renyi({0.5, 0.5}, {0.5, 0.5}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(classical_renyi({-0.1, 1.1}, {0.5, 0.5}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(classical_renyi({1.0}, {0.5, 0.5}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("divergence series of the walk") {
  SUBCASE("frozen values at t = 5") {
    struct Row {
      double alpha, srdValue, rreValue;
    };
    const Row rows[] = {
        {0.25, 0.42283710848783584, 0.42462949962759472},
        {0.5, 1.2685113254635076, 1.2720172453020506},
        {0.75, 3.8055339763905227, 3.8106769409909105},
    };
    for (const Row& r : rows) {
      const RenyiSeriesPair pair = renyi_series(kP1, r.alpha, 5);
      CHECK(series_value(pair.srd, 5) == doctest::Approx(r.srdValue).epsilon(1e-12));
      CHECK(series_value(pair.rre, 5) == doctest::Approx(r.rreValue).epsilon(1e-12));
    }
  }

  SUBCASE("t = 0 sample is zero when requested") {
    const RenyiSeriesPair pair = renyi_series(kP1, 0.25, 3, true);
    CHECK(pair.srd.samples.front().t == 0);
    CHECK(pair.srd.samples.front().value == 0.0);
    CHECK(pair.rre.samples.front().value == 0.0);
  }

  SUBCASE("nonnegative along the series") {
    const RenyiSeriesPair pair = renyi_series(kP2, 0.5, 40);
    for (const auto& s : pair.srd.samples) CHECK(s.value >= -1e-12);
    for (const auto& s : pair.rre.samples) CHECK(s.value >= -1e-12);
  }

  SUBCASE("explicit-spin overload matches the default reference spin") {
    const RenyiSeriesPair a = renyi_series(kP3, 0.25, 10);
    const RenyiSeriesPair b = renyi_series(renyi_reference_spin(), kP3, 0.25, 10);
    for (size_t i = 0; i < a.srd.samples.size(); ++i) {
      CHECK(a.srd.samples[i].value == b.srd.samples[i].value);
      CHECK(a.rre.samples[i].value == b.rre.samples[i].value);
    }
  }

  SUBCASE("series values match the generic matrix path") {
    const SpinVector ref = renyi_reference_spin();
    const Mat rho = reduced_spin_density(simulate(ref, kP1, 40));
    const Mat sigma = projector(ref);
    const RenyiSeriesPair pair = renyi_series(kP1, 0.25, 40);
    CHECK(std::abs(series_value(pair.srd, 40) - srd(rho, sigma, 0.25)) < 1e-12);
    CHECK(std::abs(series_value(pair.rre, 40) - rre(rho, sigma, 0.25)) < 1e-12);
  }
}

TEST_CASE("entangling power") {
  const QuadratureSpec q88{8, 8};

  SUBCASE("zero steps, upper bound, guards") {
    CHECK(entangling_power(kP1, 0, q88) == doctest::Approx(0.0).epsilon(1e-14));
    for (int t : {1, 5, 20})
      CHECK(entangling_power(kP2, t, q88) <= 0.75 + 1e-12);
    CHECK_THROWS_AS(entangling_power(kP1, -1, q88), std::invalid_argument);
    CHECK_THROWS_AS(entangling_power(kP1, 3, QuadratureSpec{1, 8}),
                    std::invalid_argument);
    CHECK_THROWS_AS(entangling_power(kP1, 3, QuadratureSpec{8, 0}),
                    std::invalid_argument);
  }

  SUBCASE("frozen value at t = 20") {
    CHECK(entangling_power(kP1, 20, q88) ==
          doctest::Approx(0.664566626387467).epsilon(1e-10));
  }

  SUBCASE("node doubling is inert") {
    const double coarse = entangling_power(kP1, 20, q88);
    const double fine = entangling_power(kP1, 20, QuadratureSpec{16, 16});
    CHECK(std::abs(coarse - fine) < 1e-10);
  }
}
