#pragma once

#include <string>
#include <vector>

#include "bellwalk/closed_form.hpp"
#include "bellwalk/linalg.hpp"
#include "bellwalk/walk.hpp"

namespace bellwalk {

struct GridEntry {
  int m = 0, n = 0;
  double value = 0.0;
};

// Distribution over the occupied lattice sites at a fixed time; entries are
// sorted by (m, n) for deterministic serialization.
struct GridDistribution {
  int t = 0;
  std::vector<GridEntry> entries;
};

struct SeriesSample {
  int t = 0;
  double value = 0.0;
  bool flagged = false;  // divergence at this sample (value meaningless)
};

struct MeasureSeries {
  std::string label;
  std::vector<SeriesSample> samples;  // t strictly increasing
};

struct QuadratureSpec {
  int nTheta = 8;
  int nAlpha = 8;
};

// Sites with conditional probability below this are reported as absent
// rather than as entropy zero (0/0 conditioning is undefined).
inline constexpr double kSiteProbThreshold = 1e-14;

// Which qubit of the on-site spin pair the 2x2 conditional state keeps.
enum class SiteQubit { KeepA, KeepB };

// Which reduced state the entanglement series measures:
//   SectorLabel - 2x2 state of the which-diagonal degree of freedom
//                 (components {0,3} vs {1,2}); the series the asymptotic
//                 constants refer to.
//   CoinQubit   - 2x2 state of the second on-site qubit.
//   FullSpin    - von Neumann entropy of the full 4x4 reduced spin state.
enum class EntropyObservable { SectorLabel, CoinQubit, FullSpin };

GridDistribution probability_grid(const WalkState& state);

// Entropy (nats, in [0, ln 2]) of one qubit of the normalized conditional
// spin state at site (m, n). Throws std::domain_error when the site
// probability is below kSiteProbThreshold (absent site).
double site_entanglement(const WalkState& state, int m, int n,
                         SiteQubit keep = SiteQubit::KeepA);

// Position-traced 4x4 spin density matrix (Hermitian, PSD, trace 1).
Mat reduced_spin_density(const WalkState& state);

// 2x2 reduction of a 4x4 spin density for the given observable
// (SectorLabel or CoinQubit).
Mat reduce_spin_density(const Mat& rho, EntropyObservable obs);

// E(t) for t = 0..T from closed-form amplitudes (O(t) work per sample).
MeasureSeries spin_position_entanglement(
    const SpinVector& spin, const CoinParams& params, int T,
    EntropyObservable obs = EntropyObservable::SectorLabel);

// Mean linear entropy 1 - tr(rho~^2) over all product initial spins
// (Haar-uniform on each qubit's Bloch sphere), by Gauss-Legendre quadrature
// in each cos(theta_i) and uniform periodic trapezoid in each alpha_i.
// Result in [0, 3/4]. Throws std::invalid_argument for t < 0 or fewer than
// 2 nodes per axis.
double entangling_power(const CoinParams& params, int t, const QuadratureSpec& quad);

// Sandwiched Renyi divergence of order alpha in (0, 1):
//   (1/(alpha-1)) ln( tr[(sigma^{(1-alpha)/2alpha} rho sigma^{same})^alpha] / tr rho ).
// Throws std::invalid_argument for alpha outside (0, 1) and
// std::domain_error when the trace argument vanishes (orthogonal pair).
double srd(const Mat& rho, const Mat& sigma, double alpha);

// Standard relative Renyi entropy
//   (1/(alpha-1)) ln( tr(rho^alpha sigma^{1-alpha}) / tr rho ),
// same domain and errors as srd.
double rre(const Mat& rho, const Mat& sigma, double alpha);

// Classical counterpart on probability vectors:
//   (1/(alpha-1)) ln( sum p^alpha q^{1-alpha} / sum p ).
// Requires supp p within supp q and alpha != 1.
double classical_renyi(const std::vector<double>& p, const std::vector<double>& q,
                       double alpha);

struct RenyiSeriesPair {
  MeasureSeries srd;
  MeasureSeries rre;
};

// Both divergence series for t = 1..T (plus t = 0 when includeT0), with
// sigma the projector onto the fixed reference spin (1, i, 0, 0)/sqrt2 and
// rho(t) the reduced spin density. Divergent samples are flagged, not fatal.
RenyiSeriesPair renyi_series(const CoinParams& params, double alpha, int T,
                             bool includeT0 = false);

// Same series for an arbitrary (normalized) reference spin.
RenyiSeriesPair renyi_series(const SpinVector& spin, const CoinParams& params,
                             double alpha, int T, bool includeT0 = false);

// The reference spin used by the divergence series.
SpinVector renyi_reference_spin();

}  // namespace bellwalk
