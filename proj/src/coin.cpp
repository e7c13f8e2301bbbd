#include "bellwalk/coin.hpp"

#include <cmath>
#include <stdexcept>

namespace bellwalk {

namespace {

double wrap_unit(double v) {
  double w = v - std::floor(v);
  if (w >= 1.0) w = 0.0;  // v was a negative value rounding up to exactly 1
  return w;
}

}  // namespace

CoinParams CoinParams::make(double x, double y, double z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    throw std::invalid_argument("CoinParams: angles must be finite");
  return CoinParams{wrap_unit(x), wrap_unit(y), wrap_unit(z)};
}

Mat build_coin(const CoinParams& params) {
  const CoinParams p = CoinParams::make(params.x, params.y, params.z);
  const double cx = std::cos(kTau * p.x), sx = std::sin(kTau * p.x);
  const double cy = std::cos(kTau * p.y), sy = std::sin(kTau * p.y);
  const cplx pm = std::polar(1.0, -kTau * p.z);  // e^{-i tau z}
  const cplx pp = std::polar(1.0, +kTau * p.z);  // e^{+i tau z}
  const cplx mi(0.0, -1.0);

  Mat C(4);
  C(0, 0) = pm * cy;
  C(0, 3) = mi * pm * sy;
  C(3, 0) = mi * pm * sy;
  C(3, 3) = pm * cy;
  C(1, 1) = pp * cx;
  C(1, 2) = mi * pp * sx;
  C(2, 1) = mi * pp * sx;
  C(2, 2) = pp * cx;
  return C;
}

std::array<double, 4> bell_phases(const CoinParams& params) {
  const CoinParams p = CoinParams::make(params.x, params.y, params.z);
  return {-kTau * p.z - kTau * p.y, -kTau * p.z + kTau * p.y,
          kTau * p.z - kTau * p.x, kTau * p.z + kTau * p.x};
}

std::array<SpinVector, 4> bell_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  return {SpinVector{r, 0.0, 0.0, r}, SpinVector{r, 0.0, 0.0, -r},
          SpinVector{0.0, r, r, 0.0}, SpinVector{0.0, r, -r, 0.0}};
}

Mat build_coin_from_bell(const CoinParams& params) {
  const auto phases = bell_phases(params);
  const auto basis = bell_basis();
  Mat C(4);
  for (int k = 0; k < 4; ++k) {
    const cplx ev = std::polar(1.0, phases[k]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        C(i, j) += ev * basis[k][i] * std::conj(basis[k][j]);
  }
  return C;
}

}  // namespace bellwalk
