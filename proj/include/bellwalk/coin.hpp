#pragma once

#include "bellwalk/linalg.hpp"
#include "bellwalk/types.hpp"

namespace bellwalk {

// Coin angles in turns, canonicalized into [0, 1).
struct CoinParams {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  // Validates finiteness and reduces each angle mod 1. Throws
  // std::invalid_argument for non-finite input.
  static CoinParams make(double x, double y, double z);
};

// The 4x4 two-qubit coin. Block structure: components {0,3} couple through
// the y angle with phase e^{-i tau z}; components {1,2} through the x angle
// with phase e^{+i tau z}; the two pairs never mix.
Mat build_coin(const CoinParams& params);

// Phases (lambda_1..lambda_4, radians) of the coin's Bell-basis eigenvalues
// e^{i lambda_k}.
std::array<double, 4> bell_phases(const CoinParams& params);

// The four Bell vectors, in the eigenvalue order used by bell_phases:
// (e0 +- e3)/sqrt2 then (e1 +- e2)/sqrt2.
std::array<SpinVector, 4> bell_basis();

// Spectral reconstruction sum_k e^{i lambda_k} |phi_k><phi_k|; equals
// build_coin to machine precision.
Mat build_coin_from_bell(const CoinParams& params);

}  // namespace bellwalk
