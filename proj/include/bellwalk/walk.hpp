#pragma once

#include <optional>
#include <vector>

#include "bellwalk/coin.hpp"
#include "bellwalk/types.hpp"

namespace bellwalk {

// Sparse state of the walk. The walker's support stays on the two lattice
// diagonals: components 0 and 3 live at sites (m, m) and components 1 and 2
// at sites (m, -m), with m = -t + 2k for array index k = 0..t.
//
// Boundary structure: a0 and a1 vanish at m = -t; a3 and a2 vanish at m = +t.
// At even t both diagonals pass through the origin, so site (0, 0) carries
// all four components.
struct WalkState {
  int t = 0;
  std::vector<cplx> a0, a3, a1, a2;  // each of length t + 1

  int site_m(int k) const { return -t + 2 * k; }
};

// State at t = 0 with the given (normalized within 1e-9) spin at the origin.
WalkState initial_state(const SpinVector& spin);

// One application of the evolution operator (coin then conditional shift).
WalkState step(const WalkState& state, const CoinParams& params);

// T applications of step starting from initial_state(spin). T >= 0.
WalkState simulate(const SpinVector& spin, const CoinParams& params, int T);

double norm_squared(const WalkState& state);

double max_abs_diff(const WalkState& a, const WalkState& b);

// Full 4-component spin vector conditioned on site (m, n), un-normalized
// (its squared norm is the site probability). Returns nullopt when (m, n) is
// not on the support lattice of the state.
std::optional<SpinVector> site_spin_vector(const WalkState& state, int m, int n);

}  // namespace bellwalk
