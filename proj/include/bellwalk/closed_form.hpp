#pragma once

#include <vector>

#include "bellwalk/coin.hpp"
#include "bellwalk/types.hpp"
#include "bellwalk/walk.hpp"

namespace bellwalk {

// Terminating Gauss hypergeometric sum: sum_{k=0}^{K} (a)_k (b)_k / ((c)_k k!)
// z^k with K = -min(a,b), which must be a non-positive integer (else
// std::domain_error). When c is a non-positive integer the regularized
// convention is used: terms divide by Gamma(c + k) with 1/Gamma(non-positive
// integer) = 0, and the caller supplies any outer Gamma factors.
double hyp2f1_terminating(double a, double b, double c, double z);

// Stay amplitude F_m(theta) after t steps along one diagonal family; theta in
// turns. Requires |m| <= t and m == t (mod 2); throws std::invalid_argument.
// F_t = cos^t(tau theta); F_{-t} = 0.
cplx F(int m, int t, double angleParam);

// Flip amplitude G_m(theta); same domain as F. G_t = -i sin cos^{t-1}; the
// m = -t value is the analytic continuation -i sin cos^{-t-1} (it only ever
// enters the assembled state multiplied by a vanishing boundary factor).
cplx G(int m, int t, double angleParam);

// Closed-form state after t steps; equals simulate(spin, params, t) to
// near machine precision. t >= 0 (t = 0 returns the initial state).
WalkState amplitudes_closed(const SpinVector& spin, const CoinParams& params, int t);

// Per-time-step tables of F and G for both angle parameters, indexed by
// k = 0..t with m = -t + 2k. Shared by any computation that needs amplitudes
// for several initial spins at once (the state is linear in the spin).
struct FGTables {
  int t = 0;
  cplx phase_minus, phase_plus;  // e^{-i tau t z}, e^{+i tau t z}
  std::vector<cplx> Fy, Gy, Fx, Gx;
};

FGTables fg_tables(const CoinParams& params, int t);

// Assemble the state for one spin from precomputed tables.
WalkState assemble_from_tables(const FGTables& tab, const SpinVector& spin);

}  // namespace bellwalk
