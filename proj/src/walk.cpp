#include "bellwalk/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace bellwalk {

WalkState initial_state(const SpinVector& spin) {
  if (std::abs(std::sqrt(norm_squared(spin)) - 1.0) > 1e-9)
    throw std::invalid_argument("initial_state: spin must be normalized");
  WalkState st;
  st.t = 0;
  st.a0 = {spin[0]};
  st.a3 = {spin[3]};
  st.a1 = {spin[1]};
  st.a2 = {spin[2]};
  return st;
}

WalkState step(const WalkState& state, const CoinParams& params) {
  const CoinParams p = CoinParams::make(params.x, params.y, params.z);
  const double cx = std::cos(kTau * p.x), sx = std::sin(kTau * p.x);
  const double cy = std::cos(kTau * p.y), sy = std::sin(kTau * p.y);
  const cplx pm = std::polar(1.0, -kTau * p.z);
  const cplx pp = std::polar(1.0, +kTau * p.z);
  const cplx mi(0.0, -1.0);

  const int t = state.t;
  WalkState out;
  out.t = t + 1;
  out.a0.assign(t + 2, cplx{});
  out.a3.assign(t + 2, cplx{});
  out.a1.assign(t + 2, cplx{});
  out.a2.assign(t + 2, cplx{});

  // Component 0 (and 1) moves one step up its diagonal, 3 (and 2) one step
  // down: new index k reads old index k-1 for the former and k for the latter.
  for (int k = 0; k <= t; ++k) {
    const cplx d_up = pm * (cy * state.a0[k] + mi * sy * state.a3[k]);
    const cplx d_dn = pm * (mi * sy * state.a0[k] + cy * state.a3[k]);
    out.a0[k + 1] += d_up;
    out.a3[k] += d_dn;
    const cplx a_up = pp * (cx * state.a1[k] + mi * sx * state.a2[k]);
    const cplx a_dn = pp * (mi * sx * state.a1[k] + cx * state.a2[k]);
    out.a1[k + 1] += a_up;
    out.a2[k] += a_dn;
  }
  return out;
}

WalkState simulate(const SpinVector& spin, const CoinParams& params, int T) {
  if (T < 0) throw std::invalid_argument("simulate: T must be >= 0");
  WalkState st = initial_state(spin);
  for (int i = 0; i < T; ++i) st = step(st, params);
  return st;
}

double norm_squared(const WalkState& state) {
  double s = 0.0;
  for (const auto* arr : {&state.a0, &state.a3, &state.a1, &state.a2})
    for (const cplx& v : *arr) s += std::norm(v);
  return s;
}

double max_abs_diff(const WalkState& a, const WalkState& b) {
  if (a.t != b.t) throw std::invalid_argument("max_abs_diff: time mismatch");
  double worst = 0.0;
  for (auto [pa, pb] : {std::pair{&a.a0, &b.a0}, std::pair{&a.a3, &b.a3},
                        std::pair{&a.a1, &b.a1}, std::pair{&a.a2, &b.a2}})
    for (size_t k = 0; k < pa->size(); ++k)
      worst = std::max(worst, std::abs((*pa)[k] - (*pb)[k]));
  return worst;
}

std::optional<SpinVector> site_spin_vector(const WalkState& state, int m, int n) {
  const int t = state.t;
  if (std::abs(m) > t || (t - m) % 2 != 0) return std::nullopt;
  SpinVector v{};
  bool on_lattice = false;
  if (n == m) {
    const int k = (m + t) / 2;
    v[0] += state.a0[k];
    v[3] += state.a3[k];
    on_lattice = true;
  }
  if (n == -m && std::abs(n) <= t) {
    const int k = (m + t) / 2;
    v[1] += state.a1[k];
    v[2] += state.a2[k];
    on_lattice = true;
  }
  if (!on_lattice) return std::nullopt;
  return v;
}

}  // namespace bellwalk
