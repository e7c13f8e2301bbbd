#include "bellwalk/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace bellwalk {

namespace {

bool is_nonpositive_integer(double v) {
  return v <= 1e-12 && std::abs(v - std::round(v)) < 1e-9;
}

// scale * P_n^{(alpha,beta)}(x) by the forward three-term degree recurrence.
// Folding the scale into the seeds keeps every intermediate on the magnitude
// of the final result (the bare polynomial values can overflow for large n).
double jacobi_scaled(int n, double alpha, double beta, double x, double scale) {
  if (n < 0) return 0.0;
  double q_prev = scale;
  if (n == 0) return q_prev;
  double q = scale * ((alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0);
  for (int k = 2; k <= n; ++k) {
    const double ab = alpha + beta;
    const double den = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0);
    const double c1 = (2.0 * k + ab - 1.0) *
                      ((2.0 * k + ab) * (2.0 * k + ab - 2.0) * x +
                       alpha * alpha - beta * beta);
    const double c2 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab);
    const double next = (c1 * q - c2 * q_prev) / den;
    q_prev = q;
    q = next;
  }
  return q;
}

void check_domain(int m, int t, const char* who) {
  if (t < 0) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
  if (std::abs(m) > t)
    throw std::invalid_argument(std::string(who) + ": |m| must be <= t");
  if ((t - m) % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": m and t must share parity");
}

}  // namespace

double hyp2f1_terminating(double a, double b, double c, double z) {
  const double mn = std::min(a, b);
  if (!is_nonpositive_integer(mn))
    throw std::domain_error("hyp2f1_terminating: series does not terminate");
  const int K = static_cast<int>(std::round(-mn));

  const bool c_nonpos_int = is_nonpositive_integer(c);
  if (!c_nonpos_int) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < K; ++k) {
      term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
      sum += term;
    }
    return sum;
  }

  // Regularized branch: 1/Gamma(c+k) vanishes until c + k reaches 1.
  const int k0 = 1 - static_cast<int>(std::round(c));
  if (k0 > K) return 0.0;
  double term = 1.0;  // (a)_{k0} (b)_{k0} z^{k0} / (k0! * Gamma(c + k0))
  for (int k = 0; k < k0; ++k) term *= (a + k) * (b + k) / (k + 1.0) * z;
  double sum = term;
  for (int k = k0; k < K; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
  }
  return sum;
}

cplx F(int m, int t, double angleParam) {
  check_domain(m, t, "F");
  const double c = std::cos(kTau * angleParam);
  const double s = std::sin(kTau * angleParam);
  if (m == t) return cplx(std::pow(c, t), 0.0);
  if (m == -t) return cplx{};
  const int am = std::abs(m);
  const int n = (t - am - 2) / 2;
  const double u = -std::cos(2.0 * kTau * angleParam);
  const double q = jacobi_scaled(n, am, 1.0, u, std::pow(c, am));
  if (m >= 0) {
    const double sign = ((t - m) / 2) % 2 ? -1.0 : 1.0;
    return cplx(sign * s * s * (double(n + am + 1) / double(n + 1)) * q, 0.0);
  }
  const double sign = ((t + m) / 2) % 2 ? -1.0 : 1.0;
  return cplx(sign * s * s * q, 0.0);
}

cplx G(int m, int t, double angleParam) {
  check_domain(m, t, "G");
  const double c = std::cos(kTau * angleParam);
  const double s = std::sin(kTau * angleParam);
  if (t == 0) return cplx{};  // no flip can have occurred
  if (m == -t) return cplx(0.0, -s * std::pow(c, -t - 1));
  const int b = std::abs(m - 1);
  const int nu = (t - 1 - b) / 2;
  const double v = std::cos(2.0 * kTau * angleParam);
  const double q = jacobi_scaled(nu, 0.0, b, v, std::pow(c, b));
  return cplx(0.0, -s * q);
}

FGTables fg_tables(const CoinParams& raw, int t) {
  if (t < 0) throw std::invalid_argument("fg_tables: t must be >= 0");
  const CoinParams p = CoinParams::make(raw.x, raw.y, raw.z);
  FGTables tab;
  tab.t = t;
  tab.phase_minus = std::polar(1.0, -kTau * t * p.z);
  tab.phase_plus = std::polar(1.0, +kTau * t * p.z);
  tab.Fy.resize(t + 1);
  tab.Gy.resize(t + 1);
  tab.Fx.resize(t + 1);
  tab.Gx.resize(t + 1);
  for (int k = 0; k <= t; ++k) {
    const int m = -t + 2 * k;
    tab.Fy[k] = F(m, t, p.y);
    tab.Gy[k] = G(m, t, p.y);
    tab.Fx[k] = F(m, t, p.x);
    tab.Gx[k] = G(m, t, p.x);
  }
  return tab;
}

WalkState assemble_from_tables(const FGTables& tab, const SpinVector& spin) {
  const int t = tab.t;
  WalkState st;
  st.t = t;
  st.a0.assign(t + 1, cplx{});
  st.a3.assign(t + 1, cplx{});
  st.a1.assign(t + 1, cplx{});
  st.a2.assign(t + 1, cplx{});
  if (t == 0) {
    st.a0[0] = spin[0];
    st.a3[0] = spin[3];
    st.a1[0] = spin[1];
    st.a2[0] = spin[2];
    return st;
  }
  // Boundary factors: the "up-moving" components vanish at m = -t and the
  // "down-moving" ones at m = +t; index t - k mirrors m -> -m.
  for (int k = 0; k <= t; ++k) {
    if (k > 0) {
      st.a0[k] = tab.phase_minus * (tab.Fy[k] * spin[0] + tab.Gy[k] * spin[3]);
      st.a1[k] = tab.phase_plus * (tab.Fx[k] * spin[1] + tab.Gx[k] * spin[2]);
    }
    if (k < t) {
      st.a3[k] =
          tab.phase_minus * (tab.Gy[t - k] * spin[0] + tab.Fy[t - k] * spin[3]);
      st.a2[k] =
          tab.phase_plus * (tab.Gx[t - k] * spin[1] + tab.Fx[t - k] * spin[2]);
    }
  }
  return st;
}

WalkState amplitudes_closed(const SpinVector& spin, const CoinParams& params, int t) {
  if (t < 0) throw std::invalid_argument("amplitudes_closed: t must be >= 0");
  if (std::abs(std::sqrt(norm_squared(spin)) - 1.0) > 1e-9)
    throw std::invalid_argument("amplitudes_closed: spin must be normalized");
  return assemble_from_tables(fg_tables(params, t), spin);
}

}  // namespace bellwalk
