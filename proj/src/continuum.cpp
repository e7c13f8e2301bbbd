#include "bellwalk/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace bellwalk {

namespace {

constexpr double kPi = kTau / 2.0;

double p_zero(double p, double m) {
  if (m < 0.0) throw std::invalid_argument("mass must be >= 0");
  return std::hypot(p, m);
}

// Q± = sqrt(p0 ± p); the radicand is non-negative analytically, so tiny
// negative rounding is clamped.
std::pair<double, double> q_pair(double p, double m) {
  const double p0 = p_zero(p, m);
  if (p0 == 0.0) throw std::domain_error("degenerate spinor: p = m = 0");
  const double qp = std::sqrt(std::max(0.0, p0 + p));
  const double qm = std::sqrt(std::max(0.0, p0 - p));
  return {qm, qp};
}

}  // namespace

ContinuumFields continuum_fields(const ContinuumParams& params) {
  const cplx term1 =
      params.thetaBar1 *
      std::polar(1.0, params.alphaBar - params.xiBar + params.k1 * kPi);
  const cplx term2 =
      params.thetaBar2 *
      std::polar(1.0, params.alphaBar + params.xiBar + params.k2 * kPi);
  const cplx theta_plus = term1 + term2;
  const cplx theta_minus = term1 - term2;
  ContinuumFields f;
  f.Aplus = {params.alphaBar - params.xiBar, 0.0};
  f.Aminus = {params.alphaBar + params.xiBar, 0.0};
  f.Mplus = 0.5 * (theta_plus - theta_minus);
  f.Mminus = 0.5 * (theta_plus + theta_minus);
  return f;
}

DiracSpinor dirac_u(double p, double m) {
  const auto [qm, qp] = q_pair(p, m);
  return {cplx(qm, 0.0), cplx(qp, 0.0)};
}

DiracSpinor dirac_v(double p, double m) {
  const auto [qm, qp] = q_pair(p, m);
  return {cplx(qm, 0.0), cplx(-qp, 0.0)};
}

double dispersion(double p, double V, double m, int branch) {
  if (m < 0.0) throw std::invalid_argument("dispersion: mass must be >= 0");
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("dispersion: branch must be +1 or -1");
  return V + branch * std::hypot(p, m);
}

std::optional<std::array<double, 2>> positive_energy_window(double V, double m) {
  if (m < 0.0) throw std::invalid_argument("positive_energy_window: mass must be >= 0");
  if (V < m) return std::nullopt;
  const double half = std::sqrt(std::max(0.0, V * V - m * m));
  return std::array<double, 2>{-half, half};
}

std::pair<cplx, cplx> packet_coefficients(const PacketSpec& spec, double m, double p) {
  if (!(spec.sigma > 0.0))
    throw std::invalid_argument("packet_coefficients: sigma must be > 0");
  const auto [qm, qp] = q_pair(p, m);
  const double p0 = p_zero(p, m);
  const double amp = std::pow(kTau * spec.sigma * spec.sigma, 0.25) *
                     std::exp(-p * p * spec.sigma * spec.sigma / 4.0) /
                     std::sqrt(2.0 * p0);
  const double ch = std::cos(spec.theta / 2.0);
  const double sh = std::sin(spec.theta / 2.0);
  const cplx ph = std::polar(1.0, spec.mu);
  const cplx a = amp * (qm * ch + qp * sh * ph);
  const cplx b = amp * (qp * ch - qm * sh * ph);
  return {a, b};
}

double packet_norm(const PacketSpec& spec, double m, int nodes) {
  if (nodes < 2) throw std::invalid_argument("packet_norm: need at least 2 intervals");
  const double L = 12.0 / spec.sigma;
  const double h = 2.0 * L / nodes;
  double sum = 0.0;
  for (int i = 0; i <= nodes; ++i) {
    const double p = -L + h * i;
    const auto [a, b] = packet_coefficients(spec, m, p);
    const double density = std::norm(a) + std::norm(b);
    sum += (i == 0 || i == nodes) ? 0.5 * density : density;
  }
  return sum * h / kTau;
}

SpinVector assemble_walk_spinor(const DiracSpinor& psiPlus, const DiracSpinor& psiMinus) {
  return {psiPlus[0], psiMinus[0], psiMinus[1], psiPlus[1]};
}

double two_particle_spectrum(double p1, double p2, double alpha, double theta1,
                             double theta2, int sign1, int sign2) {
  if ((sign1 != 1 && sign1 != -1) || (sign2 != 1 && sign2 != -1))
    throw std::invalid_argument("two_particle_spectrum: signs must be +1 or -1");
  return 2.0 * alpha + sign1 * std::hypot(p1, theta1) + sign2 * std::hypot(p2, theta2);
}

}  // namespace bellwalk
