#pragma once

#include <optional>

#include "bellwalk/types.hpp"

namespace bellwalk {

// Constant modes of the continuum field parameterization (radians here, not
// turns: these are the barred fields of the long-wavelength expansion).
struct ContinuumParams {
  double alphaBar = 0.0;
  double xiBar = 0.0;
  double thetaBar1 = 0.0;
  double thetaBar2 = 0.0;
  int k1 = 0;
  int k2 = 0;
};

struct ContinuumFields {
  std::array<double, 2> Aplus{};   // gauge potential of the + flavor
  std::array<double, 2> Aminus{};  // gauge potential of the - flavor
  cplx Mplus{};                    // mass parameter of the + flavor
  cplx Mminus{};                   // mass parameter of the - flavor
};

// Gauge potentials A_pm = (alphaBar -/+ ... ) and masses M_pm from the
// combinations Theta_pm = thetaBar1 e^{i(alphaBar - xiBar + k1 pi)}
//                        +- thetaBar2 e^{i(alphaBar + xiBar + k2 pi)}.
ContinuumFields continuum_fields(const ContinuumParams& params);

using DiracSpinor = std::array<cplx, 2>;

// u(p) = (Q-, Q+), v(p) = (Q-, -Q+) with Q± = sqrt(p0 ± p), p0 = sqrt(p²+m²).
// Throws std::domain_error when p = m = 0 (p0 = 0, spinors degenerate).
DiracSpinor dirac_u(double p, double m);
DiracSpinor dirac_v(double p, double m);

// E_branch(p) = V + branch * sqrt(p² + m²); branch must be +1 or -1.
double dispersion(double p, double V, double m, int branch);

// Momentum window where the lower dispersion branch stays non-negative:
// [-sqrt(V²-m²), +sqrt(V²-m²)] when V >= m, empty when V < m.
std::optional<std::array<double, 2>> positive_energy_window(double V, double m);

struct PacketSpec {
  double sigma = 1.0;  // Gaussian width, > 0
  double theta = 0.0;  // Bloch polar angle of the spin factor
  double mu = 0.0;     // Bloch azimuthal angle
};

// Gaussian packet mode coefficients
//   a(p) = A(p) (Q- cos(theta/2) + Q+ sin(theta/2) e^{i mu})
//   b(p) = A(p) (Q+ cos(theta/2) - Q- sin(theta/2) e^{i mu})
// with A(p) = (2 pi sigma²)^{1/4} e^{-p² sigma²/4} / sqrt(2 p0); together they
// satisfy integral dp/2pi (|a|² + |b|²) = 1. Throws std::domain_error when
// p0 = 0 and std::invalid_argument for sigma <= 0 or m < 0.
std::pair<cplx, cplx> packet_coefficients(const PacketSpec& spec, double m, double p);

// Trapezoid evaluation of the normalization integral over |p| <= 12/sigma.
double packet_norm(const PacketSpec& spec, double m, int nodes = 2048);

// Reassembles a walk spin vector from the two continuum flavors: components
// {0, 3} receive psi+ and {1, 2} receive psi-, i.e. the output is
// (psi+_1, psi-_1, psi-_2, psi+_2). Norm-preserving permutation.
SpinVector assemble_walk_spinor(const DiracSpinor& psiPlus, const DiracSpinor& psiMinus);

// E = 2 alpha + sign1 sqrt(p1² + theta1²) + sign2 sqrt(p2² + theta2²).
double two_particle_spectrum(double p1, double p2, double alpha, double theta1,
                             double theta2, int sign1, int sign2);

}  // namespace bellwalk
