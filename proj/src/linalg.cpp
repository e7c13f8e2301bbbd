#include "bellwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bellwalk {

namespace {

constexpr double kOffDiagTol = 1e-14;
constexpr double kHermTol = 1e-10;
constexpr double kEigClamp = -1e-12;

void check_dim(int n) {
  if (n < 2 || n > 4) throw std::invalid_argument("Mat: dimension must be 2..4");
}

}  // namespace

Mat::Mat(int n) : n_(n) {
  check_dim(n);
  a_.fill(cplx{});
}

Mat Mat::identity(int n) {
  Mat I(n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat operator*(const Mat& A, const Mat& B) {
  const int n = A.dim();
  if (n != B.dim()) throw std::invalid_argument("Mat: dimension mismatch");
  Mat C(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = A(i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < n; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Mat adjoint(const Mat& A) {
  const int n = A.dim();
  Mat B(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = std::conj(A(j, i));
  return B;
}

cplx trace(const Mat& A) {
  cplx t{};
  for (int i = 0; i < A.dim(); ++i) t += A(i, i);
  return t;
}

double frobenius_norm(const Mat& A) {
  double s = 0.0;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) s += std::norm(A(i, j));
  return std::sqrt(s);
}

double max_abs_diff(const Mat& A, const Mat& B) {
  const int n = A.dim();
  if (n != B.dim()) throw std::invalid_argument("Mat: dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(A(i, j) - B(i, j)));
  return worst;
}

EigResult eig_hermitian(const Mat& H) {
  const int n = H.dim();
  const double scale = std::max(1.0, frobenius_norm(H));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(H(i, j) - std::conj(H(j, i))) > kHermTol * scale)
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");

  Mat A = H;
  // Exact symmetrization so rounding in the input cannot bias the rotations.
  for (int i = 0; i < n; ++i) {
    A(i, i) = cplx(A(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const cplx mean = 0.5 * (A(i, j) + std::conj(A(j, i)));
      A(i, j) = mean;
      A(j, i) = std::conj(mean);
    }
  }
  Mat V = Mat::identity(n);

  auto off_norm = [&A, n]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 64 && off_norm() > kOffDiagTol * scale; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double g = std::abs(A(p, q));
        if (g == 0.0) continue;
        // Phase that makes the (p,q) entry real, then a real Jacobi rotation.
        const cplx u = std::conj(A(p, q)) / g;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double tth = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + tth * tth);
        const double s = tth * c;

        Mat R = Mat::identity(n);
        R(p, p) = c;
        R(p, q) = s;
        R(q, p) = -s * u;
        R(q, q) = c * u;
        A = adjoint(R) * A * R;
        V = V * R;
        // Re-pin the rotated pair so rounding cannot reintroduce asymmetry.
        A(q, p) = std::conj(A(p, q));
        A(p, p) = cplx(A(p, p).real(), 0.0);
        A(q, q) = cplx(A(q, q).real(), 0.0);
      }
    }
  }

  EigResult out;
  out.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&diag](int a, int b) { return diag[a] > diag[b]; });
  out.vectors = Mat(n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = V(i, order[j]);
  }
  return out;
}

namespace {

std::vector<double> clamped_spectrum(const EigResult& eig, const char* who) {
  std::vector<double> ev = eig.values;
  for (double& v : ev) {
    if (v < kEigClamp)
      throw std::invalid_argument(std::string(who) +
                                  ": eigenvalue below PSD tolerance");
    if (v < 0.0) v = 0.0;
  }
  return ev;
}

}  // namespace

Mat mat_power(const Mat& rho, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("mat_power: exponent must be > 0");
  const EigResult eig = eig_hermitian(rho);
  const std::vector<double> ev = clamped_spectrum(eig, "mat_power");
  const int n = rho.dim();
  Mat D(n);
  for (int i = 0; i < n; ++i) D(i, i) = ev[i] == 0.0 ? 0.0 : std::pow(ev[i], p);
  return eig.vectors * D * adjoint(eig.vectors);
}

double von_neumann_entropy(const Mat& rho) {
  if (std::abs(trace(rho) - cplx(1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("von_neumann_entropy: trace must be 1");
  const EigResult eig = eig_hermitian(rho);
  const std::vector<double> ev = clamped_spectrum(eig, "von_neumann_entropy");
  double h = 0.0;
  for (double v : ev)
    if (v > 0.0) h -= v * std::log(v);
  // An eigenvalue a rounding error above 1 contributes -v ln v < 0; the
  // entropy itself is nonnegative, so clamp the noise.
  return std::max(h, 0.0);
}

double purity(const Mat& rho) {
  cplx s{};
  const int n = rho.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += rho(i, j) * rho(j, i);
  return s.real();
}

}  // namespace bellwalk
