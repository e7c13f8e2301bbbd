#pragma once

#include <vector>

#include "bellwalk/types.hpp"

namespace bellwalk {

// Dense complex matrix of dimension 2..4 (the library only ever needs 2x2 and
// 4x4 density matrices). Storage is a fixed array; no heap allocation.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n);
  static Mat identity(int n);

  int dim() const { return n_; }
  cplx& operator()(int r, int c) { return a_[r * n_ + c]; }
  const cplx& operator()(int r, int c) const { return a_[r * n_ + c]; }

 private:
  int n_ = 0;
  std::array<cplx, 16> a_{};
};

Mat operator*(const Mat& A, const Mat& B);
Mat adjoint(const Mat& A);
cplx trace(const Mat& A);
double frobenius_norm(const Mat& A);
double max_abs_diff(const Mat& A, const Mat& B);

// Eigendecomposition of a Hermitian matrix: values sorted descending,
// eigenvectors as orthonormal columns of `vectors` (same column order).
struct EigResult {
  std::vector<double> values;
  Mat vectors;
};

// Cyclic complex Jacobi rotations, iterated until the off-diagonal Frobenius
// norm falls below 1e-14 (relative to the matrix scale). Throws
// std::invalid_argument for non-Hermitian input.
EigResult eig_hermitian(const Mat& H);

// V diag(lambda^p) V^dagger with the convention 0^p = 0. Eigenvalues in
// [-1e-12, 0) are treated as rounding and clamped to 0; anything more negative
// throws std::invalid_argument, as does p <= 0.
Mat mat_power(const Mat& rho, double p);

// -sum lambda_i ln lambda_i in nats (0 ln 0 = 0). Requires trace 1 within
// 1e-10 and PSD input (same clamping rule); throws std::invalid_argument.
double von_neumann_entropy(const Mat& rho);

// tr(rho^2). No trace-1 requirement.
double purity(const Mat& rho);

}  // namespace bellwalk
