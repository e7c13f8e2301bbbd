#pragma once

#include <array>
#include <complex>

namespace bellwalk {

using cplx = std::complex<double>;

// Full turn; angle parameters throughout the library are in units of turns.
inline constexpr double kTau = 6.28318530717958647692528676656;

// Four-component coin/spin vector. Component index i = 2a + b where a is the
// first qubit bit and b the second (i.e. |00>, |01>, |10>, |11>).
using SpinVector = std::array<cplx, 4>;

inline double norm_squared(const SpinVector& s) {
  double n = 0.0;
  for (const auto& c : s) n += std::norm(c);
  return n;
}

}  // namespace bellwalk
