#pragma once

#include <cstddef>
#include <span>

namespace carbofront {

/// Thomas algorithm. Row i reads
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored. The solution overwrites rhs;
/// scratch must hold n values. No pivoting: callers supply diagonally
/// dominant systems.
inline void solve_tridiagonal(std::span<const double> lower,
                              std::span<const double> diag,
                              std::span<const double> upper,
                              std::span<double> rhs, std::span<double> scratch) {
  const std::size_t n = diag.size();
  scratch[0] = upper[0] / diag[0];
  rhs[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * scratch[i - 1];
    scratch[i] = i + 1 < n ? upper[i] / denom : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= scratch[i] * rhs[i + 1];
  }
}

}  // namespace carbofront
