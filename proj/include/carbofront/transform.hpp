#pragma once

// Front-fixing (Landau) change of variables y = x / s(t), mapping the moving
// physical interval [0, s(t)] onto the fixed unit interval.

#include <cstddef>
#include <span>
#include <vector>

#include "carbofront/error.hpp"
#include "carbofront/profile.hpp"

namespace carbofront {

/// Uniform nodes y_i = i / (n - 1) on [0, 1], n >= 3.
class FixedGrid {
 public:
  explicit FixedGrid(std::size_t n_nodes);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return dy_; }
  double node(std::size_t i) const noexcept {
    return i + 1 == n_ ? 1.0 : static_cast<double>(i) * dy_;
  }

 private:
  std::size_t n_;
  double dy_;
};

/// Samples profile(s * y_i) at every grid node.
std::vector<double> to_fixed(const PiecewiseLinearProfile& profile, double s,
                             const FixedGrid& grid);

/// Value of a grid field at physical position x in [0, s].
double to_physical(std::span<const double> field, double s, double x);

}  // namespace carbofront
