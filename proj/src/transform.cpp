#include "carbofront/transform.hpp"

#include <algorithm>
#include <cmath>

#include "carbofront/error.hpp"

namespace carbofront {

FixedGrid::FixedGrid(std::size_t n_nodes) : n_(n_nodes), dy_(0.0) {
  if (n_nodes < 3) throw InvalidParameter("fixed grid needs at least 3 nodes");
  dy_ = 1.0 / static_cast<double>(n_nodes - 1);
}

std::vector<double> to_fixed(const PiecewiseLinearProfile& profile, double s,
                             const FixedGrid& grid) {
  if (!(s > 0.0)) throw InvalidState("front position must be positive");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = profile(s * grid.node(i));
  }
  return out;
}

double to_physical(std::span<const double> field, double s, double x) {
  if (!(s > 0.0)) throw InvalidState("front position must be positive");
  if (field.empty()) throw InvalidParameter("empty field");
  const double slack = 1e-12 * std::max(1.0, s);
  if (x < -slack || x > s + slack) {
    throw DomainError("x outside [0, s]");
  }
  return interpolate_unit(field, std::clamp(x / s, 0.0, 1.0));
}

}  // namespace carbofront
