#include "carbofront/profile.hpp"

#include <algorithm>
#include <cmath>

#include "carbofront/error.hpp"

namespace carbofront {

PiecewiseLinearProfile::PiecewiseLinearProfile(std::vector<double> samples,
                                               double length)
    : samples_(std::move(samples)), length_(length) {
  if (samples_.empty()) {
    throw InvalidParameter("profile needs at least one sample");
  }
  if (!(length_ > 0.0)) {
    throw InvalidParameter("profile length must be positive");
  }
}

double PiecewiseLinearProfile::operator()(double x) const {
  // Allow rounding slack at the right end, as s*y_i can overshoot s.
  const double slack = 1e-12 * std::max(1.0, length_);
  if (x < -slack || x > length_ + slack) {
    throw DomainError("profile evaluated outside [0, length]");
  }
  if (samples_.size() == 1) return samples_.front();
  return interpolate_unit(samples_, std::clamp(x / length_, 0.0, 1.0));
}

double PiecewiseLinearProfile::sup() const {
  return *std::max_element(samples_.begin(), samples_.end());
}

double PiecewiseLinearProfile::inf() const {
  return *std::min_element(samples_.begin(), samples_.end());
}

double interpolate_unit(std::span<const double> nodes, double y) {
  const std::size_t n = nodes.size();
  if (n == 1) return nodes.front();
  const double pos = y * static_cast<double>(n - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= n - 1) return nodes[n - 1];
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return nodes[i];
  return (1.0 - w) * nodes[i] + w * nodes[i + 1];
}

}  // namespace carbofront
