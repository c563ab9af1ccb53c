#pragma once

#include <span>
#include <vector>

namespace carbofront {

/// Piecewise-linear function on [0, length] through equally spaced samples.
/// A single sample denotes a constant profile.
class PiecewiseLinearProfile {
 public:
  PiecewiseLinearProfile(std::vector<double> samples, double length);

  double operator()(double x) const;

  double length() const noexcept { return length_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double sup() const;
  double inf() const;

 private:
  std::vector<double> samples_;
  double length_;
};

/// Linear interpolation of node values on a uniform grid over [0, 1].
double interpolate_unit(std::span<const double> nodes, double y);

}  // namespace carbofront
