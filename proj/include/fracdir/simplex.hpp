#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracdir {

/// Largest double below 1. Normalized draws are clamped to it so the dominant
/// coordinate stays interior when the others are below the rounding unit.
inline constexpr double kBelowOne = 1 - 0x1p-53;

/// Point of the open simplex: n >= 2 positive coordinates summing to 1.
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Validates and stores the coordinates as given.
  explicit SimplexPoint(std::vector<double> coords);

  /// Builds (q_1, ..., q_{n-1}, 1 - sum q_i) from the first n-1 coordinates.
  static SimplexPoint from_leading(std::span<const double> leading);

  /// Divides positive weights by their total.
  static SimplexPoint normalized(std::span<const double> weights);

  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Sum with Neumaier compensation.
double compensated_sum(std::span<const double> v);

}  // namespace fracdir
