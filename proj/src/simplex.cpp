#include "fracdir/simplex.hpp"

#include <cmath>

#include "fracdir/error.hpp"

namespace fracdir {

double compensated_sum(std::span<const double> v) {
  double sum = 0;
  double c = 0;
  for (double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw DomainError("simplex point needs at least 2 coordinates");
  for (double c : coords_) {
    // A coordinate may round to exactly 1 when all others are below 1e-16.
    if (!(c > 0 && c <= 1)) throw DomainError("simplex coordinates must lie in (0,1]");
  }
  if (std::abs(compensated_sum(coords_) - 1) > kSumTolerance) {
    throw DomainError("simplex coordinates must sum to 1");
  }
}

SimplexPoint SimplexPoint::from_leading(std::span<const double> leading) {
  std::vector<double> c(leading.begin(), leading.end());
  c.push_back(1 - compensated_sum(leading));
  return SimplexPoint(std::move(c));
}

SimplexPoint SimplexPoint::normalized(std::span<const double> weights) {
  const double total = compensated_sum(weights);
  if (!(total > 0) || !std::isfinite(total)) {
    throw DomainError("cannot normalize weights onto the simplex");
  }
  std::vector<double> c(weights.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = weights[i] / total;
  return SimplexPoint(std::move(c));
}

}  // namespace fracdir
