#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracdir/quadrature.hpp"

namespace fracdir {

struct TestResult {
  double statistic = 0;
  double p_value = 1;
};

/// P(K > t) for the Kolmogorov distribution.
double kolmogorov_survival(double t);

/// One-sample Kolmogorov-Smirnov test with the Stephens small-sample
/// correction. The sample is sorted internally.
TestResult ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0;
  double p_value = 1;
  /// Bins after merging neighbours with expected count below 5.
  std::size_t bins_used = 0;
  std::size_t dof = 0;
};

/// Pearson chi-square of observed counts against expected counts (same
/// total). Adjacent bins are merged left to right until each expected count
/// reaches min_expected; dof = bins_used - 1.
ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> expected,
                           double min_expected = 5);

/// Equal-width histogram on [lo, hi]. Values outside are counted in
/// underflow and overflow.
struct Histogram {
  double lo = 0;
  double hi = 1;
  std::vector<double> counts;
  double underflow = 0;
  double overflow = 0;
  std::size_t total = 0;

  Histogram(double lo, double hi, std::size_t bins);
  void add(double x);
  std::size_t bins() const { return counts.size(); }
  double width() const { return (hi - lo) / counts.size(); }
  double edge(std::size_t k) const { return lo + k * width(); }
  double center(std::size_t k) const { return lo + (k + 0.5) * width(); }
  /// counts / (total * width), comparable with a density.
  double density(std::size_t k) const;
};

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Empirical quantile by linear interpolation of the order statistics.
double quantile(std::vector<double> x, double p);

enum class Support { unit_interval, positive };

/// Distribution function built from a density. On [a, b] the density is
/// mapped to u = logit(x) (unit interval) or u = ln x (positive axis) and
/// interpolated cell by cell with degree-16 Chebyshev polynomials, bisecting
/// cells whose trailing coefficients are not negligible; the distribution
/// function is the exact antiderivative of the interpolant. The tabulated
/// range is clipped to u in [-40, 36] (unit interval) or [-40, 60] (positive
/// axis); beyond it each tail continues as a power law with the local
/// log-slope at the boundary.
class TabulatedCdf {
 public:
  TabulatedCdf(std::function<double(double)> pdf, Support support, double a,
               double b, double max_cell = 0.5, const QuadSpec& spec = {});

  double operator()(double x) const;
  /// Mass of the density over its whole support; 1 up to quadrature error.
  double total_mass() const { return total_; }
  std::size_t cells() const { return cells_.size(); }

 private:
  struct Cell {
    double u0, h;
    /// Mass below u0.
    double base;
    /// Chebyshev coefficients of the antiderivative on [u0, u0 + h], zero at u0.
    std::vector<double> coeffs;
  };

  double to_u(double x) const;
  double from_u(double u) const;
  double du_pdf(double u) const;
  void build(double u0, double u1, int depth);

  std::function<double(double)> pdf_;
  Support support_;
  double ua_ = 0, ub_ = 0;
  double xa_ = 0, xb_ = 0;
  std::vector<Cell> cells_;
  double lower_exponent_ = 1;
  double upper_exponent_ = 1;
  double head_ = 0;
  double tail_ = 0;
  double total_ = 1;
};

}  // namespace fracdir
