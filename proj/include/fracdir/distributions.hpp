#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracdir/mlf.hpp"
#include "fracdir/quadrature.hpp"
#include "fracdir/simplex.hpp"

namespace fracdir {

/// Fractional Gamma law FG(rate, shape, order): Laplace transform
/// (rate / (rate + s^order))^shape.
struct FracGammaParams {
  double rate = 1;
  double shape = 1;
  double order = 1;

  void validate() const;
};

/// Fractional Dirichlet law: normalized independent FG(1, shape_i, order).
struct FracDirParams {
  double order = 1;
  std::vector<double> shapes;
  double shape_sum = 0;

  /// Validates and caches the compensated shape sum.
  static FracDirParams make(double order, std::vector<double> shapes);
  void validate() const;
};

/// Generalized Dirichlet law GDIR(order, shapes); order may exceed 1.
struct GdirParams {
  double order = 1;
  std::vector<double> shapes;
  double shape_sum = 0;

  static GdirParams make(double order, std::vector<double> shapes);
  void validate() const;
};

// Fractional Gamma

double frac_gamma_log_pdf(const FracGammaParams& p, double x,
                          const SeriesSpec& spec = {});
double frac_gamma_pdf(const FracGammaParams& p, double x,
                      const SeriesSpec& spec = {});
double frac_gamma_laplace(const FracGammaParams& p, double s);

/// Precomputed log density of FG(1, shape, order) for repeated evaluation.
/// Piecewise Chebyshev interpolation in ln x over the range where the
/// Mittag-Leffler evaluation is expensive; direct evaluation elsewhere.
/// Immutable after construction.
class FracGammaLogPdf {
 public:
  FracGammaLogPdf(double shape, double order);

  double operator()(double x) const;

  /// Shared instance from a process-wide cache.
  static std::shared_ptr<const FracGammaLogPdf> cached(double shape, double order);

 private:
  double log_ml(double u) const;

  double shape_;
  double order_;
  double u_lo_ = 0;
  double u_hi_ = 0;
  double width_ = 0.5;
  int degree_ = 0;
  std::vector<double> coeffs_;
};

// Fractional Dirichlet. Coordinate indices are zero-based.

/// Joint density on the simplex by quadrature of the radial integral.
/// Throws NonConvergenceError when the quadrature misses its tolerance.
double frac_dirichlet_joint_pdf(const FracDirParams& p, const SimplexPoint& q,
                                const QuadSpec& spec = {});

/// Marginal density of coordinate i by quadrature.
double frac_dirichlet_marginal_pdf(const FracDirParams& p, std::size_t i,
                                   double q, const QuadSpec& spec = {});

struct SeriesEvaluation {
  double value = 0;
  int terms = 0;
  /// Decimal digits of the working precision that produced value.
  int digits = 0;
  /// Largest |term| divided by |sum|.
  double cancellation = 0;
};

/// Marginal density of coordinate i from its power-series expansion in
/// (q/(1-q))^order (q < 1/2) or ((1-q)/q)^order (q > 1/2).
SeriesEvaluation frac_dirichlet_marginal_series_eval(const FracDirParams& p,
                                                     std::size_t i, double q,
                                                     const SeriesSpec& spec = {});
double frac_dirichlet_marginal_series(const FracDirParams& p, std::size_t i,
                                      double q, const SeriesSpec& spec = {});

enum class EvalPath { series, quadrature, automatic };

struct MarginalValue {
  double value = 0;
  /// series or quadrature; never automatic.
  EvalPath path = EvalPath::quadrature;
};

/// Marginal density with path selection. automatic uses the series unless
/// |q - 1/2| < 0.02 or the relevant shape is an integer.
MarginalValue frac_dirichlet_marginal(const FracDirParams& p, std::size_t i,
                                      double q, EvalPath path,
                                      const QuadSpec& qspec = {},
                                      const SeriesSpec& sspec = {});

double frac_dirichlet_mean(const FracDirParams& p, std::size_t j);
double frac_dirichlet_variance(const FracDirParams& p, std::size_t j);

// Generalized Dirichlet

double gdir_log_norm_const(const GdirParams& p);
double gdir_log_pdf(const GdirParams& p, const SimplexPoint& q);
double gdir_pdf(const GdirParams& p, const SimplexPoint& q);

/// Density of coordinate 1 for n = 2 as a function of q in (0,1).
double gdir2_marginal_pdf(const GdirParams& p, double q);
/// Distribution function of coordinate 1 for n = 2 (regularized incomplete
/// beta of the transformed coordinate).
double gdir2_marginal_cdf(const GdirParams& p, double q);

/// Law of G^{1/order}, G ~ Gamma(alpha, 1).
double gen_gamma_log_pdf(double alpha, double order, double x);
double gen_gamma_pdf(double alpha, double order, double x);

/// Maps a GDIR(order, beta) point to a Dirichlet(beta) point:
/// M_i = q_i^order / sum_j q_j^order.
SimplexPoint gdir_to_dirichlet(const SimplexPoint& q, double order);
/// Inverse map: Q_i = m_i^{1/order} / sum_j m_j^{1/order}.
SimplexPoint dirichlet_to_gdir(const SimplexPoint& m, double order);

GdirParams gdir_posterior(const GdirParams& prior,
                          std::span<const std::int64_t> counts);

/// Category probabilities p_i = q_i^order / sum_j q_j^order.
std::vector<double> reparam_probs(double order, const SimplexPoint& q);

/// N!/prod x_i! prod p_i^{x_i} with p = reparam_probs(order, q) and
/// N = trials = sum x_i.
double multinomial_reparam_log_pmf(double order, const SimplexPoint& q,
                                   std::span<const std::int64_t> counts,
                                   std::int64_t trials);
double multinomial_reparam_pmf(double order, const SimplexPoint& q,
                               std::span<const std::int64_t> counts,
                               std::int64_t trials);

// Liouville densities

enum class LiouvilleKind { first_to_second, second_to_first };

/// Transforms the generator of a Liouville density between kinds, where c is
/// the sum of the Dirichlet-type exponents.
/// first_to_second: g(h) = (1-h)^{-(c+1)} f(h/(1-h)), h in (0,1).
/// second_to_first: f(t) = (1+t)^{-(c+1)} g(t/(1+t)), t > 0.
double liouville_transform_check(LiouvilleKind kind,
                                 const std::function<double(double)>& generator,
                                 double c, double point);

}  // namespace fracdir
