#pragma once

#include <optional>

namespace fracdir {

/// Index triple (alpha, beta, delta) of the Prabhakar function
/// E^delta_{alpha,beta}(z) = sum_r Gamma(delta+r) z^r / (r! Gamma(delta) Gamma(alpha r + beta)).
struct PrabhakarParams {
  double alpha = 1;
  double beta = 1;
  double delta = 1;

  void validate() const;
};

struct SeriesSpec {
  double rel_tol = 1e-12;
  int max_terms = 4096;
  /// When set, |z| above this value on the negative axis is evaluated with the
  /// algebraic asymptotic expansion and everything below with the power
  /// series, with no fallback. When empty the evaluation method is chosen per
  /// argument.
  std::optional<double> crossover;

  void validate() const;
};

enum class MlMethod { origin, series, kummer, asymptotic, integral };

const char* to_string(MlMethod m);

/// Result of an evaluation in sign/log-magnitude form, so that values far
/// below the double range (large arguments, large delta) stay usable.
struct MlValue {
  double log_abs = 0;
  int sign = 0;
  int terms = 0;
  MlMethod method = MlMethod::series;

  double value() const;
};

/// Natural log of Gamma(x) for x > 0.
double log_gamma(double x);

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z).
double ml2(double alpha, double beta, double z, const SeriesSpec& spec = {});

/// Three-parameter (Prabhakar) Mittag-Leffler function.
double ml3(const PrabhakarParams& p, double z, const SeriesSpec& spec = {});

/// Same as ml3 but also reports the method and the number of terms or
/// integrand evaluations.
MlValue ml3_eval(const PrabhakarParams& p, double z,
                 const SeriesSpec& spec = {});

/// Forces one evaluation method. Throws EvaluationError when that method
/// cannot deliver rel_tol at this argument.
MlValue ml3_eval_with(const PrabhakarParams& p, double z, MlMethod method,
                      const SeriesSpec& spec = {});

}  // namespace fracdir
