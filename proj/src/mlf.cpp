#include "fracdir/mlf.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracdir/error.hpp"
#include "fracdir/quadrature.hpp"

namespace fracdir {
namespace {

using real_ext = long double;

constexpr double kPi = std::numbers::pi;
// Series results are trusted while sum|t|/|sum| stays below this.
constexpr double kSeriesAmpAuto = 1e6;
// Cancellation level reported as an evaluation failure.
constexpr double kSeriesAmpFail = 1e8;
// Bound on the ray-integrand growth near the pole image, as ln(amplification).
constexpr double kRayLogAmp = 6.9;

real_ext lgamma_ext(real_ext x) { return boost::math::lgamma(x); }

// 1/Gamma(y) for any real y as (log magnitude, sign); sign 0 at the poles.
std::pair<double, int> log_rgamma(double y) {
  if (y > 0) return {-boost::math::lgamma(y), 1};
  const double n = std::round(y);
  if (std::abs(y - n) <= 1e-12 * std::max(1.0, std::abs(y))) return {0, 0};
  // 1/Gamma(y) = Gamma(1-y) sin(pi y) / pi
  const double s = std::sin(kPi * (y - n)) * ((static_cast<long long>(n) % 2 == 0) ? 1 : -1);
  return {boost::math::lgamma(1 - y) + std::log(std::abs(s)) - std::log(kPi),
          s > 0 ? 1 : -1};
}

MlValue make_value(double log_abs, int sign, int terms, MlMethod m) {
  MlValue v;
  v.log_abs = sign == 0 ? -std::numeric_limits<double>::infinity() : log_abs;
  v.sign = sign;
  v.terms = terms;
  v.method = m;
  return v;
}

struct SeriesOut {
  MlValue value;
  double amplification;
};

// Power series in extended precision with Kahan summation. Terms are kept
// relative to the r = 0 term to avoid overflow.
SeriesOut power_series(const PrabhakarParams& p, double z,
                       const SeriesSpec& spec) {
  const real_ext a = p.alpha;
  const real_ext b = p.beta;
  const real_ext d = p.delta;
  const real_ext lz = std::log(std::abs(static_cast<real_ext>(z)));
  const int zsign = z < 0 ? -1 : 1;

  const real_ext log0 = -lgamma_ext(b);
  real_ext lg_prev = lgamma_ext(b);
  real_ext log_rel = 0;  // log|t_r / t_0|
  real_ext sum = 1, comp = 0, abs_sum = 1;
  int r = 0;
  int small_run = 0;
  for (r = 1; r < spec.max_terms; ++r) {
    const real_ext lg_next = lgamma_ext(a * r + b);
    const real_ext step = std::log(d + r - 1) - std::log(static_cast<real_ext>(r)) +
                          lz - (lg_next - lg_prev);
    lg_prev = lg_next;
    log_rel += step;
    const real_ext mag = std::exp(log_rel);
    const real_ext t = (zsign < 0 && (r % 2)) ? -mag : mag;
    const real_ext y = t - comp;
    const real_ext s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    abs_sum += mag;
    if (mag <= spec.rel_tol * 1e-2 * std::abs(sum) && step < 0) {
      if (++small_run >= 2) break;
    } else {
      small_run = 0;
    }
  }
  const double partial = static_cast<double>(sum * std::exp(log0));
  if (r >= spec.max_terms) {
    throw EvaluationError("Mittag-Leffler series did not converge within max_terms",
                          partial, r);
  }
  SeriesOut out;
  const int sign = sum > 0 ? 1 : (sum < 0 ? -1 : 0);
  out.value = make_value(static_cast<double>(log0 + std::log(std::abs(sum))),
                         sign, r + 1, MlMethod::series);
  out.amplification = sign == 0 ? std::numeric_limits<double>::infinity()
                                : static_cast<double>(abs_sum / std::abs(sum));
  return out;
}

// alpha == 1 on the negative axis: E = e^{-x} sum_r (beta-delta)_r x^r / (r! Gamma(beta+r)).
MlValue kummer_series(const PrabhakarParams& p, double x, const SeriesSpec& spec) {
  const real_ext a = static_cast<real_ext>(p.beta) - p.delta;
  const real_ext b = p.beta;
  const real_ext xe = x;
  const real_ext an = std::round(a);
  const bool finite = an <= 0 && std::abs(a - an) <= 1e-12L * std::max<real_ext>(1, std::abs(a));
  real_ext u = 1, sum = 1, comp = 0, abs_sum = 1;
  int r = 0;
  int small_run = 0;
  for (r = 0; r + 1 < spec.max_terms; ++r) {
    if (finite && r >= -an) break;
    u *= (a + r) * xe / ((r + 1) * (b + r));
    const real_ext y = u - comp;
    const real_ext s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    abs_sum += std::abs(u);
    const bool past_peak = (r + 1) > x + std::abs(a);
    if (std::abs(u) <= spec.rel_tol * 1e-2 * std::abs(sum) && past_peak) {
      if (++small_run >= 2) break;
    } else {
      small_run = 0;
    }
  }
  const real_ext log_scale = -xe - lgamma_ext(b);
  if (!finite && r + 1 >= spec.max_terms) {
    throw EvaluationError("Kummer series did not converge within max_terms",
                          static_cast<double>(sum * std::exp(log_scale)), r + 1);
  }
  if (sum == 0 || abs_sum / std::abs(sum) > kSeriesAmpFail) {
    throw EvaluationError("cancellation in Kummer series",
                          static_cast<double>(sum * std::exp(log_scale)), r + 1);
  }
  return make_value(static_cast<double>(log_scale + std::log(std::abs(sum))),
                    sum > 0 ? 1 : -1, r + 2, MlMethod::kummer);
}

// Algebraic expansion for z = -x, x large. Returns nullopt-like failure
// through ok=false when the smallest term does not reach tolerance.
bool asymptotic(const PrabhakarParams& p, double x, const SeriesSpec& spec,
                MlValue& out) {
  const double lx = std::log(x);
  const double lg_delta = boost::math::lgamma(p.delta);
  // Accumulate sum of c_j relative to a reference log magnitude.
  double ref = std::numeric_limits<double>::quiet_NaN();
  double sum = 0, comp = 0;
  double last_nonzero = std::numeric_limits<double>::infinity();
  double smallest = std::numeric_limits<double>::infinity();
  int j = 0;
  constexpr int kMaxJ = 400;
  for (j = 0; j < kMaxJ; ++j) {
    const auto [lr, sr] = log_rgamma(p.beta - p.alpha * (p.delta + j));
    if (sr == 0) continue;
    const double lc = boost::math::lgamma(p.delta + j) - lg_delta -
                      boost::math::lgamma(j + 1.0) - j * lx + lr;
    if (std::isnan(ref)) ref = lc;
    if (lc > last_nonzero) break;  // terms started to grow
    last_nonzero = lc;
    const double mag = std::exp(lc - ref);
    const int sign = sr * ((j % 2) ? -1 : 1);
    const double t = sign * mag;
    const double y = t - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    smallest = mag;
    if (mag <= spec.rel_tol * 1e-2 * std::abs(sum)) {
      ++j;
      break;
    }
  }
  if (std::isnan(ref) || sum == 0) return false;
  if (!(smallest <= spec.rel_tol * std::abs(sum))) return false;
  out = make_value(-p.delta * lx + ref + std::log(std::abs(sum)),
                   sum > 0 ? 1 : -1, j, MlMethod::asymptotic);
  return true;
}

// Hankel-contour inversion of the Laplace pair
//   E(-x) = (1/2 pi i) int_Ha e^s s^{alpha delta - beta} (s^alpha + x)^{-delta} ds
// on the wedge s = s0 + t e^{+-i phi}, t >= 0. The vertex s0 > 0 is the real
// saddle of the integrand, so its magnitude there sets the scale of the result
// and the quadrature sees little cancellation.
bool contour_integral(const PrabhakarParams& p, double x, const SeriesSpec& spec,
                      MlValue& out) {
  const double a = p.alpha;
  const double d = p.delta;
  const double pw = a * d - p.beta;
  // log|integrand| on the positive axis and its derivative in s.
  auto log_f = [&](double s) {
    return s + pw * std::log(s) - d * std::log(std::pow(s, a) + x);
  };
  auto slope = [&](double s) {
    const double sa = std::pow(s, a);
    return 1 + pw / s - d * a * sa / (s * (sa + x));
  };
  // Vertex at the real saddle; when log|F| increases from the origin the
  // vertex sits at the origin itself.
  double lo = -700, hi = 40;
  double s0 = 0;
  if (slope(std::exp(lo)) < 0 && slope(std::exp(hi)) > 0) {
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope(std::exp(mid)) < 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    s0 = std::exp(0.5 * (lo + hi));
  }
  double phi = 2 * kPi / 3;
  if (a * phi > kPi / 2) {
    phi = std::max(0.55 * kPi, std::min(phi, (kPi - std::asin(std::exp(-kRayLogAmp / d))) / a));
  }
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);

  // log magnitude and phase of F(s) e^{i phi}, magnitude relative to ref.
  double ref = 0;
  auto polar_at = [&](double t) {
    const std::complex<double> s(s0 + t * cphi, t * sphi);
    const double ls = std::log(std::abs(s));
    const double as = std::arg(s);
    const std::complex<double> w = std::polar(std::exp(a * ls), a * as) + x;
    return std::pair{s.real() + pw * ls - d * std::log(std::abs(w)) - ref,
                     s.imag() + pw * as - d * std::arg(w) + phi};
  };
  if (s0 > 0) {
    ref = log_f(s0);
  } else {
    ref = -std::numeric_limits<double>::infinity();
    for (double t = 1e-8; t < 1e4; t *= 1.25) ref = std::max(ref, polar_at(t).first);
  }
  const Integrand f = [&](double t) -> double {
    const auto [lmag, phase] = polar_at(t);
    return std::exp(lmag) * std::sin(phase);
  };
  double t_max = 1;
  while (t_max < 1e7 && polar_at(t_max).first > -60) t_max *= 1.5;

  QuadSpec qs;
  qs.abs_tol = 1e-300;
  qs.rel_tol = std::max(spec.rel_tol, 1e-13);
  qs.max_subdivisions = 400;
  const QuadResult r = integrate_interval(f, 0, t_max, qs);
  // The roundoff flag alone is not a rejection; the error estimate decides.
  if (r.value == 0 || !std::isfinite(r.error_estimate) ||
      r.error_estimate > 10 * qs.rel_tol * std::abs(r.value)) {
    return false;
  }
  out = make_value(ref + std::log(std::abs(r.value)) - std::log(kPi),
                   r.value > 0 ? 1 : -1, static_cast<int>(r.evaluations),
                   MlMethod::integral);
  return true;
}

bool integer_like(double v) {
  return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v));
}

std::string describe(const PrabhakarParams& p, double z) {
  std::ostringstream s;
  s.precision(17);
  s << "(alpha=" << p.alpha << ", beta=" << p.beta << ", delta=" << p.delta
    << ", z=" << z << ")";
  return s.str();
}

MlValue eval_negative_auto(const PrabhakarParams& p, double x,
                           const SeriesSpec& spec) {
  MlValue v;
  if (p.alpha == 1) {
    const double a = p.beta - p.delta;
    if ((a <= 0 && integer_like(a)) || x < 0.7 * spec.max_terms) {
      try {
        return kummer_series(p, x, spec);
      } catch (const EvaluationError&) {
      }
    }
    if (asymptotic(p, x, spec, v)) return v;
    throw EvaluationError("no method converged for " + describe(p, -x), 0, 0);
  }
  if (p.alpha > 1) {
    const SeriesOut s = power_series(p, -x, spec);
    if (s.amplification > kSeriesAmpFail) {
      throw EvaluationError("cancellation in Mittag-Leffler series at " + describe(p, -x),
                            s.value.value(), s.value.terms);
    }
    return s.value;
  }
  const double scale = std::pow(x, 1 / p.alpha);
  const bool asym_allowed = p.alpha * p.delta < p.beta + p.alpha;
  if (asym_allowed && scale >= 8 && asymptotic(p, x, spec, v)) return v;
  std::optional<SeriesOut> series;
  if (scale <= 40) {
    try {
      series = power_series(p, -x, spec);
      if (series->amplification <= kSeriesAmpAuto) return series->value;
    } catch (const EvaluationError&) {
    }
  }
  if (contour_integral(p, x, spec, v)) return v;
  if (series && series->amplification <= kSeriesAmpFail) return series->value;
  if (asym_allowed && asymptotic(p, x, SeriesSpec{std::sqrt(spec.rel_tol), spec.max_terms, {}}, v)) {
    return v;
  }
  throw EvaluationError("no method converged for " + describe(p, -x),
                        series ? series->value.value() : 0.0,
                        series ? series->value.terms : 0);
}

}  // namespace

void PrabhakarParams::validate() const {
  if (!(alpha > 0) || !(beta > 0) || !(delta > 0) || !std::isfinite(alpha) ||
      !std::isfinite(beta) || !std::isfinite(delta)) {
    throw DomainError("Prabhakar parameters must be finite and positive");
  }
}

void SeriesSpec::validate() const {
  if (!(rel_tol > 0 && rel_tol < 1) || max_terms < 16 ||
      (crossover && !(*crossover > 0))) {
    throw DomainError(
        "SeriesSpec requires 0 < rel_tol < 1, max_terms >= 16, crossover > 0");
  }
}

const char* to_string(MlMethod m) {
  switch (m) {
    case MlMethod::origin: return "origin";
    case MlMethod::series: return "series";
    case MlMethod::kummer: return "kummer";
    case MlMethod::asymptotic: return "asymptotic";
    case MlMethod::integral: return "integral";
  }
  return "unknown";
}

double MlValue::value() const {
  return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

double log_gamma(double x) {
  if (!(x > 0) || !std::isfinite(x)) {
    throw DomainError("log_gamma requires a finite positive argument");
  }
  return boost::math::lgamma(x);
}

MlValue ml3_eval(const PrabhakarParams& p, double z, const SeriesSpec& spec) {
  p.validate();
  spec.validate();
  if (!std::isfinite(z)) throw DomainError("Mittag-Leffler argument must be finite");
  if (z == 0) {
    return make_value(-boost::math::lgamma(p.beta), 1, 1, MlMethod::origin);
  }
  if (z > 0) return power_series(p, z, spec).value;
  const double x = -z;
  if (spec.crossover) {
    if (x > *spec.crossover) return ml3_eval_with(p, z, MlMethod::asymptotic, spec);
    return ml3_eval_with(p, z, MlMethod::series, spec);
  }
  return eval_negative_auto(p, x, spec);
}

MlValue ml3_eval_with(const PrabhakarParams& p, double z, MlMethod method,
                      const SeriesSpec& spec) {
  p.validate();
  spec.validate();
  if (!std::isfinite(z)) throw DomainError("Mittag-Leffler argument must be finite");
  if (z == 0 || method == MlMethod::origin) {
    if (z != 0) throw DomainError("origin method requires z = 0");
    return make_value(-boost::math::lgamma(p.beta), 1, 1, MlMethod::origin);
  }
  const double x = -z;
  MlValue v;
  switch (method) {
    case MlMethod::series: {
      const SeriesOut s = power_series(p, z, spec);
      if (s.amplification > kSeriesAmpFail) {
        throw EvaluationError("cancellation in Mittag-Leffler series at " + describe(p, z),
                              s.value.value(), s.value.terms);
      }
      return s.value;
    }
    case MlMethod::kummer:
      if (p.alpha != 1 || z > 0) throw DomainError("Kummer form needs alpha = 1, z < 0");
      return kummer_series(p, x, spec);
    case MlMethod::asymptotic:
      if (z > 0 || p.alpha > 1) {
        throw DomainError("asymptotic form needs z < 0 and alpha <= 1");
      }
      if (!(p.alpha * p.delta < p.beta + p.alpha)) {
        throw DomainError("asymptotic form needs alpha*delta < beta + alpha");
      }
      if (!asymptotic(p, x, spec, v)) {
        throw EvaluationError("asymptotic expansion did not reach tolerance at " +
                                  describe(p, z),
                              0, 0);
      }
      return v;
    case MlMethod::integral:
      if (z > 0 || p.alpha >= 1) throw DomainError("ray integral needs z < 0 and alpha < 1");
      if (!contour_integral(p, x, spec, v)) {
        throw EvaluationError("ray integral did not converge at " + describe(p, z), 0, 0);
      }
      return v;
    case MlMethod::origin:
      break;
  }
  throw DomainError("unknown Mittag-Leffler method");
}

double ml3(const PrabhakarParams& p, double z, const SeriesSpec& spec) {
  return ml3_eval(p, z, spec).value();
}

double ml2(double alpha, double beta, double z, const SeriesSpec& spec) {
  return ml3(PrabhakarParams{alpha, beta, 1.0}, z, spec);
}

}  // namespace fracdir
