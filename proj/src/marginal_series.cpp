// Power-series evaluation of the fractional Dirichlet marginal density.
//
// With a = beta_i, b = shape_sum - beta_i, rho = (q/(1-q))^nu and q < 1/2:
//
//   f(q) = q^{nu a - 1} (1-q)^{-(nu a + 1)}
//          * [ sum_{k>=0} C_k sin(pi nu (a+k)) / sin(pi a) rho^k
//            - sum_{k>=1} (-1)^k E_k sin(pi nu k) / pi rho^{k-a} ]
//
//   C_k = Gamma(a+b+k) / (k! Gamma(a) Gamma(b)),  E_k = Gamma(a-k) Gamma(b+k) / (Gamma(a) Gamma(b)).
//
// For q > 1/2 the roles of (a, q) and (b, 1-q) are exchanged. The two sums
// cancel heavily when a + b is large, so the sum is re-evaluated in wider
// floating point types until the observed cancellation fits the precision.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdir/distributions.hpp"
#include "fracdir/error.hpp"

namespace fracdir {
namespace {

namespace mp = boost::multiprecision;

using std::abs;
using std::exp;
using std::log;
using std::pow;
using std::round;
using std::sin;

template <class T>
struct Partial {
  T sum = 0;
  T max_term = 0;
  int terms = 0;
  bool converged = false;
};

// sin(pi v) with exact argument reduction; integers give exactly zero.
template <class T>
T sin_pi(const T& v) {
  const T n = round(v);
  const T f = v - n;
  if (f == 0) return T(0);
  T s = sin(boost::math::constants::pi<T>() * f);
  // (-1)^n
  const T half = n / 2;
  if (half != round(half)) s = -s;
  return s;
}

template <class T>
Partial<T> series_sum(double nu_d, double a_d, double b_d, double q_d, double qc_d,
                      double rel_tol, int max_terms) {
  const T nu = nu_d;
  const T a = a_d;
  const T b = b_d;
  const T bb = a + b;
  const T rho = pow(T(q_d) / T(qc_d), nu);
  const T rho_neg_a = pow(rho, -a);
  const T pi = boost::math::constants::pi<T>();
  const T sin_a = sin_pi(a);

  using boost::math::lgamma;
  T c = exp(lgamma(bb) - lgamma(a) - lgamma(b));  // C_0
  T e = 1;                                        // E_0
  T rk = 1;                                       // rho^k

  Partial<T> out;
  out.sum = c * sin_pi(T(nu * a)) / sin_a;
  out.max_term = abs(out.sum);
  T prev_env = std::numeric_limits<double>::infinity();
  int quiet = 0;
  for (int k = 1; k < max_terms; ++k) {
    c *= (bb + (k - 1)) / k;
    e *= (b + (k - 1)) / (a - k);
    rk *= rho;
    const T t1 = c * sin_pi(T(nu * (a + k))) / sin_a * rk;
    T t2 = e * sin_pi(T(nu * k)) / pi * rk * rho_neg_a;
    if (k % 2 == 1) t2 = -t2;
    const T term = t1 - t2;
    out.sum += term;
    out.max_term = std::max(out.max_term, std::max(abs(t1), abs(t2)));
    out.terms = k + 1;
    const T env = c * rk / abs(sin_a) + abs(e) * rk * rho_neg_a / pi;
    if (env <= rel_tol * 1e-2 * abs(out.sum) && env < prev_env) {
      if (++quiet >= 3) {
        out.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
    prev_env = env;
  }
  return out;
}

using Float50 = mp::cpp_bin_float_50;
using Float100 = mp::cpp_bin_float_100;

}  // namespace

SeriesEvaluation frac_dirichlet_marginal_series_eval(const FracDirParams& p, std::size_t i,
                                                     double q, const SeriesSpec& spec) {
  p.validate();
  spec.validate();
  if (i >= p.shapes.size()) throw DomainError("coordinate index out of range");
  if (!(q > 0 && q < 1)) throw DomainError("marginal argument must lie in (0,1)");
  if (q == 0.5) {
    throw UnsupportedParameterError(
        "series expansion does not cover q = 1/2; use frac_dirichlet_marginal_pdf");
  }
  if (p.order == 1) {
    throw UnsupportedParameterError(
        "series expansion needs order < 1; use frac_dirichlet_marginal_pdf");
  }
  const bool lower = q < 0.5;
  const double a = lower ? p.shapes[i] : p.shape_sum - p.shapes[i];
  const double b = lower ? p.shape_sum - p.shapes[i] : p.shapes[i];
  const double x = lower ? q : 1 - q;
  const double xc = lower ? 1 - q : q;
  if (std::abs(a - std::round(a)) <= 1e-12 * std::max(1.0, a)) {
    throw UnsupportedParameterError(
        "series expansion needs a non-integer shape on this side of 1/2; use "
        "frac_dirichlet_marginal_pdf");
  }

  const double nu = p.order;
  const double log_pref = (nu * a - 1) * std::log(x) - (nu * a + 1) * std::log(xc);

  // A working precision of `digits` decimal digits is accepted when the
  // observed cancellation leaves at least 14 of them.
  auto accept = [](double cancellation, int digits) {
    return std::isfinite(cancellation) && std::log10(std::max(cancellation, 1.0)) <= digits - 14;
  };

  SeriesEvaluation out;
  const auto d = series_sum<double>(nu, a, b, x, xc, spec.rel_tol, spec.max_terms);
  auto finish = [&](double sum, double max_term, int terms, bool converged, int digits) {
    out.cancellation = sum != 0 ? max_term / std::abs(sum)
                                : std::numeric_limits<double>::infinity();
    out.terms = terms;
    out.digits = digits;
    out.value = sum * std::exp(log_pref);
    if (!converged) {
      std::ostringstream msg;
      msg << "marginal series did not converge within " << spec.max_terms
          << " terms at q = " << q;
      throw NonConvergenceError(msg.str(), out.value, std::numeric_limits<double>::infinity());
    }
  };
  finish(d.sum, d.max_term, d.terms, d.converged, 16);
  if (accept(out.cancellation, 16)) return out;

  const auto m50 = series_sum<Float50>(nu, a, b, x, xc, spec.rel_tol, spec.max_terms);
  finish(static_cast<double>(m50.sum), static_cast<double>(m50.max_term), m50.terms,
         m50.converged, 50);
  if (accept(out.cancellation, 50)) return out;

  const auto m100 = series_sum<Float100>(nu, a, b, x, xc, spec.rel_tol, spec.max_terms);
  finish(static_cast<double>(m100.sum), static_cast<double>(m100.max_term), m100.terms,
         m100.converged, 100);
  if (accept(out.cancellation, 100)) return out;

  std::ostringstream msg;
  msg << "marginal series cancellation " << out.cancellation << " exceeds working precision at q = "
      << q;
  throw NonConvergenceError(msg.str(), out.value, out.value * out.cancellation * 1e-100);
}

double frac_dirichlet_marginal_series(const FracDirParams& p, std::size_t i, double q,
                                      const SeriesSpec& spec) {
  return frac_dirichlet_marginal_series_eval(p, i, q, spec).value;
}

}  // namespace fracdir
