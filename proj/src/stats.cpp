#include "fracdir/stats.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "fracdir/error.hpp"
#include "fracdir/simplex.hpp"

namespace fracdir {
namespace {

double stephens_p(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

double kolmogorov_survival(double t) {
  if (!(t > 0)) return 1.0;
  if (t < 1.18) {
    // 1 - sqrt(2 pi)/t sum exp(-(2k-1)^2 pi^2 / (8 t^2))
    const double c = std::numbers::pi * std::numbers::pi / (8 * t * t);
    double s = 0;
    for (int k = 1; k <= 20; ++k) s += std::exp(-(2 * k - 1) * (2 * k - 1) * c);
    return std::clamp(1 - std::sqrt(2 * std::numbers::pi) / t * s, 0.0, 1.0);
  }
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 1 : -1) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(2 * s, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS test needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, stephens_p(d, n)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, stephens_p(d, na * nb / (na + nb))};
}

ChiSquareResult chi_square(std::span<const double> observed,
                           std::span<const double> expected,
                           double min_expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw DomainError("chi-square needs matching observed/expected with at least 2 bins");
  }
  std::vector<double> obs, exp;
  double o_acc = 0, e_acc = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] >= 0)) throw DomainError("expected counts must be nonnegative");
    o_acc += observed[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0;
    }
  }
  if (e_acc > 0 || o_acc > 0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  ChiSquareResult r;
  r.bins_used = obs.size();
  if (r.bins_used < 2) throw DomainError("fewer than 2 bins left after merging");
  r.dof = r.bins_used - 1;
  double stat = 0;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const double diff = obs[k] - exp[k];
    stat += diff * diff / exp[k];
  }
  r.statistic = stat;
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * stat);
  return r;
}

Histogram::Histogram(double lo_, double hi_, std::size_t bins)
    : lo(lo_), hi(hi_), counts(bins, 0.0) {
  if (!(hi > lo) || bins < 1) throw DomainError("histogram needs hi > lo and bins >= 1");
}

void Histogram::add(double x) {
  ++total;
  if (x < lo) {
    ++underflow;
  } else if (x > hi) {
    ++overflow;
  } else {
    auto k = static_cast<std::size_t>((x - lo) / width());
    counts[std::min(k, counts.size() - 1)] += 1;
  }
}

double Histogram::density(std::size_t k) const {
  return total == 0 ? 0.0 : counts[k] / (static_cast<double>(total) * width());
}

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sample");
  return compensated_sum(x) / x.size();
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance needs at least two values");
  const double m = mean(x);
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - m) * (x[i] - m);
  return compensated_sum(d) / (x.size() - 1);
}

double quantile(std::vector<double> x, double p) {
  if (x.empty() || !(p >= 0 && p <= 1)) throw DomainError("quantile needs data and p in [0,1]");
  std::sort(x.begin(), x.end());
  const double pos = p * (x.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= x.size()) return x.back();
  return x[i] + (pos - i) * (x[i + 1] - x[i]);
}

namespace {

constexpr int kChebDegree = 16;

// Clenshaw evaluation of sum c_k T_k(s).
double chebyshev_sum(const std::vector<double>& c, double s) {
  double b1 = 0, b2 = 0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2 * s * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return s * b1 - b2 + c[0];
}

}  // namespace

TabulatedCdf::TabulatedCdf(std::function<double(double)> pdf, Support support,
                           double a, double b, double max_cell, const QuadSpec& spec)
    : pdf_(std::move(pdf)), support_(support) {
  const bool unit = support == Support::unit_interval;
  if (!(a > 0) || !(b >= a) || (unit && !(b < 1)) || !(max_cell > 0)) {
    throw DomainError("tabulated distribution function needs 0 < a <= b inside the support");
  }
  ua_ = std::max(to_u(a), -40.0);
  ub_ = std::min(to_u(b), unit ? 36.0 : 60.0);
  if (!(ub_ > ua_)) ub_ = ua_ + max_cell;
  xa_ = from_u(ua_);
  xb_ = from_u(ub_);
  auto check = [](const QuadResult& r) {
    if (!r.converged) {
      throw NonConvergenceError("distribution function quadrature did not converge", r.value,
                                r.error_estimate);
    }
    return r.value;
  };
  head_ = check(integrate_interval(pdf_, 0, xa_, spec));
  const auto n = static_cast<std::size_t>(std::ceil((ub_ - ua_) / max_cell));
  const double h = (ub_ - ua_) / n;
  for (std::size_t k = 0; k < n; ++k) build(ua_ + k * h, k + 1 == n ? ub_ : ua_ + (k + 1) * h, 0);
  double acc = head_;
  for (Cell& c : cells_) {
    c.base = acc;
    acc += chebyshev_sum(c.coeffs, 1.0);
  }
  if (unit) {
    tail_ = check(integrate_interval(pdf_, xb_, 1, spec));
  } else {
    tail_ = check(integrate_semi_infinite([this](double y) { return xb_ * pdf_(xb_ * (1 + y)); }, spec));
  }
  total_ = acc + tail_;
  // d ln F / d ln x at the lower end; d ln(1-F) / d ln(1-x) or -d ln(1-F) / d ln x
  // at the upper end.
  if (head_ > 0) lower_exponent_ = xa_ * pdf_(xa_) / head_;
  if (tail_ > 0) upper_exponent_ = (unit ? 1 / (1 + std::exp(ub_)) : xb_) * pdf_(xb_) / tail_;
}

void TabulatedCdf::build(double u0, double u1, int depth) {
  constexpr int n = kChebDegree;
  std::array<double, n + 1> f;
  const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
  for (int j = 0; j <= n; ++j) f[j] = du_pdf(mid + half * std::cos(std::numbers::pi * j / n));
  // Coefficients of the interpolant through the Chebyshev-Lobatto points.
  std::vector<double> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    double s = 0.5 * (f[0] + (k % 2 ? -f[n] : f[n]));
    for (int j = 1; j < n; ++j) s += f[j] * std::cos(std::numbers::pi * j * k / n);
    c[k] = 2.0 / n * s * (k == 0 || k == n ? 0.5 : 1.0);
  }
  double scale = 0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  const double trailing = std::abs(c[n]) + std::abs(c[n - 1]);
  if (depth < 10 && trailing * half > std::max(1e-13 * scale * half, 1e-16)) {
    build(u0, mid, depth + 1);
    build(mid, u1, depth + 1);
    return;
  }
  // Antiderivative in s on [-1, 1]: int T_0 = T_1, int T_1 = T_2 / 4,
  // int T_k = T_{k+1} / (2(k+1)) - T_{k-1} / (2(k-1)).
  std::vector<double> b(n + 2, 0.0);
  b[1] += c[0];
  b[2] += c[1] / 4;
  for (int k = 2; k <= n; ++k) {
    b[k + 1] += c[k] / (2.0 * (k + 1));
    b[k - 1] -= c[k] / (2.0 * (k - 1));
  }
  double at_left = 0;
  for (int j = 0; j <= n + 1; ++j) at_left += (j % 2 ? -b[j] : b[j]);
  b[0] -= at_left;
  for (double& v : b) v *= half;
  cells_.push_back({u0, u1 - u0, 0, std::move(b)});
}

double TabulatedCdf::to_u(double x) const {
  return support_ == Support::unit_interval ? std::log(x) - std::log1p(-x) : std::log(x);
}

double TabulatedCdf::from_u(double u) const {
  return support_ == Support::unit_interval ? 1 / (1 + std::exp(-u)) : std::exp(u);
}

double TabulatedCdf::du_pdf(double u) const {
  const double x = from_u(u);
  const double jac = support_ == Support::unit_interval ? x / (1 + std::exp(u)) : x;
  return pdf_(x) * jac;
}

double TabulatedCdf::operator()(double x) const {
  if (!(x > 0)) return 0.0;
  const bool unit = support_ == Support::unit_interval;
  if (unit && x >= 1) return total_;
  if (x <= xa_) return head_ * std::pow(x / xa_, lower_exponent_);
  if (x >= xb_) {
    const double ratio = unit ? (1 - x) * (1 + std::exp(ub_)) : xb_ / x;
    return total_ - tail_ * std::pow(ratio, upper_exponent_);
  }
  const double u = to_u(x);
  auto it = std::upper_bound(cells_.begin(), cells_.end(), u,
                             [](double v, const Cell& c) { return v < c.u0; });
  const Cell& c = *std::prev(it == cells_.begin() ? std::next(it) : it);
  const double s = std::clamp(2 * (u - c.u0) / c.h - 1, -1.0, 1.0);
  return c.base + chebyshev_sum(c.coeffs, s);
}

}  // namespace fracdir
