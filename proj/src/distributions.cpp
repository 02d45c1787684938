#include "fracdir/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fracdir/error.hpp"

namespace fracdir {
namespace {

bool is_integer(double v) {
  return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v));
}

void check_shapes(const std::vector<double>& shapes) {
  if (shapes.size() < 2) throw DomainError("at least two shape parameters are required");
  for (double b : shapes) {
    if (!(b > 0) || !std::isfinite(b)) throw DomainError("shape parameters must be positive");
  }
}

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw DomainError("coordinate index out of range");
}

// Integral over y > 0 of y^{n-1} prod_i g_i(y q_i), g_i the FG(1, beta_i, nu)
// density, taken in u = ln y. The integrand decays like exp(nu*shape_sum*u)
// as u -> -inf and like exp(-n*nu*u) as u -> inf; its structure sits near
// y q_i = 1 and near the typical size shape_sum^{1/nu} of the FG sum, which
// become the breakpoints.
double radial_integral(double nu, std::span<const double> shapes,
                       std::span<const double> q, double shape_sum,
                       const QuadSpec& spec) {
  const std::size_t n = shapes.size();
  std::vector<double> log_q(n);
  for (std::size_t i = 0; i < n; ++i) log_q[i] = std::log(q[i]);
  std::vector<std::shared_ptr<const FracGammaLogPdf>> fg(n);
  for (std::size_t i = 0; i < n; ++i) fg[i] = FracGammaLogPdf::cached(shapes[i], nu);

  const Integrand f = [&](double u) -> double {
    double acc = n * u;
    for (std::size_t i = 0; i < n; ++i) {
      acc += (*fg[i])(std::exp(u + log_q[i]));
      if (acc < -745) return 0.0;
    }
    return std::exp(acc);
  };

  std::vector<double> knots;
  for (double lq : log_q) knots.push_back(-lq);
  knots.push_back(std::log(shape_sum) / nu);
  std::sort(knots.begin(), knots.end());
  constexpr double kDecay = 46;  // e^-46 ~ 1e-20
  knots.insert(knots.begin(), knots.front() - kDecay / (nu * shape_sum));
  knots.push_back(knots.back() + kDecay / (n * nu));

  double value = 0, error = 0;
  bool converged = true;
  QuadSpec seg = spec;
  seg.abs_tol = spec.abs_tol / (knots.size() - 1);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (!(knots[k + 1] > knots[k])) continue;
    const QuadResult r = integrate_interval(f, knots[k], knots[k + 1], seg);
    value += r.value;
    error += r.error_estimate;
    converged = converged && r.converged;
  }
  if (!converged && error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    std::ostringstream msg;
    msg << "radial quadrature did not converge (estimate " << value << ", error " << error
        << ")";
    throw NonConvergenceError(msg.str(), value, error);
  }
  return value;
}

}  // namespace

void FracGammaParams::validate() const {
  if (!(rate > 0) || !(shape > 0) || !(order > 0 && order <= 1) ||
      !std::isfinite(rate) || !std::isfinite(shape)) {
    throw DomainError("fractional Gamma needs rate > 0, shape > 0, 0 < order <= 1");
  }
}

FracDirParams FracDirParams::make(double order, std::vector<double> shapes) {
  FracDirParams p;
  p.order = order;
  p.shapes = std::move(shapes);
  check_shapes(p.shapes);
  p.shape_sum = compensated_sum(p.shapes);
  p.validate();
  return p;
}

void FracDirParams::validate() const {
  check_shapes(shapes);
  if (!(order > 0 && order <= 1)) throw DomainError("fractional Dirichlet order must lie in (0,1]");
  if (shape_sum != compensated_sum(shapes)) throw DomainError("shape_sum is stale");
}

GdirParams GdirParams::make(double order, std::vector<double> shapes) {
  GdirParams p;
  p.order = order;
  p.shapes = std::move(shapes);
  check_shapes(p.shapes);
  p.shape_sum = compensated_sum(p.shapes);
  p.validate();
  return p;
}

void GdirParams::validate() const {
  check_shapes(shapes);
  if (!(order > 0) || !std::isfinite(order)) throw DomainError("GDIR order must be positive");
  if (shape_sum != compensated_sum(shapes)) throw DomainError("shape_sum is stale");
}

// ---------------------------------------------------------------------------
// Fractional Gamma

double frac_gamma_log_pdf(const FracGammaParams& p, double x, const SeriesSpec& spec) {
  p.validate();
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("fractional Gamma density needs x > 0");
  const double nu = p.order;
  const double lx = std::log(x);
  const double z = -p.rate * std::exp(nu * lx);
  const MlValue e = ml3_eval(PrabhakarParams{nu, nu * p.shape, p.shape}, z, spec);
  if (e.sign <= 0) {
    // Non-positive values only arise from rounding in deep tails.
    return -std::numeric_limits<double>::infinity();
  }
  return p.shape * std::log(p.rate) + (nu * p.shape - 1) * lx + e.log_abs;
}

double frac_gamma_pdf(const FracGammaParams& p, double x, const SeriesSpec& spec) {
  return std::exp(frac_gamma_log_pdf(p, x, spec));
}

namespace {

constexpr int kChebDegree = 20;

double log_ml_direct(double shape, double order, double u) {
  const MlValue e = ml3_eval(PrabhakarParams{order, order * shape, shape}, -std::exp(order * u));
  return e.sign > 0 ? e.log_abs : -std::numeric_limits<double>::infinity();
}

}  // namespace

FracGammaLogPdf::FracGammaLogPdf(double shape, double order)
    : shape_(shape), order_(order) {
  FracGammaParams{1.0, shape, order}.validate();
  if (order == 1) return;
  // Table from ln x = -20 up to where the algebraic expansion takes over.
  u_lo_ = -20;
  u_hi_ = u_lo_;
  constexpr double kUMax = 60;
  degree_ = kChebDegree;
  const int m = degree_ + 1;
  std::vector<double> f(m);
  int asymptotic_run = 0;
  while (u_hi_ < kUMax && asymptotic_run < 2) {
    const double c = u_hi_ + 0.5 * width_;
    bool all_asym = true;
    for (int k = 0; k < m; ++k) {
      const double t = std::cos(std::numbers::pi * (k + 0.5) / m);
      const double u = c + 0.5 * width_ * t;
      const MlValue e = ml3_eval(PrabhakarParams{order, order * shape, shape}, -std::exp(order * u));
      if (e.sign <= 0) throw EvaluationError("non-positive Mittag-Leffler value in density table", e.value(), e.terms);
      f[k] = e.log_abs;
      all_asym = all_asym && e.method == MlMethod::asymptotic;
    }
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (int k = 0; k < m; ++k) {
        s += f[k] * std::cos(std::numbers::pi * j * (k + 0.5) / m);
      }
      coeffs_.push_back((j == 0 ? 1.0 : 2.0) * s / m);
    }
    u_hi_ += width_;
    asymptotic_run = all_asym ? asymptotic_run + 1 : 0;
  }
}

double FracGammaLogPdf::log_ml(double u) const {
  if (order_ == 1 || u < u_lo_ || u >= u_hi_) return log_ml_direct(shape_, order_, u);
  const int m = degree_ + 1;
  const auto idx = static_cast<std::size_t>((u - u_lo_) / width_);
  const double c = u_lo_ + (idx + 0.5) * width_;
  const double t = (u - c) / (0.5 * width_);
  const double* a = coeffs_.data() + idx * m;
  // Clenshaw recurrence
  double b1 = 0, b2 = 0;
  for (int j = m - 1; j >= 1; --j) {
    const double b0 = 2 * t * b1 - b2 + a[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + a[0];
}

double FracGammaLogPdf::operator()(double x) const {
  if (!(x > 0)) throw DomainError("fractional Gamma density needs x > 0");
  const double u = std::log(x);
  if (order_ == 1) return (shape_ - 1) * u - x - boost::math::lgamma(shape_);
  return (order_ * shape_ - 1) * u + log_ml(u);
}

std::shared_ptr<const FracGammaLogPdf> FracGammaLogPdf::cached(double shape, double order) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::shared_ptr<const FracGammaLogPdf>> cache;
  const auto key = std::make_pair(shape, order);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto made = std::make_shared<const FracGammaLogPdf>(shape, order);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() >= 256) cache.clear();
  return cache.emplace(key, std::move(made)).first->second;
}

double frac_gamma_laplace(const FracGammaParams& p, double s) {
  p.validate();
  if (!(s >= 0)) throw DomainError("Laplace variable must be nonnegative");
  if (s == 0) return 1.0;
  return std::pow(p.rate / (p.rate + std::pow(s, p.order)), p.shape);
}

// ---------------------------------------------------------------------------
// Fractional Dirichlet densities

double frac_dirichlet_joint_pdf(const FracDirParams& p, const SimplexPoint& q,
                                const QuadSpec& spec) {
  p.validate();
  if (q.size() != p.shapes.size()) throw DomainError("point dimension does not match shapes");
  for (double c : q.coords()) {
    if (!(c < 1)) throw DomainError("point must be strictly interior");
  }
  return radial_integral(p.order, p.shapes, q.coords(), p.shape_sum, spec);
}

double frac_dirichlet_marginal_pdf(const FracDirParams& p, std::size_t i, double q,
                                   const QuadSpec& spec) {
  p.validate();
  check_index(i, p.shapes.size());
  if (!(q > 0 && q < 1)) throw DomainError("marginal argument must lie in (0,1)");
  // The aggregated complement is FG(1, shape_sum - beta_i, nu).
  const double rest = p.shape_sum - p.shapes[i];
  const double shapes[2] = {p.shapes[i], rest};
  const double point[2] = {q, 1 - q};
  return radial_integral(p.order, shapes, point, p.shape_sum, spec);
}

double frac_dirichlet_mean(const FracDirParams& p, std::size_t j) {
  p.validate();
  check_index(j, p.shapes.size());
  return p.shapes[j] / p.shape_sum;
}

double frac_dirichlet_variance(const FracDirParams& p, std::size_t j) {
  p.validate();
  check_index(j, p.shapes.size());
  const double b = p.shapes[j];
  const double s = p.shape_sum;
  return b * (s - b) / (s * s * (s + 1)) * (1 + s * (1 - p.order));
}

MarginalValue frac_dirichlet_marginal(const FracDirParams& p, std::size_t i, double q,
                                      EvalPath path, const QuadSpec& qspec,
                                      const SeriesSpec& sspec) {
  p.validate();
  check_index(i, p.shapes.size());
  if (path == EvalPath::automatic) {
    const double shape = q < 0.5 ? p.shapes[i] : p.shape_sum - p.shapes[i];
    const bool series_ok = std::abs(q - 0.5) >= 0.02 && !is_integer(shape) && p.order < 1;
    path = series_ok ? EvalPath::series : EvalPath::quadrature;
    if (series_ok) {
      try {
        return {frac_dirichlet_marginal_series(p, i, q, sspec), EvalPath::series};
      } catch (const NonConvergenceError&) {
        path = EvalPath::quadrature;
      }
    }
  }
  if (path == EvalPath::series) {
    return {frac_dirichlet_marginal_series(p, i, q, sspec), EvalPath::series};
  }
  return {frac_dirichlet_marginal_pdf(p, i, q, qspec), EvalPath::quadrature};
}

// ---------------------------------------------------------------------------
// Generalized Dirichlet

double gdir_log_norm_const(const GdirParams& p) {
  p.validate();
  double s = (p.shapes.size() - 1) * std::log(p.order) + boost::math::lgamma(p.shape_sum);
  for (double b : p.shapes) s -= boost::math::lgamma(b);
  return s;
}

double gdir_log_pdf(const GdirParams& p, const SimplexPoint& q) {
  p.validate();
  if (q.size() != p.shapes.size()) throw DomainError("point dimension does not match shapes");
  const double nu = p.order;
  std::vector<double> lq(q.size());
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] < 1)) throw DomainError("point must be strictly interior");
    lq[i] = std::log(q[i]);
    lmax = std::max(lmax, nu * lq[i]);
  }
  // log sum q_i^nu with the largest term factored out.
  double acc = 0;
  for (double l : lq) acc += std::exp(nu * l - lmax);
  const double log_power_sum = lmax + std::log(acc);
  double s = gdir_log_norm_const(p) - p.shape_sum * log_power_sum;
  for (std::size_t i = 0; i < q.size(); ++i) s += (nu * p.shapes[i] - 1) * lq[i];
  return s;
}

double gdir_pdf(const GdirParams& p, const SimplexPoint& q) {
  return std::exp(gdir_log_pdf(p, q));
}

double gdir2_marginal_pdf(const GdirParams& p, double q) {
  if (p.shapes.size() != 2) throw DomainError("two-coordinate GDIR required");
  if (!(q > 0 && q < 1)) throw DomainError("marginal argument must lie in (0,1)");
  return gdir_pdf(p, SimplexPoint({q, 1 - q}));
}

double gdir2_marginal_cdf(const GdirParams& p, double q) {
  p.validate();
  if (p.shapes.size() != 2) throw DomainError("two-coordinate GDIR required");
  if (q <= 0) return 0;
  if (q >= 1) return 1;
  // M = q^nu / (q^nu + (1-q)^nu) = 1 / (1 + ((1-q)/q)^nu) is Beta(beta_1, beta_2).
  const double t = std::exp(p.order * (std::log1p(-q) - std::log(q)));
  const double m = 1 / (1 + t);
  const double mc = t / (1 + t);
  if (m <= 0.5) return boost::math::ibeta(p.shapes[0], p.shapes[1], m);
  return boost::math::ibetac(p.shapes[1], p.shapes[0], mc);
}

double gen_gamma_log_pdf(double alpha, double order, double x) {
  if (!(alpha > 0) || !(order > 0)) throw DomainError("generalized Gamma needs alpha, order > 0");
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("generalized Gamma density needs x > 0");
  const double lx = std::log(x);
  return std::log(order) + (order * alpha - 1) * lx - std::exp(order * lx) -
         boost::math::lgamma(alpha);
}

double gen_gamma_pdf(double alpha, double order, double x) {
  return std::exp(gen_gamma_log_pdf(alpha, order, x));
}

namespace {

SimplexPoint power_normalize(const SimplexPoint& q, double power) {
  if (!(power > 0) || !std::isfinite(power)) throw DomainError("order must be positive");
  const std::size_t n = q.size();
  std::vector<double> l(n);
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(q[i] > 0)) throw DomainError("point must be strictly interior");
    l[i] = power * std::log(q[i]);
    lmax = std::max(lmax, l[i]);
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(l[i] - lmax);
  const double total = compensated_sum(w);
  for (double& v : w) v = std::clamp(v / total, std::numeric_limits<double>::denorm_min(), kBelowOne);
  return SimplexPoint(std::move(w));
}

}  // namespace

SimplexPoint gdir_to_dirichlet(const SimplexPoint& q, double order) {
  return power_normalize(q, order);
}

SimplexPoint dirichlet_to_gdir(const SimplexPoint& m, double order) {
  if (!(order > 0)) throw DomainError("order must be positive");
  return power_normalize(m, 1 / order);
}

GdirParams gdir_posterior(const GdirParams& prior, std::span<const std::int64_t> counts) {
  prior.validate();
  if (counts.size() != prior.shapes.size()) throw DomainError("counts length does not match shapes");
  std::vector<double> shapes = prior.shapes;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw DomainError("counts must be nonnegative");
    shapes[i] += static_cast<double>(counts[i]);
  }
  return GdirParams::make(prior.order, std::move(shapes));
}

std::vector<double> reparam_probs(double order, const SimplexPoint& q) {
  return gdir_to_dirichlet(q, order).coords();
}

double multinomial_reparam_log_pmf(double order, const SimplexPoint& q,
                                   std::span<const std::int64_t> counts,
                                   std::int64_t trials) {
  if (counts.size() != q.size()) throw DomainError("counts length does not match point");
  if (trials < 1) throw DomainError("trials must be positive");
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0 || c > trials) throw DomainError("counts must lie in {0..trials}");
    total += c;
  }
  if (total != trials) throw DomainError("counts must sum to trials");
  const std::vector<double> pr = reparam_probs(order, q);
  double s = boost::math::lgamma(static_cast<double>(trials) + 1);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    s -= boost::math::lgamma(static_cast<double>(counts[i]) + 1);
    if (counts[i] > 0) s += static_cast<double>(counts[i]) * std::log(pr[i]);
  }
  return s;
}

double multinomial_reparam_pmf(double order, const SimplexPoint& q,
                               std::span<const std::int64_t> counts,
                               std::int64_t trials) {
  return std::exp(multinomial_reparam_log_pmf(order, q, counts, trials));
}

double liouville_transform_check(LiouvilleKind kind,
                                 const std::function<double(double)>& generator,
                                 double c, double point) {
  if (!(c > 0)) throw DomainError("Liouville exponent sum must be positive");
  switch (kind) {
    case LiouvilleKind::first_to_second: {
      if (!(point > 0 && point < 1)) throw DomainError("second-kind argument must lie in (0,1)");
      const double h = point;
      return std::pow(1 - h, -(c + 1)) * generator(h / (1 - h));
    }
    case LiouvilleKind::second_to_first: {
      if (!(point > 0) || !std::isfinite(point)) throw DomainError("first-kind argument must be positive");
      const double t = point;
      return std::pow(1 + t, -(c + 1)) * generator(t / (1 + t));
    }
  }
  throw DomainError("unknown Liouville transform");
}

}  // namespace fracdir
