// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. Each criterion also has a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fracdir/distributions.hpp"
#include "fracdir/error.hpp"
#include "fracdir/harness.hpp"
#include "fracdir/rng.hpp"
#include "fracdir/sampling.hpp"
#include "fracdir/stats.hpp"

using namespace fracdir;

namespace {

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double beta_pdf(double a, double b, double x) {
  return std::exp((a - 1) * std::log(x) + (b - 1) * std::log1p(-x) + std::lgamma(a + b) -
                  std::lgamma(a) - std::lgamma(b));
}

// Integral over (0, inf) of g(x) dx in ln x, from x = e^-200 to e^80.
double integrate_log_axis(const std::function<double(double)>& g) {
  QuadSpec s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-11;
  double total = 0;
  for (double a = -200; a < 80; a += 20) {
    const QuadResult r = integrate_interval(
        [&](double u) {
          const double x = std::exp(u);
          return g(x) * x;
        },
        a, a + 20, s);
    if (!r.converged) throw NonConvergenceError("log-axis quadrature", r.value, r.error_estimate);
    total += r.value;
  }
  return total;
}

Outcome c1_reductions() {
  double fg_err = 0;
  for (int k : {1, 2, 5}) {
    for (int j = 1; j <= 2000; ++j) {
      const double x = 20.0 * j / 2000;
      const double want = std::pow(x, k - 1) * std::exp(-x) / std::tgamma(k);
      fg_err = std::max(fg_err, std::abs(frac_gamma_pdf({1, double(k), 1}, x) - want));
    }
  }
  double fd_err = 0;
  const FracDirParams fd = FracDirParams::make(1, {2, 3});
  for (int j = 0; j < 50; ++j) {
    const double q = (j + 0.5) / 50;
    fd_err = std::max(fd_err, std::abs(frac_dirichlet_joint_pdf(fd, SimplexPoint({q, 1 - q})) -
                                       beta_pdf(2, 3, q)));
  }
  double gd_err = 0;
  RngState rng(kSeed, 11);
  const std::vector<std::vector<double>> shape_sets{{2, 3}, {0.2, 0.4}, {1, 2, 0.5, 4}};
  for (const auto& shapes : shape_sets) {
    const GdirParams g = GdirParams::make(1, shapes);
    for (int j = 0; j < 50; ++j) {
      const std::vector<double> ones(shapes.size(), 1.0);
      const SimplexPoint q = sample_dirichlet(ones, rng);
      double want = std::lgamma(g.shape_sum);
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        want += (shapes[i] - 1) * std::log(q[i]) - std::lgamma(shapes[i]);
      }
      gd_err = std::max(gd_err, std::abs(gdir_log_pdf(g, q) - want));
    }
  }
  std::ostringstream d;
  d << "FG-Erlang sup " << fg_err << ", FD-Dirichlet max " << fd_err << ", GDIR log max " << gd_err;
  return {fg_err <= 1e-10 && fd_err <= 1e-8 && gd_err <= 1e-12, d.str()};
}

Outcome c2_normalization() {
  double fd_worst = 0, fg_worst = 0;
  for (int id : {1, 2, 3}) {
    const LawParams lp = figure_params(id, Law::frac_dirichlet);
    const FracDirParams p = FracDirParams::make(lp.order, lp.shapes);
    QuadSpec s;
    s.abs_tol = 1e-10;
    s.rel_tol = 1e-10;
    const QuadResult r = integrate_unit_interval(
        [&](double q) { return frac_dirichlet_marginal(p, 0, q, EvalPath::automatic).value; }, s);
    fd_worst = std::max(fd_worst, std::abs(r.value - 1));
  }
  for (double beta : {0.2, 0.4, 2.0, 3.0}) {
    const FracGammaParams p{1, beta, 0.7};
    fg_worst = std::max(fg_worst, std::abs(integrate_log_axis([&](double x) {
                                    return frac_gamma_pdf(p, x);
                                  }) - 1));
  }
  std::ostringstream d;
  d << "FD max |mass-1| " << fd_worst << ", FG max |mass-1| " << fg_worst;
  return {fd_worst <= 1e-6 && fg_worst <= 1e-7, d.str()};
}

Outcome c3_laplace() {
  double worst = 0;
  int n = 0;
  for (double nu : {0.5, 0.9}) {
    for (double beta : {0.4, 2.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const FracGammaParams p{1, beta, nu};
        const double got = integrate_log_axis(
            [&](double x) { return std::exp(-s * x) * frac_gamma_pdf(p, x); });
        worst = std::max(worst, std::abs(got - frac_gamma_laplace(p, s)));
        ++n;
      }
    }
  }
  std::ostringstream d;
  d << n << " combinations, max abs error " << worst;
  return {n == 12 && worst <= 1e-6, d.str()};
}

Outcome c4_series() {
  const double grid[] = {0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.6, 0.75, 0.9};
  double worst = 0;
  int n = 0;
  for (const auto& p : {FracDirParams::make(0.7, {0.2, 0.4}), FracDirParams::make(0.95, {10.5, 30.5})}) {
    for (double q : grid) {
      const double s = frac_dirichlet_marginal_series(p, 0, q);
      const double r = frac_dirichlet_marginal_pdf(p, 0, q);
      worst = std::max(worst, std::abs(s - r));
      ++n;
    }
  }
  std::ostringstream d;
  d << n << " points, max abs difference " << worst;
  return {n == 18 && worst <= 1e-6, d.str()};
}

Outcome c5_moments() {
  RngState rng(kSeed, 5);
  const SampleBatch b = sample_frac_dirichlet(FracDirParams::make(0.7, {2, 3}), 1'000'000, rng, 0);
  const auto q = b.column(0);
  const double n = static_cast<double>(q.size());
  const double m = mean(q);
  const double v = variance(q);
  std::vector<double> c4(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) c4[i] = std::pow(q[i] - m, 4);
  const double m4 = mean(c4);
  const double se_m = std::sqrt(v / n);
  const double se_v = std::sqrt((m4 - v * v) / n);
  const double zm = (m - 0.4) / se_m;
  const double zv = (v - 0.1) / se_v;
  std::ostringstream d;
  d << "mean " << m << " (z " << zm << "), variance " << v << " (z " << zv << ")";
  return {std::abs(zm) <= 3 && std::abs(zv) <= 3, d.str()};
}

Outcome c6_gdir() {
  const std::pair<double, std::vector<double>> sets[] = {{0.7, {2, 3}}, {0.7, {0.2, 0.4}}, {0.95, {10, 30}}};
  std::ostringstream d;
  bool ok = true;
  std::uint64_t stream = 60;
  for (const auto& [nu, shapes] : sets) {
    const GdirParams g = GdirParams::make(nu, shapes);
    RngState rng(kSeed, stream++);
    const SampleBatch b = sample_gdir(g, 1'000'000, rng, GdirPath::dirichlet_transform, 0);
    std::vector<double> obs(100, 0.0), expd(100, b.count / 100.0);
    for (double q : b.column(0)) {
      const auto k = static_cast<std::size_t>(gdir2_marginal_cdf(g, q) * 100);
      obs[std::min<std::size_t>(k, 99)] += 1;
    }
    const ChiSquareResult r = chi_square(obs, expd);
    ok = ok && r.p_value > 0.001;
    d << "chi2 p " << r.p_value << "; ";
  }
  const GdirParams g = GdirParams::make(0.7, {2, 3});
  RngState a(kSeed, 70), c(kSeed, 71);
  const SampleBatch x = sample_gdir(g, 100'000, a, GdirPath::dirichlet_transform, 0);
  const SampleBatch y = sample_gdir(g, 100'000, c, GdirPath::gen_gamma, 0);
  const TestResult ks = ks_two_sample(x.column(0), y.column(0));
  ok = ok && ks.p_value > 0.01;
  d << "two-path KS p " << ks.p_value;
  return {ok, d.str()};
}

Outcome c7_aggregation() {
  // Q = X / W with X_i ~ FG(1, beta_i, nu) independent and W = sum X_i.
  const double nu = 0.7;
  const std::vector<double> shapes{1, 1, 2};
  const std::size_t n = 1'000'000;
  std::vector<double> z(n);
  RngState rng(kSeed, 7);
  for_each_substream(n, rng, 0, [&](std::size_t i, RngState& r) {
    std::vector<double> x(3);
    for (std::size_t j = 0; j < 3; ++j) x[j] = sample_frac_gamma({1, shapes[j], nu}, r);
    const double w = x[0] + x[1] + x[2];
    const SimplexPoint q = SimplexPoint::normalized(x);
    z[i] = w * (q[0] + q[1]);
  });
  std::ostringstream d;
  bool ok = true;
  for (double s : {0.5, 1.0, 2.0}) {
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = std::exp(-s * z[i]);
    const double m = mean(e);
    const double se = std::sqrt(variance(e) / n);
    const double want = std::pow(1 / (1 + std::pow(s, nu)), 2);
    const double zs = (m - want) / se;
    ok = ok && std::abs(zs) <= 3;
    d << "s=" << s << " z " << zs << "; ";
  }
  return {ok, d.str()};
}

// Least-squares slope of ln S(x) against ln x over the order statistics whose
// empirical survival lies in [1e-4, 1e-3].
double tail_slope(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double surv = (n - i) / n;
    if (surv > 1e-3 || surv < 1e-4) continue;
    const double lx = std::log(x[i]), ly = std::log(surv);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    k += 1;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

Outcome c8_tail() {
  std::ostringstream d;
  bool ok = true;
  std::uint64_t stream = 80;
  for (double nu : {0.5, 0.7}) {
    std::vector<double> x(1'000'000);
    RngState rng(kSeed, stream++);
    for_each_substream(x.size(), rng, 0, [&](std::size_t i, RngState& r) {
      x[i] = sample_frac_gamma({1, 1, nu}, r);
    });
    const double slope = tail_slope(std::move(x));
    ok = ok && std::abs(slope + nu) <= 0.1 * nu;
    d << "nu=" << nu << " slope " << slope << "; ";
  }
  return {ok, d.str()};
}

Outcome c9_divergence() {
  const double wide = marginal_l1_distance(figure_params(1, Law::frac_dirichlet),
                                           figure_params(1, Law::gdir), 0);
  const double narrow = marginal_l1_distance(figure_params(2, Law::frac_dirichlet),
                                             figure_params(2, Law::gdir), 0);
  std::ostringstream d;
  d << "L1 beta=(2,3) " << wide << ", beta=(0.2,0.4) " << narrow << ", ratio " << wide / narrow;
  return {wide >= 3 * narrow, d.str()};
}

Outcome c10_conjugacy() {
  const GdirParams prior = GdirParams::make(0.7, {1, 2});
  const std::vector<std::int64_t> x{3, 1};
  const GdirParams post = gdir_posterior(prior, x);
  double lo = INFINITY, hi = -INFINITY;
  for (int j = 0; j < 20; ++j) {
    const double q1 = (j + 0.5) / 20;
    const SimplexPoint q({q1, 1 - q1});
    const double r = gdir_pdf(post, q) / (gdir_pdf(prior, q) * multinomial_reparam_pmf(0.7, q, x, 4));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double spread = (hi - lo) / lo;
  return {spread <= 1e-9, "relative spread " + fmt("%.3g", spread)};
}

Outcome c11_round_trip() {
  double worst = 0;
  RngState rng(kSeed, 11);
  for (double nu : {0.3, 0.7, 2.0}) {
    for (int j = 0; j < 1000; ++j) {
      const std::size_t n = 2 + j % 4;
      const std::vector<double> ones(n, 1.0);
      const SimplexPoint m = sample_dirichlet(ones, rng);
      const SimplexPoint a = gdir_to_dirichlet(dirichlet_to_gdir(m, nu), nu);
      const SimplexPoint q = dirichlet_to_gdir(gdir_to_dirichlet(m, nu), nu);
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max({worst, std::abs(a[i] - m[i]), std::abs(q[i] - m[i])});
      }
    }
  }
  return {worst <= 1e-12, "max abs error " + fmt("%.3g", worst)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "nu=1 reductions", 10, c1_reductions},
      {2, "normalization", 30, c2_normalization},
      {3, "Laplace transform", 30, c3_laplace},
      {4, "series-quadrature equivalence", 60, c4_series},
      {5, "moment reproduction", 60, c5_moments},
      {6, "GDIR sampler", 120, c6_gdir},
      {7, "aggregation", 60, c7_aggregation},
      {8, "tail exponent", 60, c8_tail},
      {9, "FD-GDIR divergence", 120, c9_divergence},
      {10, "conjugacy", 5, c10_conjugacy},
      {11, "transform round trip", 5, c11_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %2d %-30s %7.2fs/%3.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.budget_s, o.detail.c_str(), in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
