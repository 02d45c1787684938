#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracdir/error.hpp"
#include "fracdir/rng.hpp"
#include "fracdir/sampling.hpp"
#include "fracdir/stats.hpp"

using namespace fracdir;

namespace {

// Mean of g over n draws, with its standard error.
template <class Draw>
std::pair<double, double> mc_mean(std::size_t n, Draw draw) {
  std::vector<double> v(n);
  for (auto& x : v) x = draw();
  return {mean(v), std::sqrt(variance(v) / n)};
}

void check_within(std::pair<double, double> est, double want, double k = 3.5) {
  CAPTURE(est.first);
  CAPTURE(est.second);
  CAPTURE(want);
  CHECK(std::abs(est.first - want) <= k * est.second);
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("generator state is deterministic and splittable") {
  RngState a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  RngState d(7);
  RngState e = d.advanced(5);
  for (int i = 0; i < 10; ++i) d.next_u64();  // two outputs per block
  CHECK(d.next_u64() == e.next_u64());
  RngState u(1);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0);
    REQUIRE(x < 1);
  }
}

TEST_CASE("batches do not depend on the thread count") {
  const LawParams p{Law::frac_dirichlet, 0.7, {2, 3}, 1};
  RngState r1(11), r4(11);
  const SampleBatch a = sample_batch(p, 5000, r1, 1);
  const SampleBatch b = sample_batch(p, 5000, r4, 4);
  CHECK(a.values == b.values);
  CHECK(r1.counter() == r4.counter());
  // The next batch continues the stream.
  const SampleBatch c = sample_batch(p, 10, r1, 2);
  CHECK(c.first_counter > a.first_counter);
  CHECK(c.values != std::vector<double>(a.values.begin(), a.values.begin() + 20));
  for (std::size_t i = 0; i < a.count; ++i) {
    const auto row = a.row(i);
    CHECK(std::abs(row[0] + row[1] - 1) < 1e-12);
  }
}

TEST_CASE("Gamma and Dirichlet building blocks") {
  RngState rng(2024);
  for (double shape : {0.2, 2.0, 30.0}) {
    check_within(mc_mean(200000, [&] { return sample_gamma(shape, 1, rng); }), shape);
  }
  check_within(mc_mean(200000, [&] { return std::exp(sample_log_gamma(1e-3, rng)); }), 1e-3);
  const std::vector<double> ones{1, 1, 1, 1};
  std::vector<double> first;
  for (int i = 0; i < 100000; ++i) first.push_back(sample_dirichlet(ones, rng)[3]);
  check_within({mean(first), std::sqrt(variance(first) / first.size())}, 0.25);
  check_within(mc_mean(200000, [&] { return sample_exponential(2.0, rng); }), 0.5);
  check_within(mc_mean(200000, [&] { return sample_normal(rng); }), 0.0);
}

TEST_CASE("one-sided stable Laplace transform") {
  RngState rng(5);
  check_within(mc_mean(400000, [&] { return std::exp(-sample_stable_one_sided(0.5, rng)); }),
               std::exp(-1.0));
  check_within(mc_mean(400000, [&] { return std::exp(-2 * sample_stable_one_sided(0.7, rng)); }),
               std::exp(-std::pow(2.0, 0.7)));
  CHECK_THROWS_AS(sample_stable_one_sided(1.0, rng), DomainError);
}

TEST_CASE("fractional Gamma sampler") {
  RngState rng(9);
  check_within(mc_mean(400000, [&] { return sample_frac_gamma({1, 2, 1}, rng); }), 2.0);
  check_within(mc_mean(400000, [&] { return std::exp(-sample_frac_gamma({1, 1, 0.7}, rng)); }), 0.5);
  check_within(mc_mean(400000, [&] { return std::exp(-sample_frac_gamma({2, 0.4, 0.6}, rng)); }),
               frac_gamma_laplace({2, 0.4, 0.6}, 1));
}

TEST_CASE("exponential-Cauchy representation") {
  RngState r1(100, 0), r2(100, 1), r3(100, 2);
  std::vector<double> a(100000), b(100000), c(100000), e(100000);
  for (auto& x : a) x = sample_frac_gamma_exp_cauchy(1, 0.7, r1);
  for (auto& x : b) x = sample_frac_gamma({1, 1, 0.7}, r2);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  for (auto& x : c) x = sample_frac_gamma_exp_cauchy(1, 1, r3);
  for (auto& x : e) x = sample_exponential(1, r3);
  CHECK(ks_two_sample(c, e).p_value > 0.01);
}

TEST_CASE("fractional Dirichlet moments") {
  RngState rng(77);
  const SampleBatch b = sample_frac_dirichlet(FracDirParams::make(1, {2, 3}), 200000, rng, 0);
  const auto q = b.column(0);
  check_within({mean(q), std::sqrt(variance(q) / q.size())}, 0.4);
}

TEST_CASE("generalized Dirichlet sampler") {
  const GdirParams p = GdirParams::make(0.7, {2, 3});
  RngState a(3, 0), b(3, 1);
  const SampleBatch x = sample_gdir(p, 100000, a, GdirPath::dirichlet_transform, 0);
  const SampleBatch y = sample_gdir(p, 100000, b, GdirPath::gen_gamma, 0);
  CHECK(ks_two_sample(x.column(0), y.column(0)).p_value > 0.01);

  // nu = 1 returns the Dirichlet draw itself.
  const std::vector<double> shapes{2, 3};
  RngState c(8), d(8);
  const SimplexPoint g = sample_gdir_point(GdirParams::make(1, shapes), c);
  const SimplexPoint m = sample_dirichlet(shapes, d);
  CHECK(g[0] == doctest::Approx(m[0]).epsilon(1e-15));

  // Equal-probability chi-square at nu = 0.5, beta = (1, 1).
  const GdirParams h = GdirParams::make(0.5, {1, 1});
  RngState e(12);
  const SampleBatch z = sample_gdir(h, 200000, e, GdirPath::dirichlet_transform, 0);
  std::vector<double> obs(100, 0.0), expd(100, z.count / 100.0);
  for (double q : z.column(0)) {
    obs[std::min<std::size_t>(99, static_cast<std::size_t>(gdir2_marginal_cdf(h, q) * 100))] += 1;
  }
  CHECK(chi_square(obs, expd).p_value > 0.001);
}

TEST_CASE("law names") {
  CHECK(parse_law("frac_dirichlet") == Law::frac_dirichlet);
  CHECK(std::string(to_string(Law::gen_gamma)) == "gen_gamma");
  CHECK_THROWS_AS(parse_law("beta"), DomainError);
  LawParams bad{Law::frac_gamma, 0.7, {}, 1};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("draws stay strictly inside the support") {
  RngState rng(404);
  for (const LawParams& p : {LawParams{Law::frac_dirichlet, 0.7, {0.2, 0.4}, 1},
                             LawParams{Law::gdir, 0.3, {0.05, 0.1, 0.2}, 1},
                             LawParams{Law::frac_gamma, 0.5, {0.05}, 3},
                             LawParams{Law::gen_gamma, 2.0, {0.05}, 1}}) {
    const SampleBatch b = sample_batch(p, 100000, rng, 0);
    for (std::size_t i = 0; i < b.count; ++i) {
      const auto row = b.row(i);
      double sum = 0;
      for (double v : row) {
        REQUIRE(v > 0);
        REQUIRE(std::isfinite(v));
        sum += v;
      }
      if (p.is_simplex()) {
        REQUIRE(std::abs(sum - 1) < 1e-12);
        for (double v : row) REQUIRE(v < 1);
      }
    }
  }
}
