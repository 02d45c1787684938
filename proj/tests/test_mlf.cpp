#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracdir/error.hpp"
#include "fracdir/mlf.hpp"

using namespace fracdir;

namespace {

struct OracleCase {
  double alpha, beta, delta, z, value;
};

// tests/oracles/mlf_oracle.py, 60+ significant digits, rounded to 20.
constexpr OracleCase kOracle[] = {
    {0.7, 0.7, 1, -2, 0.077358224338521222028},
    {0.7, 1.4, 2, -50, 3.9268117531063116634e-6},
    {0.7, 1.4, 2, -5, 0.0052888023856950736979},
    {0.5, 0.5, 1, -3, 0.02718613000358643569},
    {0.5, 2.5, 1, -4, 0.19296068553113887991},
    {0.3, 0.06, 0.2, -1.5, 0.018192250723179896217},
    {0.3, 0.9, 3, -2, 0.012306400746254325566},
    {0.95, 0.19, 0.2, -7, 0.0015718450333968180515},
    {0.95, 2.85, 3, -30, 2.3805010692367631534e-7},
    {0.95, 28.975, 30.5, -20, 1.0187782478896064598e-40},
    {0.95, 9.975, 10.5, -3, 8.6190221734653404175e-8},
    {0.7, 2.1, 3, 2.5, 236.97091943178810798},
    {1.5, 1.0, 1, -4, -0.27242487890994054146},
    {1.0, 2.5, 1.2, -8, 0.087184427779684299204},
};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("log_gamma at exact points") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  CHECK(log_gamma(1e-8) == doctest::Approx(-std::log(1e-8)).epsilon(1e-7));
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.0), DomainError);
}

TEST_CASE("ml2 trivial reductions") {
  CHECK(ml2(1, 1, 1) == doctest::Approx(std::numbers::e).epsilon(1e-14));
  CHECK(ml2(0.5, 0.5, 0) == doctest::Approx(1 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(ml2(1, 1, -3) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  // E_{2,1}(-x^2) = cos x
  CHECK(ml2(2, 1, -4) == doctest::Approx(std::cos(2.0)).epsilon(1e-12));
  // E_{1/2,1}(-x) = exp(x^2) erfc(x)
  for (double x : {0.5, 2.0, 6.0}) {
    CHECK(ml2(0.5, 1, -x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-10));
  }
}

TEST_CASE("ml3 trivial reductions") {
  CHECK(ml3({0.7, 0.7, 1}, 0) == doctest::Approx(1 / std::tgamma(0.7)).epsilon(1e-14));
  CHECK(ml3({1, 2, 2}, -1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  // Erlang: E^k_{1,k}(-t) = e^{-t} / (k-1)!
  for (int k : {1, 2, 5}) {
    for (double t : {0.1, 1.0, 10.0, 40.0}) {
      const double want = std::exp(-t) / std::tgamma(k);
      CHECK(rel_err(ml3({1, double(k), double(k)}, -t), want) < 1e-11);
    }
  }
}

TEST_CASE("ml3 against the arbitrary-precision oracle") {
  for (const auto& c : kOracle) {
    CAPTURE(c.alpha);
    CAPTURE(c.beta);
    CAPTURE(c.delta);
    CAPTURE(c.z);
    const MlValue v = ml3_eval({c.alpha, c.beta, c.delta}, c.z);
    CAPTURE(to_string(v.method));
    CHECK(rel_err(v.value(), c.value) < 1e-10);
  }
}

TEST_CASE("asymptotic branch at a large negative argument") {
  const MlValue v = ml3_eval_with({0.7, 1.4, 2}, -50, MlMethod::asymptotic);
  CHECK(v.method == MlMethod::asymptotic);
  CHECK(rel_err(v.value(), 3.9268117531063116634e-6) < 1e-8);
}

TEST_CASE("contour integral agrees with the series where both apply") {
  for (double z : {-0.5, -2.0, -5.0}) {
    const PrabhakarParams p{0.7, 1.4, 2};
    const double s = ml3_eval_with(p, z, MlMethod::series).value();
    const double q = ml3_eval_with(p, z, MlMethod::integral).value();
    CHECK(rel_err(q, s) < 1e-10);
  }
}

TEST_CASE("log-magnitude form survives underflow") {
  const MlValue v = ml3_eval({0.95, 28.975, 30.5}, -20);
  CHECK(v.sign == 1);
  CHECK(v.log_abs == doctest::Approx(std::log(1.0187782478896064598e-40)).epsilon(1e-12));
}

TEST_CASE("series cancellation is reported") {
  CHECK_THROWS_AS(ml3_eval_with({0.7, 1.4, 2}, -200, MlMethod::series), EvaluationError);
  SeriesSpec tiny;
  tiny.max_terms = 16;
  CHECK_THROWS_AS(ml3_eval_with({0.7, 0.7, 1}, -6, MlMethod::series, tiny), EvaluationError);
}

TEST_CASE("fixed crossover selects series or asymptotic only") {
  SeriesSpec s;
  s.crossover = 10.0;
  CHECK(ml3_eval({0.7, 1.4, 2}, -5, s).method == MlMethod::series);
  CHECK(ml3_eval({0.7, 1.4, 2}, -50, s).method == MlMethod::asymptotic);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ml3({0, 1, 1}, 1), DomainError);
  CHECK_THROWS_AS(ml3({1, -1, 1}, 1), DomainError);
  CHECK_THROWS_AS(ml3({1, 1, -1}, 1), DomainError);
  SeriesSpec bad;
  bad.rel_tol = 0;
  CHECK_THROWS_AS(ml2(1, 1, 1, bad), DomainError);
}
