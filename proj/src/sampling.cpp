#include "fracdir/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "fracdir/error.hpp"

namespace fracdir {
namespace {

constexpr double kPi = std::numbers::pi;
// Blocks reserved per row of a batch.
constexpr std::uint64_t kRowBlocks = std::uint64_t{1} << 32;

// Normalizes log-weights onto the simplex.
SimplexPoint from_logs(std::span<const double> logs) {
  const double lmax = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(logs.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logs[i] - lmax);
  double total = compensated_sum(w);
  for (double& v : w) v = std::clamp(v / total, std::numeric_limits<double>::denorm_min(), kBelowOne);
  return SimplexPoint(std::move(w));
}

}  // namespace

const char* to_string(Law law) {
  switch (law) {
    case Law::frac_gamma: return "frac_gamma";
    case Law::gen_gamma: return "gen_gamma";
    case Law::frac_dirichlet: return "frac_dirichlet";
    case Law::gdir: return "gdir";
  }
  return "unknown";
}

Law parse_law(const std::string& name) {
  for (Law l : {Law::frac_gamma, Law::gen_gamma, Law::frac_dirichlet, Law::gdir}) {
    if (name == to_string(l)) return l;
  }
  throw DomainError("unknown law '" + name + "'");
}

void LawParams::validate() const {
  switch (law) {
    case Law::frac_gamma:
      if (shapes.size() != 1) throw DomainError("frac_gamma takes exactly one shape");
      FracGammaParams{rate, shapes[0], order}.validate();
      break;
    case Law::gen_gamma:
      if (shapes.size() != 1) throw DomainError("gen_gamma takes exactly one shape");
      if (!(shapes[0] > 0) || !(order > 0)) throw DomainError("gen_gamma needs shape > 0, order > 0");
      break;
    case Law::frac_dirichlet:
      FracDirParams::make(order, shapes);
      break;
    case Law::gdir:
      GdirParams::make(order, shapes);
      break;
  }
}

std::vector<double> SampleBatch::column(std::size_t j) const {
  std::vector<double> c(count);
  for (std::size_t i = 0; i < count; ++i) c[i] = values[i * dim + j];
  return c;
}

double sample_uniform(RngState& rng) { return rng.uniform(); }

double sample_exponential(double rate, RngState& rng) {
  if (!(rate > 0)) throw DomainError("exponential rate must be positive");
  return -std::log(rng.uniform()) / rate;
}

double sample_normal(RngState& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * kPi * u2);
}

double sample_log_gamma(double shape, RngState& rng) {
  if (!(shape > 0) || !std::isfinite(shape)) throw DomainError("Gamma shape must be positive");
  if (shape < 1) {
    // G(a) = G(a+1) U^{1/a}
    const double boost = std::log(rng.uniform()) / shape;
    return sample_log_gamma(shape + 1, rng) + boost;
  }
  // Marsaglia-Tsang
  const double d = shape - 1.0 / 3.0;
  const double c = 1 / std::sqrt(9 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1 + c * x;
    } while (v <= 0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

double sample_gamma(double shape, double rate, RngState& rng) {
  if (!(rate > 0)) throw DomainError("Gamma rate must be positive");
  return std::exp(sample_log_gamma(shape, rng)) / rate;
}

SimplexPoint sample_dirichlet(std::span<const double> shapes, RngState& rng) {
  std::vector<double> logs(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) logs[i] = sample_log_gamma(shapes[i], rng);
  return from_logs(logs);
}

double sample_log_stable_one_sided(double order, RngState& rng) {
  if (!(order > 0 && order < 1)) throw DomainError("stable order must lie in (0,1)");
  const double nu = order;
  const double u = kPi * rng.uniform();
  const double e = -std::log(rng.uniform());
  return std::log(std::sin(nu * u)) + (1 - nu) / nu * std::log(std::sin((1 - nu) * u)) -
         std::log(std::sin(u)) / nu - (1 - nu) / nu * std::log(e);
}

double sample_stable_one_sided(double order, RngState& rng) {
  return std::exp(sample_log_stable_one_sided(order, rng));
}

double sample_log_frac_gamma(const FracGammaParams& p, RngState& rng) {
  p.validate();
  const double log_u = sample_log_gamma(p.shape, rng) - std::log(p.rate);
  if (p.order == 1) return log_u;
  return log_u / p.order + sample_log_stable_one_sided(p.order, rng);
}

double sample_frac_gamma(const FracGammaParams& p, RngState& rng) {
  return std::exp(sample_log_frac_gamma(p, rng));
}

double sample_frac_gamma_exp_cauchy(double rate, double order, RngState& rng) {
  FracGammaParams{rate, 1.0, order}.validate();
  const double e = -std::log(rng.uniform());
  if (order == 1) return e / rate;
  const double v = rng.uniform();
  // sin(nu pi)/tan(nu pi v) - cos(nu pi), written without cancellation.
  const double z = std::sin(order * kPi * (1 - v)) / std::sin(order * kPi * v);
  return std::exp((std::log(z) - std::log(rate)) / order) * e;
}

double sample_gen_gamma(double alpha, double order, RngState& rng) {
  if (!(order > 0)) throw DomainError("generalized Gamma order must be positive");
  return std::exp(sample_log_gamma(alpha, rng) / order);
}

SimplexPoint sample_frac_dirichlet_point(const FracDirParams& p, RngState& rng) {
  std::vector<double> logs(p.shapes.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    logs[i] = sample_log_frac_gamma(FracGammaParams{1.0, p.shapes[i], p.order}, rng);
  }
  return from_logs(logs);
}

SimplexPoint sample_gdir_point(const GdirParams& p, RngState& rng, GdirPath path) {
  if (path == GdirPath::dirichlet_transform) {
    return dirichlet_to_gdir(sample_dirichlet(p.shapes, rng), p.order);
  }
  std::vector<double> logs(p.shapes.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    logs[i] = sample_log_gamma(p.shapes[i], rng) / p.order;
  }
  return from_logs(logs);
}

void for_each_substream(std::size_t count, RngState& rng, unsigned threads,
                        const std::function<void(std::size_t, RngState&)>& fn) {
  const RngState base = rng.advanced(0);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngState local = base.advanced(kRowBlocks * i);
      fn(i, local);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    run(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(count, b + chunk);
      if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto& th : pool) th.join();
  }
  rng = base.advanced(kRowBlocks * count);
}

SampleBatch sample_batch(const LawParams& p, std::size_t count, RngState& rng,
                         unsigned threads, GdirPath path) {
  p.validate();
  SampleBatch b;
  b.params = p;
  b.seed = rng.seed();
  b.stream = rng.stream();
  b.first_counter = rng.counter();
  b.count = count;
  b.dim = p.dimension();
  b.values.assign(count * b.dim, 0.0);

  std::function<void(std::size_t, RngState&)> fn;
  switch (p.law) {
    case Law::frac_gamma: {
      const FracGammaParams fg{p.rate, p.shapes[0], p.order};
      fn = [&, fg](std::size_t i, RngState& r) { b.values[i] = sample_frac_gamma(fg, r); };
      break;
    }
    case Law::gen_gamma:
      fn = [&](std::size_t i, RngState& r) {
        b.values[i] = sample_gen_gamma(p.shapes[0], p.order, r);
      };
      break;
    case Law::frac_dirichlet: {
      const FracDirParams fd = FracDirParams::make(p.order, p.shapes);
      fn = [&, fd](std::size_t i, RngState& r) {
        const SimplexPoint q = sample_frac_dirichlet_point(fd, r);
        std::copy(q.coords().begin(), q.coords().end(), b.values.begin() + i * b.dim);
      };
      break;
    }
    case Law::gdir: {
      const GdirParams g = GdirParams::make(p.order, p.shapes);
      fn = [&, g](std::size_t i, RngState& r) {
        const SimplexPoint q = sample_gdir_point(g, r, path);
        std::copy(q.coords().begin(), q.coords().end(), b.values.begin() + i * b.dim);
      };
      break;
    }
  }
  for_each_substream(count, rng, threads, fn);
  return b;
}

SampleBatch sample_frac_dirichlet(const FracDirParams& p, std::size_t count, RngState& rng,
                                  unsigned threads) {
  return sample_batch(LawParams{Law::frac_dirichlet, p.order, p.shapes, 1.0}, count, rng,
                      threads);
}

SampleBatch sample_gdir(const GdirParams& p, std::size_t count, RngState& rng, GdirPath path,
                        unsigned threads) {
  return sample_batch(LawParams{Law::gdir, p.order, p.shapes, 1.0}, count, rng, threads, path);
}

}  // namespace fracdir
