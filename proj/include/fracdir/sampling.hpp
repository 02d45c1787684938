#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracdir/distributions.hpp"
#include "fracdir/rng.hpp"

namespace fracdir {

enum class Law { frac_gamma, gen_gamma, frac_dirichlet, gdir };

const char* to_string(Law law);
/// Throws DomainError for unknown names.
Law parse_law(const std::string& name);

/// Parameter record shared by the batch samplers and the harness. Scalar laws
/// use shapes[0]; rate is only meaningful for frac_gamma.
struct LawParams {
  Law law = Law::gdir;
  double order = 1;
  std::vector<double> shapes;
  double rate = 1;

  void validate() const;
  bool is_simplex() const { return law == Law::frac_dirichlet || law == Law::gdir; }
  std::size_t dimension() const { return is_simplex() ? shapes.size() : 1; }
};

/// count x dim draws stored row-major.
struct SampleBatch {
  LawParams params;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t first_counter = 0;
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  /// Column j copied out.
  std::vector<double> column(std::size_t j) const;
};

enum class GdirPath { dirichlet_transform, gen_gamma };

// Building blocks

double sample_uniform(RngState& rng);
double sample_exponential(double rate, RngState& rng);
double sample_normal(RngState& rng);
/// log of a Gamma(shape, 1) draw; stays finite for tiny shapes.
double sample_log_gamma(double shape, RngState& rng);
double sample_gamma(double shape, double rate, RngState& rng);
SimplexPoint sample_dirichlet(std::span<const double> shapes, RngState& rng);

/// Positive stable variate with Laplace transform exp(-s^order), 0 < order < 1.
double sample_log_stable_one_sided(double order, RngState& rng);
double sample_stable_one_sided(double order, RngState& rng);

// Laws

double sample_log_frac_gamma(const FracGammaParams& p, RngState& rng);
double sample_frac_gamma(const FracGammaParams& p, RngState& rng);
/// FG(rate, 1, order) via an exponential times a power of a ratio of sines.
double sample_frac_gamma_exp_cauchy(double rate, double order, RngState& rng);
double sample_gen_gamma(double alpha, double order, RngState& rng);

SimplexPoint sample_frac_dirichlet_point(const FracDirParams& p, RngState& rng);
SimplexPoint sample_gdir_point(const GdirParams& p, RngState& rng,
                               GdirPath path = GdirPath::dirichlet_transform);

// Batches. Row i is drawn from its own substream position, so the output is
// identical for every thread count. rng is advanced past the batch.

SampleBatch sample_batch(const LawParams& p, std::size_t count, RngState& rng,
                         unsigned threads = 1,
                         GdirPath path = GdirPath::dirichlet_transform);
SampleBatch sample_frac_dirichlet(const FracDirParams& p, std::size_t count,
                                  RngState& rng, unsigned threads = 1);
SampleBatch sample_gdir(const GdirParams& p, std::size_t count, RngState& rng,
                        GdirPath path = GdirPath::dirichlet_transform,
                        unsigned threads = 1);

/// Runs fn(i, rng_i) for i in [0, count) with rng_i a fresh state for index i,
/// then advances rng past all of them.
void for_each_substream(std::size_t count, RngState& rng, unsigned threads,
                        const std::function<void(std::size_t, RngState&)>& fn);

}  // namespace fracdir
