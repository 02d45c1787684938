#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracdir/distributions.hpp"
#include "fracdir/io.hpp"
#include "fracdir/sampling.hpp"

namespace fracdir {

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view name);
EvalPath parse_eval_path(std::string_view name);
const char* to_string(EvalPath path);

/// FRACDIR_DEFAULT_SEED when set to an unsigned integer, else a fixed value.
std::uint64_t default_seed();

struct ExperimentConfig {
  LawParams params;
  std::size_t count = 1'000'000;
  std::uint64_t seed = default_seed();
  std::size_t bins = 100;
  std::filesystem::path output_path;
  OutputFormat format = OutputFormat::csv;
  /// 0 selects the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  EvalPath path = EvalPath::automatic;
  GdirPath gdir_path = GdirPath::dirichlet_transform;

  void validate() const;
};

struct GofReport {
  double ks_statistic = 0;
  double ks_p_value = 1;
  double chi2_statistic = 0;
  double chi2_p_value = 1;
  std::size_t chi2_dof = 0;
  /// Sum over histogram bins (and the overflow bin on the positive axis) of
  /// |empirical probability - theoretical probability|.
  double l1_distance = 0;
  std::size_t sample_count = 0;

  void validate() const;
  nlohmann::json to_json() const;
};

/// start:stop:steps, evenly spaced, both ends included.
struct GridSpec {
  double start = 0;
  double stop = 1;
  std::size_t steps = 2;

  static GridSpec parse(std::string_view text);
  std::vector<double> points() const;
};

// Theory

/// Density of the sampled coordinate: the scalar law itself, or the
/// marginal of coordinate i for the simplex laws (GDIR only for n = 2).
std::function<double(double)> marginal_density(const LawParams& p, std::size_t i,
                                               EvalPath path = EvalPath::automatic);
/// Closed-form distribution function of the same coordinate when one exists.
std::optional<std::function<double(double)>> closed_form_cdf(const LawParams& p,
                                                             std::size_t i);
/// Integral of |f - g| over the common support of two marginal densities.
double marginal_l1_distance(const LawParams& a, const LawParams& b, std::size_t i,
                            const QuadSpec& spec = {});

struct PdfTable {
  Table table;
  /// Rows whose evaluation failed; their density is NaN.
  std::size_t failures = 0;
};

/// Columns (x, pdf) for scalar laws, (q, pdf) for simplex marginals, plus
/// a path column (series, quadrature or failed) for the fractional Dirichlet.
PdfTable pdf_table(const LawParams& p, std::span<const double> grid,
                   EvalPath path = EvalPath::automatic, std::size_t coordinate = 0);

struct Comparison {
  GofReport report;
  /// bin_center, empirical_density, theoretical_density.
  Table bins;
  /// L1 distance between the marginal densities of the sampled law and the
  /// theory law when the two differ.
  std::optional<double> theory_l1;
};

/// Histogram of column `coordinate` of the batch against the marginal
/// density of `theory` (defaults to the batch's own law). Simplex laws use
/// equal-width bins on [0,1]; scalar laws use equal-width bins on
/// [0, 99% sample quantile] plus an overflow bin.
Comparison compare_to_theory(const SampleBatch& batch, std::size_t bins,
                             const std::optional<LawParams>& theory = std::nullopt,
                             std::size_t coordinate = 0,
                             EvalPath path = EvalPath::automatic);

// Commands. Each writes its artifact and returns what it wrote.

SampleBatch cmd_sample(const ExperimentConfig& config);
PdfTable cmd_pdf(const LawParams& p, const GridSpec& grid, EvalPath path,
                 const std::filesystem::path& out, OutputFormat format);
Comparison cmd_compare(const ExperimentConfig& config,
                       const std::optional<LawParams>& theory = std::nullopt);

struct FigureOptions {
  std::size_t count = 1'000'000;
  std::size_t bins = 100;
  std::size_t grid_points = 1000;
  /// Seed of figure k is seed + k.
  std::uint64_t seed = default_seed();
  unsigned threads = 0;
  OutputFormat format = OutputFormat::csv;
};

/// Parameter set of figures 1-4 (FD vs GDIR on the two-simplex).
LawParams figure_params(int id, Law law);
std::vector<std::filesystem::path> cmd_figure(int id, const std::filesystem::path& dir,
                                              const FigureOptions& options = {});

/// Parses nonnegative integers separated by whitespace or commas.
std::vector<std::int64_t> parse_counts(std::string_view text);
GdirParams cmd_posterior(const GdirParams& prior, std::span<const std::int64_t> counts,
                         const std::filesystem::path& out);

/// Writes a table in the selected format with the standard JSON envelope.
void write_table(const std::filesystem::path& out, OutputFormat format, const Table& t,
                 const std::optional<LawParams>& params,
                 const std::optional<std::uint64_t>& seed,
                 const std::string& rows_key = "rows",
                 const nlohmann::json& extra = nlohmann::json::object());
/// Reads a table written by write_table; the format follows the extension.
Table read_table(const std::filesystem::path& in);

}  // namespace fracdir
