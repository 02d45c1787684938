#include "fracdir/harness.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "fracdir/error.hpp"
#include "fracdir/stats.hpp"

namespace fracdir {
namespace {

constexpr std::uint64_t kFallbackSeed = 20240917;

unsigned resolve_threads(unsigned threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

LawParams gdir_ordered(const LawParams& p, std::size_t i) {
  if (p.shapes.size() != 2) {
    throw UnsupportedParameterError("GDIR marginal density is available for n = 2 only");
  }
  if (i > 1) throw DomainError("coordinate index out of range");
  LawParams q = p;
  if (i == 1) std::swap(q.shapes[0], q.shapes[1]);
  return q;
}

void check_coordinate(const LawParams& p, std::size_t i) {
  if (i >= p.dimension()) throw DomainError("coordinate index out of range");
}

std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

Table sample_table(const SampleBatch& b) {
  Table t;
  if (b.params.is_simplex()) {
    for (std::size_t j = 0; j < b.dim; ++j) t.add("q" + std::to_string(j + 1), b.column(j));
  } else {
    t.add("x", b.values);
  }
  return t;
}

Table histogram_table(const Histogram& h) {
  std::vector<double> centers(h.bins()), dens(h.bins());
  for (std::size_t k = 0; k < h.bins(); ++k) {
    centers[k] = h.center(k);
    dens[k] = h.density(k);
  }
  Table t;
  t.add("bin_center", std::move(centers)).add("density", std::move(dens));
  return t;
}

// Rows with positive abscissa and density, with log10 columns appended.
Table log_log(const Table& t, const std::string& xcol, const std::string& ycol) {
  const Column& x = t.column(xcol);
  const Column& y = t.column(ycol);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (x.values[i] > 0 && y.values[i] > 0) keep.push_back(i);
  }
  Table out;
  for (const Column& c : t.columns) {
    Column d;
    d.name = c.name;
    d.is_text = c.is_text;
    for (std::size_t i : keep) {
      if (c.is_text) {
        d.labels.push_back(c.labels[i]);
      } else {
        d.values.push_back(c.values[i]);
      }
    }
    out.columns.push_back(std::move(d));
  }
  std::vector<double> lx, ly;
  for (std::size_t i : keep) {
    lx.push_back(std::log10(x.values[i]));
    ly.push_back(std::log10(y.values[i]));
  }
  out.add("log10_" + xcol, std::move(lx)).add("log10_" + ycol, std::move(ly));
  return out;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw DomainError("unknown format '" + std::string(name) + "'");
}

EvalPath parse_eval_path(std::string_view name) {
  if (name == "series") return EvalPath::series;
  if (name == "quadrature") return EvalPath::quadrature;
  if (name == "auto" || name == "automatic") return EvalPath::automatic;
  throw DomainError("unknown evaluation path '" + std::string(name) + "'");
}

const char* to_string(EvalPath path) {
  switch (path) {
    case EvalPath::series: return "series";
    case EvalPath::quadrature: return "quadrature";
    case EvalPath::automatic: return "auto";
  }
  return "unknown";
}

std::uint64_t default_seed() {
  const char* env = std::getenv("FRACDIR_DEFAULT_SEED");
  if (env == nullptr || *env == '\0') return kFallbackSeed;
  const std::string_view s(env);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("FRACDIR_DEFAULT_SEED is not an unsigned integer");
  }
  return v;
}

void ExperimentConfig::validate() const {
  if (count < 1) throw DomainError("count must be at least 1");
  if (bins < 2) throw DomainError("bins must be at least 2");
  params.validate();
}

void GofReport::validate() const {
  auto prob = [](double p) { return p >= 0 && p <= 1; };
  if (!(ks_statistic >= 0) || !(chi2_statistic >= 0) || !(l1_distance >= 0) ||
      !prob(ks_p_value) || !prob(chi2_p_value) || sample_count < 1) {
    throw DomainError("GofReport field out of range");
  }
}

nlohmann::json GofReport::to_json() const {
  nlohmann::json j;
  j["ks_statistic"] = ks_statistic;
  j["ks_p_value"] = ks_p_value;
  j["chi2_statistic"] = chi2_statistic;
  j["chi2_p_value"] = chi2_p_value;
  j["chi2_dof"] = chi2_dof;
  j["l1_distance"] = l1_distance;
  j["sample_count"] = sample_count;
  return j;
}

GridSpec GridSpec::parse(std::string_view text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw DomainError("grid must be start:stop:steps");
  GridSpec g;
  try {
    g.start = parse_double(text.substr(0, c1));
    g.stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  } catch (const IoError&) {
    throw DomainError("grid must be start:stop:steps");
  }
  const std::string_view n = text.substr(c2 + 1);
  const auto res = std::from_chars(n.data(), n.data() + n.size(), g.steps);
  if (res.ec != std::errc() || res.ptr != n.data() + n.size() || g.steps < 1) {
    throw DomainError("grid steps must be a positive integer");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) || (g.steps > 1 && !(g.stop > g.start))) {
    throw DomainError("grid needs finite start < stop");
  }
  return g;
}

std::vector<double> GridSpec::points() const {
  if (steps == 1) return {start};
  std::vector<double> x(steps);
  const double h = (stop - start) / (steps - 1);
  for (std::size_t k = 0; k < steps; ++k) x[k] = start + k * h;
  x.back() = stop;
  return x;
}

std::function<double(double)> marginal_density(const LawParams& p, std::size_t i,
                                               EvalPath path) {
  p.validate();
  check_coordinate(p, i);
  switch (p.law) {
    case Law::frac_gamma: {
      auto table = FracGammaLogPdf::cached(p.shapes[0], p.order);
      const double s = std::pow(p.rate, 1 / p.order);
      return [table, s](double x) { return x > 0 ? s * std::exp((*table)(s * x)) : 0.0; };
    }
    case Law::gen_gamma: {
      const double a = p.shapes[0], nu = p.order;
      return [a, nu](double x) { return x > 0 ? gen_gamma_pdf(a, nu, x) : 0.0; };
    }
    case Law::frac_dirichlet: {
      const FracDirParams fd = FracDirParams::make(p.order, p.shapes);
      return [fd, i, path](double q) {
        if (!(q > 0 && q < 1)) return 0.0;
        return frac_dirichlet_marginal(fd, i, q, path).value;
      };
    }
    case Law::gdir: {
      const LawParams o = gdir_ordered(p, i);
      const GdirParams g = GdirParams::make(o.order, o.shapes);
      return [g](double q) { return q > 0 && q < 1 ? gdir2_marginal_pdf(g, q) : 0.0; };
    }
  }
  throw DomainError("unknown law");
}

std::optional<std::function<double(double)>> closed_form_cdf(const LawParams& p,
                                                             std::size_t i) {
  p.validate();
  check_coordinate(p, i);
  switch (p.law) {
    case Law::frac_gamma:
      if (p.order != 1) return std::nullopt;
      return [b = p.shapes[0], r = p.rate](double x) {
        return x > 0 ? boost::math::gamma_p(b, r * x) : 0.0;
      };
    case Law::gen_gamma:
      return [a = p.shapes[0], nu = p.order](double x) {
        return x > 0 ? boost::math::gamma_p(a, std::pow(x, nu)) : 0.0;
      };
    case Law::frac_dirichlet: {
      if (p.order != 1) return std::nullopt;
      const double a = p.shapes[i];
      const double b = compensated_sum(p.shapes) - a;
      return [a, b](double q) {
        if (!(q > 0)) return 0.0;
        if (q >= 1) return 1.0;
        return boost::math::ibeta(a, b, q);
      };
    }
    case Law::gdir: {
      const LawParams o = gdir_ordered(p, i);
      const GdirParams g = GdirParams::make(o.order, o.shapes);
      return [g](double q) {
        if (!(q > 0)) return 0.0;
        if (q >= 1) return 1.0;
        return gdir2_marginal_cdf(g, q);
      };
    }
  }
  return std::nullopt;
}

double marginal_l1_distance(const LawParams& a, const LawParams& b, std::size_t i,
                            const QuadSpec& spec) {
  if (a.is_simplex() != b.is_simplex()) throw DomainError("laws have different supports");
  const auto f = marginal_density(a, i);
  const auto g = marginal_density(b, i);
  const Integrand h = [&](double x) { return std::abs(f(x) - g(x)); };
  const QuadResult r =
      a.is_simplex() ? integrate_unit_interval(h, spec) : integrate_semi_infinite(h, spec);
  if (!r.converged) {
    throw NonConvergenceError("L1 distance quadrature did not converge", r.value,
                              r.error_estimate);
  }
  return r.value;
}

PdfTable pdf_table(const LawParams& p, std::span<const double> grid, EvalPath path,
                   std::size_t coordinate) {
  p.validate();
  check_coordinate(p, coordinate);
  PdfTable out;
  std::vector<double> xs(grid.begin(), grid.end());
  std::vector<double> ys(xs.size());
  std::vector<std::string> paths;
  const bool fd = p.law == Law::frac_dirichlet;
  for (double x : xs) {
    const bool inside = p.is_simplex() ? (x > 0 && x < 1) : (x > 0 && std::isfinite(x));
    if (!inside) throw DomainError("grid point " + format_double(x) + " outside the support");
  }
  std::function<double(double)> density;
  if (!fd) density = marginal_density(p, coordinate, path);
  const FracDirParams fdp = fd ? FracDirParams::make(p.order, p.shapes) : FracDirParams{};
  for (std::size_t k = 0; k < xs.size(); ++k) {
    try {
      if (fd) {
        const MarginalValue v = frac_dirichlet_marginal(fdp, coordinate, xs[k], path);
        ys[k] = v.value;
        paths.emplace_back(to_string(v.path));
      } else {
        ys[k] = density(xs[k]);
      }
    } catch (const NonConvergenceError&) {
      ys[k] = std::numeric_limits<double>::quiet_NaN();
      paths.emplace_back("failed");
      ++out.failures;
    } catch (const EvaluationError&) {
      ys[k] = std::numeric_limits<double>::quiet_NaN();
      paths.emplace_back("failed");
      ++out.failures;
    }
  }
  out.table.add(p.is_simplex() ? "q" : "x", std::move(xs)).add("pdf", std::move(ys));
  if (fd) out.table.add_text("path", std::move(paths));
  return out;
}

Comparison compare_to_theory(const SampleBatch& batch, std::size_t bins,
                             const std::optional<LawParams>& theory, std::size_t coordinate,
                             EvalPath path) {
  if (bins < 2) throw DomainError("bins must be at least 2");
  if (batch.count < 1) throw DomainError("empty batch");
  const LawParams tp = theory.value_or(batch.params);
  tp.validate();
  if (tp.is_simplex() != batch.params.is_simplex() || tp.dimension() != batch.dim) {
    throw DomainError("theory law and sample have different supports");
  }
  check_coordinate(tp, coordinate);
  const std::vector<double> col = batch.column(coordinate);
  const bool simplex = tp.is_simplex();
  const auto density = marginal_density(tp, coordinate, path);

  std::function<double(double)> cdf;
  double total = 1;
  if (auto closed = closed_form_cdf(tp, coordinate)) {
    cdf = *closed;
  } else {
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    const double a = std::max(*mn, std::numeric_limits<double>::min());
    double b = *mx;
    if (simplex) b = std::min(b, std::nextafter(1.0, 0.0));
    auto tab = std::make_shared<TabulatedCdf>(
        density, simplex ? Support::unit_interval : Support::positive, a, std::max(a, b));
    total = tab->total_mass();
    cdf = [tab](double x) { return (*tab)(x); };
  }

  const double hi = simplex ? 1.0 : quantile(col, 0.99);
  Histogram h(0.0, hi, bins);
  for (double x : col) h.add(x);
  const double n = static_cast<double>(col.size());
  std::vector<double> observed(h.counts), expected(bins);
  double prev = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double next = (simplex && k + 1 == bins) ? total : cdf(h.edge(k + 1));
    expected[k] = n * std::max(0.0, next - prev);
    prev = next;
  }
  if (!simplex) {
    observed.push_back(h.overflow);
    expected.push_back(n * std::max(0.0, total - prev));
  }

  Comparison c;
  const ChiSquareResult chi = chi_square(observed, expected);
  const TestResult ks = ks_one_sample(col, cdf);
  double l1 = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) l1 += std::abs(observed[k] - expected[k]) / n;
  c.report = {ks.statistic, ks.p_value, chi.statistic, chi.p_value, chi.dof, l1, col.size()};
  c.report.validate();

  std::vector<double> centers(bins), emp(bins), theo(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    centers[k] = h.center(k);
    emp[k] = h.density(k);
    try {
      theo[k] = density(centers[k]);
    } catch (const NonConvergenceError&) {
      theo[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  c.bins.add("bin_center", std::move(centers))
      .add("empirical_density", std::move(emp))
      .add("theoretical_density", std::move(theo));
  if (theory && (theory->law != batch.params.law || theory->order != batch.params.order ||
                 theory->shapes != batch.params.shapes || theory->rate != batch.params.rate)) {
    c.theory_l1 = marginal_l1_distance(batch.params, tp, coordinate);
  }
  return c;
}

void write_table(const std::filesystem::path& out, OutputFormat format, const Table& t,
                 const std::optional<LawParams>& params,
                 const std::optional<std::uint64_t>& seed, const std::string& rows_key,
                 const nlohmann::json& extra) {
  std::ostringstream s;
  if (format == OutputFormat::csv) {
    write_csv(t, s);
  } else {
    JsonDocument doc;
    doc.params = params;
    doc.seed = seed;
    doc.table = t;
    doc.rows_key = rows_key;
    doc.extra = extra;
    write_json(doc, s);
  }
  write_file(out, s.str());
}

Table read_table(const std::filesystem::path& in) {
  std::istringstream s(read_file(in));
  if (in.extension() == ".json") return read_json(s).table;
  return read_csv(s);
}

SampleBatch cmd_sample(const ExperimentConfig& config) {
  config.validate();
  RngState rng(config.seed);
  SampleBatch b = sample_batch(config.params, config.count, rng,
                               resolve_threads(config.threads), config.gdir_path);
  write_table(config.output_path, config.format, sample_table(b), config.params, config.seed,
              "points");
  return b;
}

PdfTable cmd_pdf(const LawParams& p, const GridSpec& grid, EvalPath path,
                 const std::filesystem::path& out, OutputFormat format) {
  const std::vector<double> x = grid.points();
  PdfTable t = pdf_table(p, x, path);
  write_table(out, format, t.table, p, std::nullopt);
  return t;
}

Comparison cmd_compare(const ExperimentConfig& config, const std::optional<LawParams>& theory) {
  config.validate();
  RngState rng(config.seed);
  const SampleBatch b = sample_batch(config.params, config.count, rng,
                                     resolve_threads(config.threads), config.gdir_path);
  Comparison c = compare_to_theory(b, config.bins, theory, 0, config.path);
  nlohmann::json extra;
  extra["report"] = c.report.to_json();
  if (theory) {
    extra["theory_law"] = to_string(theory->law);
    extra["theory_params"] = law_params_json(*theory);
  }
  if (c.theory_l1) extra["theory_l1_distance"] = *c.theory_l1;
  write_table(config.output_path, config.format, c.bins, config.params, config.seed, "rows",
              extra);
  if (config.format == OutputFormat::csv) {
    Table r;
    const GofReport& g = c.report;
    r.add("ks_statistic", {g.ks_statistic})
        .add("ks_p_value", {g.ks_p_value})
        .add("chi2_statistic", {g.chi2_statistic})
        .add("chi2_p_value", {g.chi2_p_value})
        .add("chi2_dof", {static_cast<double>(g.chi2_dof)})
        .add("l1_distance", {g.l1_distance})
        .add("sample_count", {static_cast<double>(g.sample_count)});
    if (c.theory_l1) r.add("theory_l1_distance", {*c.theory_l1});
    std::filesystem::path rp = config.output_path;
    rp += ".report.csv";
    write_table(rp, OutputFormat::csv, r, std::nullopt, std::nullopt);
  }
  return c;
}

LawParams figure_params(int id, Law law) {
  LawParams p;
  p.law = law;
  switch (id) {
    case 1: p.order = 0.7; p.shapes = {2, 3}; break;
    case 2: p.order = 0.7; p.shapes = {0.2, 0.4}; break;
    case 3:
    case 4: p.order = 0.95; p.shapes = {10, 30}; break;
    default: throw DomainError("figures 1-4 have simplex parameter sets");
  }
  return p;
}

std::vector<std::filesystem::path> cmd_figure(int id, const std::filesystem::path& dir,
                                              const FigureOptions& options) {
  if (id < 1 || id > 5) throw DomainError("figure id must be 1-5");
  if (options.count < 1 || options.bins < 2 || options.grid_points < 2) {
    throw DomainError("figure needs count >= 1, bins >= 2, grid_points >= 2");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  const std::string ext = extension(options.format);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const Table& t, const LawParams& p,
                  std::optional<std::uint64_t> seed) {
    const auto path = dir / (name + ext);
    write_table(path, options.format, t, p, seed);
    written.push_back(path);
  };

  if (id == 5) {
    for (double beta : {0.2, 0.4, 2.0, 3.0}) {
      std::vector<double> x(options.grid_points);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = 10.0 * (k + 0.5) / x.size();
      const LawParams fg{Law::frac_gamma, 0.7, {beta}, 1.0};
      const LawParams gg{Law::gen_gamma, 0.7, {beta}, 1.0};
      const std::string tag = "_beta" + short_number(beta);
      emit("fg" + tag, pdf_table(fg, x).table, fg, std::nullopt);
      emit("gengamma" + tag, pdf_table(gg, x).table, gg, std::nullopt);
    }
    return written;
  }

  // Figure 4 is the log-log view of the figure 3 data.
  const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(id == 4 ? 3 : id);
  std::vector<double> grid(options.grid_points);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = (k + 0.5) / grid.size();
  const std::pair<Law, const char*> laws[] = {{Law::frac_dirichlet, "fd"}, {Law::gdir, "gdir"}};
  std::uint64_t stream = 0;
  for (const auto& [law, name] : laws) {
    const LawParams p = figure_params(id, law);
    RngState rng(seed, stream++);
    const SampleBatch b = sample_batch(p, options.count, rng, resolve_threads(options.threads));
    Histogram h(0.0, 1.0, options.bins);
    for (double q : b.column(0)) h.add(q);
    Table mc = histogram_table(h);
    Table theory = pdf_table(p, grid).table;
    if (id == 4) {
      mc = log_log(mc, "bin_center", "density");
      theory = log_log(theory, "q", "pdf");
    }
    emit(std::string(name) + "_mc", mc, p, seed);
    emit(std::string(name) + "_theory", theory, p, std::nullopt);
  }
  return written;
}

std::vector<std::int64_t> parse_counts(std::string_view text) {
  std::vector<std::int64_t> counts;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && sep(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !sep(text[j])) ++j;
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data() + i, text.data() + j, v);
    if (res.ec != std::errc() || res.ptr != text.data() + j || v < 0) {
      throw DomainError("counts must be nonnegative integers");
    }
    counts.push_back(v);
    i = j;
  }
  if (counts.empty()) throw DomainError("no counts given");
  return counts;
}

GdirParams cmd_posterior(const GdirParams& prior, std::span<const std::int64_t> counts,
                         const std::filesystem::path& out) {
  const GdirParams post = gdir_posterior(prior, counts);
  nlohmann::ordered_json j;
  j["schema_version"] = JsonDocument::kSchemaVersion;
  j["law"] = to_string(Law::gdir);
  j["params"] = {{"nu", post.order}, {"shapes", post.shapes}};
  write_file(out, j.dump(1) + "\n");
  return post;
}

}  // namespace fracdir
