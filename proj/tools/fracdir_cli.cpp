// Command-line front end for the experiment harness.
//
// Exit codes: 0 success, 2 I/O failure, 3 invalid parameters, 4 numerical
// non-convergence.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracdir/error.hpp"
#include "fracdir/harness.hpp"
#include "fracdir/mlf.hpp"

namespace {

using namespace fracdir;

constexpr int kExitIo = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitNumeric = 4;

struct LawOptions {
  std::string law = "gdir";
  double nu = 1;
  std::vector<double> beta;
  double lambda = 1;

  LawParams params() const {
    LawParams p;
    p.law = parse_law(law);
    p.order = nu;
    p.shapes = beta;
    p.rate = lambda;
    p.validate();
    return p;
  }
};

void add_law_options(CLI::App* cmd, LawOptions& o) {
  cmd->add_option("--law", o.law, "frac_gamma, gen_gamma, frac_dirichlet or gdir")
      ->capture_default_str();
  cmd->add_option("--nu", o.nu, "order")->capture_default_str();
  cmd->add_option("--beta", o.beta, "shape(s), comma separated")->delimiter(',')->required();
  cmd->add_option("--lambda", o.lambda, "rate (frac_gamma only)")->capture_default_str();
}

GdirPath parse_gdir_path(const std::string& s) {
  if (s == "dirichlet") return GdirPath::dirichlet_transform;
  if (s == "gengamma") return GdirPath::gen_gamma;
  throw DomainError("unknown GDIR sampler '" + s + "'");
}

void print_report(const Comparison& c) {
  const GofReport& r = c.report;
  std::cout << "ks_statistic " << format_double(r.ks_statistic) << "\n"
            << "ks_p_value " << format_double(r.ks_p_value) << "\n"
            << "chi2_statistic " << format_double(r.chi2_statistic) << "\n"
            << "chi2_p_value " << format_double(r.chi2_p_value) << "\n"
            << "chi2_dof " << r.chi2_dof << "\n"
            << "l1_distance " << format_double(r.l1_distance) << "\n"
            << "sample_count " << r.sample_count << "\n";
  if (c.theory_l1) std::cout << "theory_l1_distance " << format_double(*c.theory_l1) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Fractional Dirichlet / generalized Dirichlet experiment harness"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::string format = "csv";
  std::string out;
  unsigned threads = 0;

  // sample
  LawOptions sample_law;
  std::size_t sample_count = 1000;
  std::string gdir_path = "dirichlet";
  auto* sample = app.add_subcommand("sample", "draw a batch and write it");
  add_law_options(sample, sample_law);
  sample->add_option("--count", sample_count)->capture_default_str();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--out", out)->required();
  sample->add_option("--format", format)->capture_default_str();
  sample->add_option("--threads", threads, "0 = all cores");
  sample->add_option("--gdir-sampler", gdir_path, "dirichlet or gengamma")->capture_default_str();

  // pdf
  LawOptions pdf_law;
  std::string grid;
  std::string path = "auto";
  auto* pdf = app.add_subcommand("pdf", "evaluate a density on a grid");
  add_law_options(pdf, pdf_law);
  pdf->add_option("--grid", grid, "start:stop:steps")->required();
  pdf->add_option("--path", path, "series, quadrature or auto")->capture_default_str();
  pdf->add_option("--out", out)->required();
  pdf->add_option("--format", format)->capture_default_str();

  // compare
  LawOptions cmp_law;
  std::size_t cmp_count = 1'000'000;
  std::size_t bins = 100;
  std::string against;
  auto* compare = app.add_subcommand("compare", "goodness of fit of a sample against a density");
  add_law_options(compare, cmp_law);
  compare->add_option("--count", cmp_count)->capture_default_str();
  compare->add_option("--seed", seed)->capture_default_str();
  compare->add_option("--bins", bins)->capture_default_str();
  compare->add_option("--against", against, "theory law (default: the sampled law)");
  compare->add_option("--path", path, "series, quadrature or auto")->capture_default_str();
  compare->add_option("--out", out)->required();
  compare->add_option("--format", format)->capture_default_str();
  compare->add_option("--threads", threads, "0 = all cores");
  compare->add_option("--gdir-sampler", gdir_path)->capture_default_str();

  // figure
  int figure_id = 1;
  FigureOptions fig;
  auto* figure = app.add_subcommand("figure", "write the data files of a figure");
  figure->add_option("id", figure_id, "1-5")->required();
  figure->add_option("--out", out, "output directory")->required();
  figure->add_option("--count", fig.count)->capture_default_str();
  figure->add_option("--bins", fig.bins)->capture_default_str();
  figure->add_option("--grid-points", fig.grid_points)->capture_default_str();
  figure->add_option("--seed", seed)->capture_default_str();
  figure->add_option("--format", format)->capture_default_str();
  figure->add_option("--threads", threads, "0 = all cores");

  // posterior
  double post_nu = 1;
  std::vector<double> post_beta;
  std::string prior_file, counts_file;
  auto* posterior = app.add_subcommand("posterior", "conjugate update of a GDIR prior");
  posterior->add_option("--nu", post_nu);
  posterior->add_option("--beta", post_beta)->delimiter(',');
  posterior->add_option("--prior", prior_file, "JSON file from a previous update");
  posterior->add_option("--counts", counts_file, "file of nonnegative integers")->required();
  posterior->add_option("--out", out)->required();

  // mlf
  double alpha = 1, mbeta = 1, delta = 1;
  std::vector<double> zs;
  auto* mlf = app.add_subcommand("mlf", "three-parameter Mittag-Leffler function");
  mlf->add_option("--alpha", alpha)->required();
  mlf->add_option("--beta", mbeta)->required();
  mlf->add_option("--delta", delta)->capture_default_str();
  mlf->add_option("--z", zs, "argument(s), comma separated")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (sample->parsed()) {
    ExperimentConfig c;
    c.params = sample_law.params();
    c.count = sample_count;
    c.seed = seed;
    c.output_path = out;
    c.format = parse_format(format);
    c.threads = threads;
    c.gdir_path = parse_gdir_path(gdir_path);
    const SampleBatch b = cmd_sample(c);
    std::cerr << "wrote " << b.count << " draws to " << out << "\n";
    return 0;
  }
  if (pdf->parsed()) {
    const PdfTable t = cmd_pdf(pdf_law.params(), GridSpec::parse(grid), parse_eval_path(path),
                               out, parse_format(format));
    if (t.failures > 0) {
      std::cerr << t.failures << " grid point(s) failed to converge; flagged in " << out << "\n";
      return kExitNumeric;
    }
    return 0;
  }
  if (compare->parsed()) {
    ExperimentConfig c;
    c.params = cmp_law.params();
    c.count = cmp_count;
    c.seed = seed;
    c.bins = bins;
    c.output_path = out;
    c.format = parse_format(format);
    c.threads = threads;
    c.path = parse_eval_path(path);
    c.gdir_path = parse_gdir_path(gdir_path);
    std::optional<LawParams> theory;
    if (!against.empty()) {
      LawParams t = c.params;
      t.law = parse_law(against);
      t.validate();
      theory = t;
    }
    print_report(cmd_compare(c, theory));
    return 0;
  }
  if (figure->parsed()) {
    fig.seed = seed;
    fig.format = parse_format(format);
    fig.threads = threads;
    for (const auto& p : cmd_figure(figure_id, out, fig)) std::cout << p.string() << "\n";
    return 0;
  }
  if (posterior->parsed()) {
    GdirParams prior;
    if (!prior_file.empty()) {
      const nlohmann::json j = nlohmann::json::parse(read_file(prior_file), nullptr, false);
      if (j.is_discarded() || !j.contains("params")) throw IoError("malformed prior file");
      const LawParams lp = law_params_from_json(j.at("params"));
      prior = GdirParams::make(lp.order, lp.shapes);
    } else {
      prior = GdirParams::make(post_nu, post_beta);
    }
    const auto counts = parse_counts(read_file(counts_file));
    const GdirParams post = cmd_posterior(prior, counts, out);
    std::cout << "nu " << format_double(post.order) << "\nshapes";
    for (double b : post.shapes) std::cout << " " << format_double(b);
    std::cout << "\n";
    return 0;
  }
  if (mlf->parsed()) {
    const PrabhakarParams p{alpha, mbeta, delta};
    std::cout << "z,value,method\n";
    for (double z : zs) {
      const MlValue v = ml3_eval(p, z);
      std::cout << format_double(z) << "," << format_double(v.value()) << ","
                << to_string(v.method) << "\n";
    }
    return 0;
  }
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fracdir::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fracdir::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const fracdir::EvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const fracdir::IntegrandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const fracdir::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
