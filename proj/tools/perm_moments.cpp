// perm-moments: exact permutation moments of Pearson's r from a CSV file.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "permmoments/commands.hpp"

int main(int argc, char** argv) {
  using namespace pm::cli;

  CLI::App app{"Moments of Pearson's r over all permutations of a bivariate dataset"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = default_threads();
  std::string delimiter = ",";
  bool no_header = false;
  std::uint64_t samples = 0;
  double tolerance = 0;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) {
      sub->add_option("--input", cfg.input, "CSV file ('-' for stdin)");
      sub->add_option("--delimiter", delimiter, "CSV field delimiter");
      sub->add_flag("--no-header", no_header, "first line is data, not column names");
      sub->add_option("--x-col", cfg.csv.x_col, "x column name or 0-based index");
      sub->add_option("--y-col", cfg.csv.y_col, "y column name or 0-based index");
    }
    sub->add_option("--k-max", cfg.k_max, "highest moment order")->capture_default_str();
    sub->add_option("--method", cfg.method,
                    "auto | induction | closed-form | brute-force | monte-carlo")
        ->capture_default_str();
    sub->add_option("--samples", samples, "Monte-Carlo permutation samples");
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (default $PERM_MOMENTS_THREADS or 1)");
    sub->add_option("--format", cfg.format, "json | csv")->capture_default_str();
    sub->add_option("--tolerance", tolerance, "agreement tolerance / MSE bound");
    sub->add_flag("--exact-arith", cfg.exact, "exact rational arithmetic");
    sub->add_flag("--allow-high-order", cfg.allow_high_order,
                  "permit --k-max above 5 (recursion-only orders)");
  };

  auto* moments = app.add_subcommand("moments", "analytic moments <r^k>, k = 1..k_max");
  add_common(moments, true);
  auto* validate = app.add_subcommand("validate", "MSE grid of induction vs brute force");
  add_common(validate, false);
  validate->add_option("--trials", cfg.trials, "random datasets per n")->capture_default_str();
  validate->add_option("--n-set", cfg.n_set, "sample sizes")->delimiter(',');
  validate->add_option("--generator", cfg.generator, "normal | uniform | heavy-tailed")
      ->capture_default_str();
  auto* compare = app.add_subcommand("compare", "cross-check all methods on one dataset");
  add_common(compare, true);
  auto* pvalue = app.add_subcommand("pvalue", "two-sided permutation p-value");
  add_common(pvalue, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  if (delimiter.size() != 1) {
    std::cerr << "error: --delimiter must be a single character\n";
    return kExitInvalidInput;
  }
  cfg.csv.delimiter = delimiter == "\\t" ? '\t' : delimiter[0];
  cfg.csv.header = !no_header;
  for (auto* sub : {moments, validate, compare, pvalue}) {
    if (!sub->parsed()) continue;
    if (sub->count("--samples")) {
      if (samples < 1) {
        std::cerr << "error: --samples must be >= 1\n";
        return kExitInvalidInput;
      }
      cfg.samples = samples;
    }
    if (sub->count("--tolerance")) cfg.tolerance = tolerance;
  }

  if (moments->parsed()) return cmd_moments(cfg, std::cout, std::cerr);
  if (validate->parsed()) return cmd_validate(cfg, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(cfg, std::cout, std::cerr);
  return cmd_pvalue(cfg, std::cout, std::cerr);
}
