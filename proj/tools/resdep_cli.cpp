#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "resdep/commands.hpp"
#include "resdep/error.hpp"
#include "resdep/text.hpp"

namespace {

using namespace resdep;

std::vector<double> parse_q_list(const std::string& text) { return parse_q_grid(text); }

TiePolicy parse_tie_policy(const std::string& s) {
  if (s == "first") return TiePolicy::FirstOccurrence;
  if (s == "strict") return TiePolicy::Strict;
  if (s == "jitter") return TiePolicy::Jitter;
  throw UsageError("unknown tie policy '" + s + "' (first, strict, jitter)");
}

/// Flags shared by the commands that read a data file.
struct DataFlags {
  std::string data;
  std::string x = "x";
  std::string y = "y";
  std::string date_col;
  std::string months;
  std::string from;
  std::string to;
  std::string na;
  double dry = 1.0;
  double quantile = 0.9;
  bool either = false;
  std::string ties = "first";
  std::uint64_t jitter_seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--data", data, "Input CSV with a header row")->required();
    app->add_option("--x", x, "Column name of the first variable")->capture_default_str();
    app->add_option("--y", y, "Column name of the second variable")->capture_default_str();
    app->add_option("--date-col", date_col, "Column with ISO dates (YYYY-MM-DD)");
    app->add_option("--months", months, "Keep only these months, e.g. 6,7,8");
    app->add_option("--from", from, "Keep dates on or after this day");
    app->add_option("--to", to, "Keep dates on or before this day");
    app->add_option("--na", na, "Comma-separated missing-value tokens (default: empty,NA,NaN,nan,-)");
    app->add_option("--dry", dry, "Drop rows where either value is below this")->capture_default_str();
    app->add_option("--quantile", quantile, "Marginal quantile filter in [0,1); 0 disables")
        ->capture_default_str();
    app->add_flag("--either", either, "Keep rows where either value exceeds its quantile");
    app->add_option("--ties", ties, "Tie policy: first, strict or jitter")->capture_default_str();
    app->add_option("--jitter-seed", jitter_seed, "Seed for --ties jitter")->capture_default_str();
  }

  DataOptions build() const {
    DataOptions o;
    o.ingest.path = data;
    o.ingest.x_column = x;
    o.ingest.y_column = y;
    if (!date_col.empty()) o.ingest.date_column = date_col;
    if (!months.empty() || !from.empty() || !to.empty()) {
      DateFilter f;
      if (!months.empty()) {
        for (const auto& m : split(months, ',')) {
          const auto v = parse_size(m, "month");
          if (v < 1 || v > 12) throw UsageError("months must lie in 1..12");
          f.months.push_back(static_cast<int>(v));
        }
      }
      if (!from.empty()) f.from = from;
      if (!to.empty()) f.to = to;
      o.ingest.date_filter = f;
    }
    if (!na.empty()) o.ingest.na_tokens = split(na, ',');
    o.ingest.dry_threshold = dry;
    o.ingest.quantile_filter = quantile;
    o.ingest.either = either;
    o.ranks.policy = parse_tie_policy(ties);
    o.ranks.jitter_seed = jitter_seed;
    return o;
  }
};

int dispatch(int argc, char** argv) {
  CLI::App app{"Residual dependence estimation for bivariate extremes"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo study");
  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  std::size_t sim_threads = 0;
  std::string sim_format = "csv";
  simulate->add_option("--config", sim.config_path, "Study file (key = value)")->required();
  simulate->add_option("--out", sim.out, "Output path, - for stdout")->capture_default_str();
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "Override master_seed");
  auto* threads_opt = simulate->add_option("--threads", sim_threads, "Worker threads (0: all cores)");
  simulate->add_option("--format", sim_format, "csv or jsonl")->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "Estimate eta paths from a data file");
  DataFlags est_data;
  est_data.attach(estimate);
  std::string q_text = "0.5,1,1.5";
  std::string kstar_text = "pow0.3/10";
  std::string margin_text = "frechet_shifted";
  std::string param_text = "conjugate_q";
  EstimateOptions est;
  double tau = 0.0;
  double beta = 0.0;
  std::string out_path = "-";
  estimate->add_option("--q", q_text, "q values (list or start:stop:step); 1 is always added")
      ->capture_default_str();
  estimate->add_option("--k-max", est.k_max, "Largest k as a fraction of n")->capture_default_str();
  estimate->add_flag("--reduce-bias", est.reduce_bias, "Also emit reduced-bias rows");
  estimate->add_option("--kstar", kstar_text, "k* rule: powE[/floor], sqrtk or an integer")
      ->capture_default_str();
  auto* tau_opt = estimate->add_option("--tau", tau, "Second-order tau (with --beta)");
  auto* beta_opt = estimate->add_option("--beta", beta, "Second-order beta (with --tau)");
  estimate->add_option("--k0", est.k0, "Threshold for (tau, beta) estimation (0: n^0.999)");
  estimate->add_option("--margin", margin_text, "pareto, frechet_shifted or frechet")
      ->capture_default_str();
  estimate->add_option("--parametrization", param_text, "conjugate_q or mean_of_order_p")
      ->capture_default_str();
  estimate->add_option("--level", est.level, "Confidence level")->capture_default_str();
  estimate->add_option("--out", out_path, "Output path, - for stdout")->capture_default_str();

  auto* second = app.add_subcommand("second-order", "Estimate (tau, beta) from a data file");
  DataFlags so_data;
  so_data.attach(second);
  SecondOrderOptions so;
  second->add_option("--k0", so.k0, "Threshold (0: n^0.999)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force identity checks on a random sample");
  OracleOptions orc;
  oracle->add_option("--n", orc.n, "Sample size (2..100)")->capture_default_str();
  oracle->add_option("--seed", orc.seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = sim_seed;
      if (*threads_opt) sim.threads = sim_threads;
      sim.format = parse_report_format(sim_format);
      run_simulate(sim, std::cerr);
    } else if (*estimate) {
      est.data = est_data.build();
      est.q_list = parse_q_list(q_text);
      est.kstar = parse_kstar_rule(kstar_text);
      est.margin = parse_margin(margin_text);
      if (param_text == "mean_of_order_p") est.parametrization = ParamFamily::MeanOfOrderP;
      else if (param_text != "conjugate_q") throw UsageError("unknown parametrization '" + param_text + "'");
      if (*tau_opt) est.tau = tau;
      if (*beta_opt) est.beta = beta;
      if (out_path == "-") {
        run_estimate(est, std::cout, std::cerr);
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw IoError("cannot open '" + out_path + "' for writing");
        run_estimate(est, file, std::cerr);
        file.close();
        if (!file) throw IoError("failed writing '" + out_path + "'");
      }
    } else if (*second) {
      so.data = so_data.build();
      run_second_order(so, std::cout, std::cerr);
    } else if (*oracle) {
      return run_oracle(orc, std::cout) ? 0 : static_cast<int>(ExitCode::NumericDomain);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
