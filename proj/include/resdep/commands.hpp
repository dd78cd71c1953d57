#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resdep/error.hpp"
#include "resdep/ingest.hpp"
#include "resdep/pseudo_obs.hpp"
#include "resdep/report_io.hpp"
#include "resdep/study_config.hpp"

/// Subcommand bodies behind the `resdep` executable. Each throws a
/// resdep::Error subclass on failure; exit_code_for maps it to 2, 3 or 4.
namespace resdep {

int exit_code_for(const Error& error) noexcept;

struct SimulateOptions {
  std::string config_path;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  ReportFormat format = ReportFormat::CSV;
};

/// Loads the study file, applies the seed/thread overrides, runs and writes
/// the report. A one-line provenance summary goes to `log`.
void run_simulate(const SimulateOptions& options, std::ostream& log);

struct DataOptions {
  IngestionSpec ingest;
  RankOptions ranks;
};

/// Ingests and ranks; writes the filtering summary to `log`.
PseudoSample load_pseudo_sample(const DataOptions& options, std::ostream& log);

struct EstimateOptions {
  DataOptions data;
  std::vector<double> q_list{0.5, 1.0, 1.5};
  double k_max = 0.3;  // largest k as a fraction of n
  Margin margin = Margin::FrechetShifted;
  ParamFamily parametrization = ParamFamily::ConjugateQ;
  bool reduce_bias = false;
  KStarRule kstar{};
  std::optional<double> tau;
  std::optional<double> beta;
  std::size_t k0 = 0;  // 0: floor(n^0.999)
  double level = 0.95;
};

/// Header of the estimate output.
inline constexpr std::string_view kEstimateHeader =
    "q,k,k_over_n,eta,ci_low,ci_high,margin,reduced";

/// Writes one row per (q, k) for k = 1..floor(k_max n), q = 1 always
/// included. With reduce_bias, reduced-bias rows (shifted Frechet margin)
/// follow the raw rows. Per-row failures leave fields empty.
void run_estimate(const EstimateOptions& options, std::ostream& out,
                  std::ostream& log);

struct SecondOrderOptions {
  DataOptions data;
  std::size_t k0 = 0;
};

/// Writes "n,k0,tau_hat,beta_hat" and one data row.
void run_second_order(const SecondOrderOptions& options, std::ostream& out,
                      std::ostream& log);

struct OracleOptions {
  std::size_t n = 50;
  std::uint64_t seed = 1;
};

/// Checks, on a random tie-free sample of size n <= 100, the joint
/// exceedance identity against an O(n^2) recount for every level m and m_ab
/// against a direct power-sum loop for every k. Returns true when all hold
/// to 1e-12.
bool run_oracle(const OracleOptions& options, std::ostream& out);

}  // namespace resdep
