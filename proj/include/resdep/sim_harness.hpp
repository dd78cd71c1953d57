#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resdep/study_config.hpp"

namespace resdep {

/// One aggregation cell. Reduced-bias cells always use the shifted Frechet
/// margin.
struct CellKey {
  EstimatorKind estimator = EstimatorKind::Raw;
  Margin margin = Margin::ParetoT;
  double q = 1.0;
  double a = 0.0;
  double b = 0.0;
  std::size_t k = 1;
};

/// Row order of a report: lexicographic on (estimator name, margin name, q,
/// a, b, k).
bool cell_less(const CellKey& lhs, const CellKey& rhs);

/// Single-pass mean / variance accumulator (Welford update, Chan merge)
/// plus a separately summed squared error against a fixed truth.
class Accumulator {
 public:
  void add(double x, std::optional<double> truth);
  void add_failure() { ++failures_; }
  void merge(const Accumulator& other);

  std::size_t count() const noexcept { return count_; }
  std::size_t failures() const noexcept { return failures_; }
  double mean() const noexcept { return mean_; }
  /// Population variance (divisor count).
  double variance() const noexcept;
  /// Mean squared error against the truth passed to add.
  double mse() const noexcept;

 private:
  std::size_t count_ = 0;
  std::size_t failures_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sse_ = 0.0;
};

struct CellStats {
  CellKey key;
  double k_over_n = 0.0;
  std::size_t kstar = 0;  // 0 for raw estimators
  std::optional<double> mean;
  std::optional<double> bias;
  std::optional<double> variance;
  std::optional<double> mse;
  std::size_t n_ok = 0;
  std::size_t n_fail = 0;
  /// More than 10% of replicates failed.
  bool flagged = false;
};

struct SimulationReport {
  std::vector<CellStats> cells;
  std::uint64_t master_seed = 0;
  std::uint64_t config_hash = 0;
  std::string config_canonical;
  std::string model;
  std::size_t n = 0;
  std::size_t N = 0;
  std::optional<double> true_eta;
  /// Replicates where (tau, beta) estimation failed (PerReplicate mode).
  std::size_t second_order_failures = 0;
};

/// Every cell of the study, in report order.
std::vector<CellKey> study_cells(const StudyConfig& config);

/// Values of every cell on replicate r; empty entries are failures.
struct ReplicateResult {
  std::vector<std::optional<double>> values;
  bool second_order_failed = false;
};
ReplicateResult run_replicate(const StudyConfig& config,
                              const std::vector<CellKey>& cells,
                              std::size_t r);

/// Runs the study. Replicates are processed in fixed blocks on
/// config.threads workers and merged along a fixed tree, so the report is
/// bit-identical for any thread count.
SimulationReport run_study(const StudyConfig& config);

}  // namespace resdep
