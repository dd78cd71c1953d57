#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resdep/sample.hpp"

namespace resdep {

/// Optional restriction on an ISO date column (YYYY-MM-DD...). months holds
/// 1..12; from/to are inclusive string bounds compared on the date prefix.
struct DateFilter {
  std::vector<int> months;
  std::optional<std::string> from;
  std::optional<std::string> to;
};

struct IngestionSpec {
  std::string path;
  std::string x_column = "x";
  std::string y_column = "y";
  std::optional<std::string> date_column;
  std::vector<std::string> na_tokens{"", "NA", "NaN", "nan", "-"};
  double dry_threshold = 1.0;
  double quantile_filter = 0.90;
  std::optional<DateFilter> date_filter;
  /// Keep rows where either value exceeds its quantile instead of both.
  bool either = false;

  /// Throws ParameterError unless 0 <= quantile_filter < 1 and
  /// dry_threshold >= 0.
  void validate() const;
};

/// Row counts after each filtering stage.
struct IngestionSummary {
  std::size_t rows = 0;
  std::size_t after_na = 0;
  std::size_t after_date = 0;
  std::size_t after_dry = 0;
  std::size_t retained = 0;
  std::optional<double> x_quantile;
  std::optional<double> y_quantile;
};

struct IngestionResult {
  BivariateSample sample;
  IngestionSummary summary;
};

/// Minimum rows kept after filtering.
inline constexpr std::size_t kMinIngestRows = 50;

/// Empirical p-quantile: the order statistic of rank ceil(n p) (1-based) of
/// the values. Empty for p = 0.
std::optional<double> empirical_quantile(std::vector<double> values, double p);

/// Reads a comma-separated file with a header row and applies, in order:
///  1. drop rows whose x or y cell is an NA token;
///  2. the date filter, if any;
///  3. drop rows where either value is below dry_threshold;
///  4. keep rows where both values are strictly above their marginal
///     empirical quantile_filter quantiles, computed on the rows left after
///     step 3 (either value with `either`). Skipped when quantile_filter = 0.
///
/// Labels are the date cells when a date column is given, otherwise the
/// 1-based data row numbers. Throws IoError, ParseError (with the line
/// number) for non-numeric cells or missing columns, and
/// InsufficientDataError when fewer than 50 rows remain.
IngestionResult ingest(const IngestionSpec& spec);

/// Splits one CSV line. Double-quoted fields may contain commas and "" for a
/// literal quote.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace resdep
