#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "resdep/sim_harness.hpp"

namespace resdep {

enum class ReportFormat { CSV, JSONLines };

ReportFormat parse_report_format(std::string_view name);

/// CSV header, in column order.
inline constexpr std::string_view kReportHeader =
    "estimator,margin,q,a,b,k,k_over_n,kstar,mean,bias,variance,mse,n_ok,n_fail";

/// CSV: the header, then one row per cell in report order. Reals are written
/// in shortest round-trip form; unavailable values are empty fields.
///
/// JSONLines: a provenance object (seed, config hash, canonical config,
/// model, n, N, true eta) followed by one object per cell with the CSV
/// fields plus "flagged". Unavailable values are null.
void emit_report(const SimulationReport& report, ReportFormat format,
                 std::ostream& out);

/// Writes to a file; "-" means stdout. Throws IoError naming the path.
void write_report(const SimulationReport& report, ReportFormat format,
                  const std::string& path);

/// Parses CSV written by emit_report back into cells. Provenance is not part
/// of the CSV and flagged is recomputed from the counts. Throws ParseError.
std::vector<CellStats> parse_report_csv(std::istream& in);

}  // namespace resdep
