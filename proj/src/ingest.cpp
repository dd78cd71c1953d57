#include "resdep/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "resdep/error.hpp"
#include "resdep/text.hpp"

namespace resdep {

void IngestionSpec::validate() const {
  if (!(quantile_filter >= 0.0 && quantile_filter < 1.0)) {
    throw ParameterError("quantile filter must lie in [0, 1)");
  }
  if (!(dry_threshold >= 0.0)) throw ParameterError("dry threshold must be non-negative");
  if (date_filter && !date_column) {
    throw ParameterError("a date filter needs a date column");
  }
}

std::optional<double> empirical_quantile(std::vector<double> values, double p) {
  if (p <= 0.0 || values.empty()) return std::nullopt;
  const auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(values.size()) * p));
  const std::size_t idx = std::min(rank, values.size()) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
  return values[idx];
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ParseError(path + ": column '" + name + "' not found in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

double parse_cell(const std::string& cell, std::size_t line, const std::string& path) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(path + ": row " + std::to_string(line) + ": non-numeric value '" + cell + "'");
  }
  return v;
}

bool date_passes(const DateFilter& f, const std::string& date) {
  if (!f.months.empty()) {
    if (date.size() < 7) return false;
    int month = 0;
    auto [ptr, ec] = std::from_chars(date.data() + 5, date.data() + 7, month);
    if (ec != std::errc()) return false;
    if (std::find(f.months.begin(), f.months.end(), month) == f.months.end()) return false;
  }
  const std::string day = date.substr(0, 10);
  if (f.from && day < *f.from) return false;
  if (f.to && day > *f.to) return false;
  return true;
}

struct Row {
  double x;
  double y;
  std::string label;
};

}  // namespace

IngestionResult ingest(const IngestionSpec& spec) {
  spec.validate();
  std::ifstream in(spec.path);
  if (!in) throw IoError("cannot open data file '" + spec.path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(spec.path + ": empty file");
  const auto header = split_csv_line(line);
  const std::size_t xi = column_index(header, spec.x_column, spec.path);
  const std::size_t yi = column_index(header, spec.y_column, spec.path);
  std::optional<std::size_t> di;
  if (spec.date_column) di = column_index(header, *spec.date_column, spec.path);

  const auto is_na = [&](const std::string& s) {
    return std::find(spec.na_tokens.begin(), spec.na_tokens.end(), s) != spec.na_tokens.end();
  };

  IngestionSummary summary;
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++summary.rows;
    const auto cells = split_csv_line(line);
    const std::size_t need = std::max({xi, yi, di.value_or(0)}) + 1;
    if (cells.size() < need) {
      throw ParseError(spec.path + ": row " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(need) + " fields");
    }
    if (is_na(cells[xi]) || is_na(cells[yi])) continue;
    ++summary.after_na;
    Row row{parse_cell(cells[xi], line_no, spec.path), parse_cell(cells[yi], line_no, spec.path),
            di ? cells[*di] : std::to_string(summary.rows)};
    if (spec.date_filter && !date_passes(*spec.date_filter, row.label)) continue;
    ++summary.after_date;
    if (row.x < spec.dry_threshold || row.y < spec.dry_threshold) continue;
    ++summary.after_dry;
    rows.push_back(std::move(row));
  }

  if (spec.quantile_filter > 0.0 && !rows.empty()) {
    std::vector<double> xs, ys;
    for (const Row& r : rows) {
      xs.push_back(r.x);
      ys.push_back(r.y);
    }
    summary.x_quantile = empirical_quantile(std::move(xs), spec.quantile_filter);
    summary.y_quantile = empirical_quantile(std::move(ys), spec.quantile_filter);
    const double qx = *summary.x_quantile;
    const double qy = *summary.y_quantile;
    std::erase_if(rows, [&](const Row& r) {
      const bool hx = r.x > qx;
      const bool hy = r.y > qy;
      return spec.either ? !(hx || hy) : !(hx && hy);
    });
  }
  summary.retained = rows.size();
  if (rows.size() < kMinIngestRows) {
    throw InsufficientDataError(spec.path + ": only " + std::to_string(rows.size()) +
                                " rows left after filtering (need at least " +
                                std::to_string(kMinIngestRows) + ")");
  }

  IngestionResult result;
  result.summary = summary;
  for (Row& r : rows) {
    result.sample.x.push_back(r.x);
    result.sample.y.push_back(r.y);
    result.sample.labels.push_back(std::move(r.label));
  }
  return result;
}

}  // namespace resdep
