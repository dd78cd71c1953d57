#include "resdep/report_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "resdep/error.hpp"
#include "resdep/text.hpp"

namespace resdep {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::CSV;
  if (name == "jsonl" || name == "jsonlines") return ReportFormat::JSONLines;
  throw UsageError("unknown report format '" + std::string(name) + "' (csv, jsonl)");
}

namespace {

std::string opt_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

void emit_csv(const SimulationReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const CellStats& c : report.cells) {
    out << to_string(c.key.estimator) << ',' << to_string(c.key.margin) << ','
        << format_double(c.key.q) << ',' << format_double(c.key.a) << ','
        << format_double(c.key.b) << ',' << c.key.k << ',' << format_double(c.k_over_n)
        << ',' << c.kstar << ',' << opt_text(c.mean) << ',' << opt_text(c.bias) << ','
        << opt_text(c.variance) << ',' << opt_text(c.mse) << ',' << c.n_ok << ','
        << c.n_fail << '\n';
  }
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

void emit_jsonl(const SimulationReport& report, std::ostream& out) {
  nlohmann::ordered_json prov;
  prov["record"] = "provenance";
  prov["master_seed"] = report.master_seed;
  prov["config_hash"] = hex64(report.config_hash);
  prov["config"] = report.config_canonical;
  prov["model"] = report.model;
  prov["n"] = report.n;
  prov["N"] = report.N;
  prov["true_eta"] = opt_json(report.true_eta);
  prov["second_order_failures"] = report.second_order_failures;
  out << prov.dump() << '\n';
  for (const CellStats& c : report.cells) {
    nlohmann::ordered_json j;
    j["record"] = "cell";
    j["estimator"] = std::string(to_string(c.key.estimator));
    j["margin"] = std::string(to_string(c.key.margin));
    j["q"] = c.key.q;
    j["a"] = c.key.a;
    j["b"] = c.key.b;
    j["k"] = c.key.k;
    j["k_over_n"] = c.k_over_n;
    j["kstar"] = c.kstar;
    j["mean"] = opt_json(c.mean);
    j["bias"] = opt_json(c.bias);
    j["variance"] = opt_json(c.variance);
    j["mse"] = opt_json(c.mse);
    j["n_ok"] = c.n_ok;
    j["n_fail"] = c.n_fail;
    j["flagged"] = c.flagged;
    out << j.dump() << '\n';
  }
}

}  // namespace

void emit_report(const SimulationReport& report, ReportFormat format,
                 std::ostream& out) {
  if (format == ReportFormat::CSV) emit_csv(report, out);
  else emit_jsonl(report, out);
}

void write_report(const SimulationReport& report, ReportFormat format,
                  const std::string& path) {
  if (path == "-") {
    emit_report(report, format, std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing report to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  emit_report(report, format, file);
  file.close();
  if (!file) throw IoError("failed writing report to '" + path + "'");
}

std::vector<CellStats> parse_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw ParseError("report CSV: missing or unexpected header");
  }
  std::vector<CellStats> cells;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 14) {
      throw ParseError("report CSV row " + std::to_string(row) + ": expected 14 fields");
    }
    auto opt = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_double(s, "report field");
    };
    try {
      CellStats c;
      if (f[0] == "raw") c.key.estimator = EstimatorKind::Raw;
      else if (f[0] == "reduced") c.key.estimator = EstimatorKind::Reduced;
      else throw ParseError("unknown estimator '" + f[0] + "'");
      c.key.margin = parse_margin(f[1]);
      c.key.q = parse_double(f[2], "q");
      c.key.a = parse_double(f[3], "a");
      c.key.b = parse_double(f[4], "b");
      c.key.k = parse_size(f[5], "k");
      c.k_over_n = parse_double(f[6], "k_over_n");
      c.kstar = parse_size(f[7], "kstar");
      c.mean = opt(f[8]);
      c.bias = opt(f[9]);
      c.variance = opt(f[10]);
      c.mse = opt(f[11]);
      c.n_ok = parse_size(f[12], "n_ok");
      c.n_fail = parse_size(f[13], "n_fail");
      c.flagged = 10 * c.n_fail > c.n_ok + c.n_fail;
      cells.push_back(std::move(c));
    } catch (const UsageError& e) {
      throw ParseError("report CSV row " + std::to_string(row) + ": " + e.what());
    }
  }
  return cells;
}

}  // namespace resdep
