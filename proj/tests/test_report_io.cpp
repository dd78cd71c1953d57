#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "resdep/error.hpp"
#include "resdep/report_io.hpp"

using namespace resdep;

namespace {

SimulationReport small_report() {
  StudyConfig c;
  c.model = CopulaModel(CopulaFamily::AMH, -1.0);
  c.n = 200;
  c.N = 24;
  c.q_grid = {0.3, 1.0, 1.7};
  c.k_grid = {3, 9, 20, 40};
  c.kstar_rule = parse_kstar_rule("3");
  c.threads = 2;
  return run_study(c);
}

}  // namespace

TEST(ReportCsv, HeaderAndRowCount) {
  const auto rep = small_report();
  std::ostringstream out;
  emit_report(rep, ReportFormat::CSV, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "estimator,margin,q,a,b,k,k_over_n,kstar,mean,bias,variance,mse,n_ok,n_fail");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, rep.cells.size());
}

TEST(ReportCsv, EmptyKGridIsHeaderOnly) {
  StudyConfig c;
  c.N = 3;
  c.k_grid = {};
  const auto rep = run_study(c);
  std::ostringstream out;
  emit_report(rep, ReportFormat::CSV, out);
  EXPECT_EQ(out.str(), std::string(kReportHeader) + "\n");
}

TEST(ReportCsv, RoundTrip) {
  const auto rep = small_report();
  std::ostringstream out;
  emit_report(rep, ReportFormat::CSV, out);
  std::istringstream in(out.str());
  const auto cells = parse_report_csv(in);
  ASSERT_EQ(cells.size(), rep.cells.size());
  const auto same = [](const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || std::abs(*a - *b) <= 1e-12;
  };
  std::size_t with_failures = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& x = cells[i];
    const auto& y = rep.cells[i];
    EXPECT_EQ(x.key.estimator, y.key.estimator);
    EXPECT_EQ(x.key.margin, y.key.margin);
    EXPECT_NEAR(x.key.q, y.key.q, 1e-12);
    EXPECT_NEAR(x.key.a, y.key.a, 1e-12);
    EXPECT_NEAR(x.key.b, y.key.b, 1e-12);
    EXPECT_EQ(x.key.k, y.key.k);
    EXPECT_NEAR(x.k_over_n, y.k_over_n, 1e-12);
    EXPECT_EQ(x.kstar, y.kstar);
    EXPECT_TRUE(same(x.mean, y.mean));
    EXPECT_TRUE(same(x.bias, y.bias));
    EXPECT_TRUE(same(x.variance, y.variance));
    EXPECT_TRUE(same(x.mse, y.mse));
    EXPECT_EQ(x.n_ok, y.n_ok);
    EXPECT_EQ(x.n_fail, y.n_fail);
    EXPECT_EQ(x.flagged, y.flagged);
    with_failures += y.n_fail > 0 ? 1 : 0;
  }
  /// k* = 3 is infeasible at k = 3: those cells exercise the empty fields.
  EXPECT_GT(with_failures, 0u);
}

TEST(ReportCsv, ParseRejectsGarbage) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(parse_report_csv(bad_header), ParseError);
  std::istringstream short_row(std::string(kReportHeader) + "\nraw,pareto,1\n");
  EXPECT_THROW(parse_report_csv(short_row), ParseError);
}

TEST(ReportJsonl, ProvenanceThenCells) {
  const auto rep = small_report();
  std::ostringstream out;
  emit_report(rep, ReportFormat::JSONLines, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto prov = nlohmann::json::parse(line);
  EXPECT_EQ(prov["record"], "provenance");
  EXPECT_EQ(prov["master_seed"].get<std::uint64_t>(), rep.master_seed);
  EXPECT_EQ(prov["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(prov["N"].get<std::size_t>(), 24u);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& c = rep.cells[n++];
    EXPECT_EQ(j["record"], "cell");
    EXPECT_EQ(j["k"].get<std::size_t>(), c.key.k);
    EXPECT_EQ(j["flagged"].get<bool>(), c.flagged);
    if (c.mean) EXPECT_EQ(j["mean"].get<double>(), *c.mean);
    else EXPECT_TRUE(j["mean"].is_null());
  }
  EXPECT_EQ(n, rep.cells.size());
}

TEST(ReportFile, PathErrorsNameThePath) {
  const auto rep = small_report();
  try {
    write_report(rep, ReportFormat::CSV, "/nonexistent_dir/out.csv");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent_dir/out.csv"), std::string::npos);
  }
  const std::string path = std::string(RESDEP_TEST_TMPDIR) + "/report.csv";
  write_report(rep, ReportFormat::CSV, path);
  std::ifstream in(path);
  EXPECT_EQ(parse_report_csv(in).size(), rep.cells.size());
  EXPECT_THROW(parse_report_format("xml"), UsageError);
}
