#include "resdep/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "resdep/bias_correction.hpp"
#include "resdep/error.hpp"
#include "resdep/estimators.hpp"
#include "resdep/rng.hpp"
#include "resdep/sim_harness.hpp"
#include "resdep/text.hpp"

namespace resdep {

int exit_code_for(const Error& error) noexcept {
  return static_cast<int>(error.exit_code());
}

void run_simulate(const SimulateOptions& options, std::ostream& log) {
  StudyConfig config = load_study_config(options.config_path);
  if (options.seed) config.master_seed = *options.seed;
  if (options.threads) config.threads = *options.threads;
  const SimulationReport report = run_study(config);
  write_report(report, options.format, options.out);
  std::size_t flagged = 0;
  for (const auto& c : report.cells) flagged += c.flagged ? 1 : 0;
  log << "simulate: " << report.model << ", n=" << report.n << ", N=" << report.N
      << ", master_seed=" << report.master_seed << ", cells=" << report.cells.size()
      << ", flagged=" << flagged << '\n';
}

PseudoSample load_pseudo_sample(const DataOptions& options, std::ostream& log) {
  const IngestionResult data = ingest(options.ingest);
  const auto& s = data.summary;
  log << "ingest: rows=" << s.rows << " after_na=" << s.after_na
      << " after_date=" << s.after_date << " after_dry=" << s.after_dry
      << " retained=" << s.retained;
  if (s.x_quantile) log << " x_q=" << format_double(*s.x_quantile);
  if (s.y_quantile) log << " y_q=" << format_double(*s.y_quantile);
  if (options.ranks.policy == TiePolicy::Jitter) {
    log << " jitter_seed=" << options.ranks.jitter_seed;
  }
  log << '\n';
  return make_pseudo_sample(data.sample, options.ranks);
}

namespace {

SecondOrderParams second_order_params(const EstimateOptions& options,
                                      const PseudoSample& pseudo, std::ostream& log) {
  if (options.tau.has_value() != options.beta.has_value()) {
    throw UsageError("--tau and --beta must be given together");
  }
  if (options.tau) return user_supplied(*options.tau, *options.beta);
  const std::size_t k0 = options.k0 ? options.k0 : default_k0(pseudo.n);
  SecondOrderParams so = estimate_second_order(pseudo, k0);
  log << "second-order: k0=" << so.k0 << " tau_hat=" << format_double(so.tau_hat)
      << " beta_hat=" << format_double(so.beta_hat) << '\n';
  return so;
}

void write_row(std::ostream& out, double q, std::size_t k, std::size_t n,
               const std::optional<EtaEstimate>& est, Margin margin, bool reduced) {
  out << format_double(q) << ',' << k << ','
      << format_double(static_cast<double>(k) / static_cast<double>(n)) << ',';
  if (est) {
    out << format_double(est->eta) << ',';
    if (est->ci) out << format_double(est->ci->low) << ',' << format_double(est->ci->high);
    else out << ',';
  } else {
    out << ",,";
  }
  out << ',' << to_string(margin) << ',' << (reduced ? "true" : "false") << '\n';
}

}  // namespace

void run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& log) {
  if (options.q_list.empty()) throw UsageError("--q needs at least one value");
  if (!(options.k_max > 0.0 && options.k_max <= 1.0)) {
    throw UsageError("--k-max must lie in (0, 1]");
  }
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw UsageError("--level must lie in (0, 1)");
  }
  std::vector<double> qs = options.q_list;
  for (double q : qs) {
    if (!(q > 0.0)) throw UsageError("q values must be positive");
  }
  qs.push_back(1.0);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  const PseudoSample pseudo = load_pseudo_sample(options.data, log);
  const std::size_t n = pseudo.n;
  const std::size_t k_top = std::min<std::size_t>(
      static_cast<std::size_t>(std::floor(options.k_max * static_cast<double>(n))), n - 1);

  std::optional<SecondOrderParams> so;
  if (options.reduce_bias) so = second_order_params(options, pseudo, log);

  out << kEstimateHeader << '\n';
  const auto param_for = [&](double q) -> Parametrization {
    if (options.parametrization == ParamFamily::MeanOfOrderP) return MeanOfOrderP{q};
    return ConjugateQ{q};
  };
  for (double q : qs) {
    const EstimatorSpec spec{param_for(q), options.margin};
    for (std::size_t k = 1; k <= k_top; ++k) {
      std::optional<EtaEstimate> est;
      try {
        est = estimate_eta(pseudo, k, spec, options.level);
      } catch (const DomainError&) {
      }
      write_row(out, q, k, n, est, options.margin, false);
    }
  }
  if (!so) return;
  for (double q : qs) {
    const double a = resolve(param_for(q)).a;
    for (std::size_t k = 1; k <= k_top; ++k) {
      std::optional<EtaEstimate> est;
      try {
        est = reduced_bias_eta(pseudo, k, options.kstar.resolve(n, k), a, *so, options.level);
      } catch (const DomainError&) {
      }
      write_row(out, q, k, n, est, Margin::FrechetShifted, true);
    }
  }
}

void run_second_order(const SecondOrderOptions& options, std::ostream& out,
                      std::ostream& log) {
  const PseudoSample pseudo = load_pseudo_sample(options.data, log);
  const std::size_t k0 = options.k0 ? options.k0 : default_k0(pseudo.n);
  const SecondOrderParams so = estimate_second_order(pseudo, k0);
  out << "n,k0,tau_hat,beta_hat\n"
      << pseudo.n << ',' << so.k0 << ',' << format_double(so.tau_hat) << ','
      << format_double(so.beta_hat) << '\n';
}

namespace {

/// Direct evaluation of M_{a,b} with pow, no log-space accumulation.
double naive_m_ab(const std::vector<double>& sorted, std::size_t k, double a, double b) {
  const std::size_t n = sorted.size();
  const double thr = sorted[n - 1 - k];
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ratio = sorted[n - 1 - i] / thr;
    s += a == 0.0 ? std::log(ratio) : std::pow(ratio, a);
  }
  s /= static_cast<double>(k);
  const double big_a = a == 0.0 ? std::exp(s) : std::pow(s, 1.0 / a);
  return b == 0.0 ? std::log(big_a) : (std::pow(big_a, b) - 1.0) / b;
}

}  // namespace

bool run_oracle(const OracleOptions& options, std::ostream& out) {
  const std::size_t n = options.n;
  if (n < 2 || n > 100) throw UsageError("oracle: --n must lie in [2, 100]");

  Xoshiro256 rng(options.seed);
  BivariateSample sample;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    sample.x.push_back(u);
    sample.y.push_back(0.5 * u + 0.5 * rng.uniform_open());
  }
  const RankPair ranks = compute_ranks(sample, RankOptions{TiePolicy::Strict, 0});
  const std::vector<double> t = pareto_pseudo(ranks);

  bool ok = true;
  std::size_t eq14_bad = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    std::size_t brute = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t above_x = 0;
      std::size_t above_y = 0;
      for (std::size_t j = 0; j < n; ++j) {
        above_x += sample.x[j] > sample.x[i] ? 1 : 0;
        above_y += sample.y[j] > sample.y[i] ? 1 : 0;
      }
      brute += (above_x < m && above_y < m) ? 1 : 0;
    }
    const double level = static_cast<double>(n + 1) / static_cast<double>(m);
    const auto via_t = static_cast<std::size_t>(
        std::count_if(t.begin(), t.end(), [&](double v) { return v >= level; }));
    const std::size_t via_api = joint_exceedance_count(sample, m, 1.0);
    if (brute != via_t || brute != via_api) {
      ++eq14_bad;
      out << "eq14 mismatch at m=" << m << ": brute=" << brute << " T-count=" << via_t
          << " api=" << via_api << '\n';
    }
  }
  out << "joint exceedance identity: " << n << " levels, " << eq14_bad << " mismatches\n";
  ok = ok && eq14_bad == 0;

  const PseudoSample pseudo = make_pseudo_sample(ranks);
  const double grid[][2] = {{0, 0}, {0.5, -0.5}, {-0.5, 0.5}, {1, -1}, {-1, 1},
                            {0.3, 0.2}, {0, 0.5}, {-0.7, 0}};
  double worst = 0.0;
  for (const auto& ab : grid) {
    for (Margin margin : {Margin::ParetoT, Margin::FrechetShifted, Margin::FrechetUnshifted}) {
      const auto seq = margin_sequence(pseudo, margin);
      const std::vector<double> sorted(seq.begin(), seq.end());
      for (std::size_t k = 1; k < n; ++k) {
        const double diff =
            std::abs(m_ab(seq, k, ab[0], ab[1]) - naive_m_ab(sorted, k, ab[0], ab[1]));
        worst = std::max(worst, diff);
      }
    }
  }
  out << "m_ab vs direct loop: max abs difference " << format_double(worst) << '\n';
  ok = ok && worst <= 1e-12;
  out << "oracle: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok;
}

}  // namespace resdep
