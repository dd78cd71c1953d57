#include "resdep/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "resdep/bias_correction.hpp"
#include "resdep/copula.hpp"
#include "resdep/error.hpp"
#include "resdep/pseudo_obs.hpp"
#include "resdep/rng.hpp"

namespace resdep {

bool cell_less(const CellKey& lhs, const CellKey& rhs) {
  const auto key = [](const CellKey& c) {
    return std::make_tuple(to_string(c.estimator), to_string(c.margin), c.q, c.a, c.b, c.k);
  };
  return key(lhs) < key(rhs);
}

void Accumulator::add(double x, std::optional<double> truth) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
  if (truth) {
    const double e = x - *truth;
    sse_ += e * e;
  }
}

void Accumulator::merge(const Accumulator& other) {
  failures_ += other.failures_;
  if (other.count_ == 0) return;
  if (count_ == 0) {
    count_ = other.count_;
    mean_ = other.mean_;
    m2_ = other.m2_;
    sse_ = other.sse_;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  sse_ += other.sse_;
  count_ += other.count_;
}

double Accumulator::variance() const noexcept {
  return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_);
}

double Accumulator::mse() const noexcept {
  return count_ == 0 ? 0.0 : sse_ / static_cast<double>(count_);
}

std::vector<CellKey> study_cells(const StudyConfig& config) {
  std::vector<CellKey> cells;
  for (EstimatorKind est : config.estimators) {
    std::vector<Margin> margins = config.margins;
    if (est == EstimatorKind::Reduced) margins = {Margin::FrechetShifted};
    for (Margin margin : margins) {
      for (double q : config.q_grid) {
        const auto [a, b] = resolve(config.parametrization_for(q));
        for (std::size_t k : config.k_grid) cells.push_back({est, margin, q, a, b, k});
      }
    }
  }
  std::sort(cells.begin(), cells.end(), cell_less);
  // Duplicate estimator or margin entries in the config collapse here.
  cells.erase(std::unique(cells.begin(), cells.end(),
                          [](const CellKey& x, const CellKey& y) {
                            return !cell_less(x, y) && !cell_less(y, x);
                          }),
              cells.end());
  return cells;
}

namespace {

std::optional<SecondOrderParams> second_order_for(const StudyConfig& config,
                                                  const PseudoSample& pseudo) {
  return std::visit(
      [&](const auto& mode) -> std::optional<SecondOrderParams> {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, second_order::PerReplicate>) {
          try {
            const std::size_t k0 = mode.k0 ? mode.k0 : default_k0(config.n);
            return estimate_second_order(pseudo, k0);
          } catch (const Error&) {
            return std::nullopt;
          }
        } else if constexpr (std::is_same_v<T, second_order::Oracle>) {
          const double tau = mode.tau ? *mode.tau : config.model.truth()->tau;
          return user_supplied(tau, mode.beta);
        } else {
          return user_supplied(mode.tau, mode.beta);
        }
      },
      config.second_order);
}

bool needs_second_order(const std::vector<CellKey>& cells) {
  return std::any_of(cells.begin(), cells.end(), [](const CellKey& c) {
    return c.estimator == EstimatorKind::Reduced;
  });
}

}  // namespace

ReplicateResult run_replicate(const StudyConfig& config,
                              const std::vector<CellKey>& cells,
                              std::size_t r) {
  const BivariateSample sample =
      sample_copula(config.model, config.n, derive_seed(config.master_seed, r));
  const PseudoSample pseudo = make_pseudo_sample(sample);

  ReplicateResult out;
  out.values.resize(cells.size());
  std::optional<SecondOrderParams> so;
  if (needs_second_order(cells)) {
    so = second_order_for(config, pseudo);
    out.second_order_failed = !so.has_value();
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellKey& cell = cells[i];
    try {
      double value;
      if (cell.estimator == EstimatorKind::Raw) {
        value = m_ab(margin_sequence(pseudo, cell.margin), cell.k, cell.a, cell.b);
      } else {
        if (!so) continue;
        const std::size_t kstar = config.kstar_rule.resolve(config.n, cell.k);
        value = reduced_bias_detail(pseudo, cell.k, kstar, cell.a, *so).corrected.eta;
      }
      if (std::isfinite(value)) out.values[i] = value;
    } catch (const Error&) {
    }
  }
  return out;
}

namespace {

constexpr std::size_t kBlockSize = 16;

struct BlockResult {
  std::vector<Accumulator> acc;
  std::size_t second_order_failures = 0;
};

void merge_into(BlockResult& into, const BlockResult& from) {
  for (std::size_t i = 0; i < into.acc.size(); ++i) into.acc[i].merge(from.acc[i]);
  into.second_order_failures += from.second_order_failures;
}

}  // namespace

SimulationReport run_study(const StudyConfig& config) {
  config.validate();
  const std::vector<CellKey> cells = study_cells(config);
  const std::optional<double> truth =
      config.model.truth() ? std::optional<double>(config.model.truth()->eta) : std::nullopt;

  const std::size_t n_blocks = (config.N + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> blocks(n_blocks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t b = next++; b < n_blocks; b = next++) {
        BlockResult block;
        block.acc.resize(cells.size());
        const std::size_t end = std::min(config.N, (b + 1) * kBlockSize);
        for (std::size_t r = b * kBlockSize; r < end; ++r) {
          const ReplicateResult rep = run_replicate(config, cells, r);
          if (rep.second_order_failed) ++block.second_order_failures;
          for (std::size_t i = 0; i < cells.size(); ++i) {
            if (rep.values[i]) block.acc[i].add(*rep.values[i], truth);
            else block.acc[i].add_failure();
          }
        }
        blocks[b] = std::move(block);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n_blocks;
    }
  };

  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n_blocks, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  /// Pairwise tree over block indices: stride 1, 2, 4, ...
  for (std::size_t stride = 1; stride < n_blocks; stride *= 2) {
    for (std::size_t i = 0; i + stride < n_blocks; i += 2 * stride) {
      merge_into(blocks[i], blocks[i + stride]);
    }
  }

  SimulationReport report;
  report.master_seed = config.master_seed;
  report.config_hash = config.hash();
  report.config_canonical = config.canonical();
  report.model = config.model.describe();
  report.n = config.n;
  report.N = config.N;
  report.true_eta = truth;
  report.second_order_failures = n_blocks ? blocks[0].second_order_failures : 0;
  report.cells.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellStats stats;
    stats.key = cells[i];
    stats.k_over_n = static_cast<double>(cells[i].k) / static_cast<double>(config.n);
    if (cells[i].estimator == EstimatorKind::Reduced) {
      stats.kstar = config.kstar_rule.resolve(config.n, cells[i].k);
    }
    if (n_blocks) {
      const Accumulator& acc = blocks[0].acc[i];
      stats.n_ok = acc.count();
      stats.n_fail = acc.failures();
      if (acc.count() > 0) {
        stats.mean = acc.mean();
        stats.variance = acc.variance();
        if (truth) {
          stats.bias = acc.mean() - *truth;
          stats.mse = acc.mse();
        }
      }
    }
    stats.flagged = 10 * stats.n_fail > stats.n_ok + stats.n_fail;
    report.cells.push_back(std::move(stats));
  }
  return report;
}

}  // namespace resdep
