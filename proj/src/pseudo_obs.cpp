#include "resdep/pseudo_obs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "resdep/error.hpp"
#include "resdep/rng.hpp"

namespace resdep {

namespace {

std::vector<std::size_t> ordinal_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

void check_rank_pair(const RankPair& ranks) {
  if (ranks.rx.size() != ranks.ry.size() || ranks.rx.size() < 2) {
    throw DataError("rank vectors must have equal length n >= 2");
  }
  const std::size_t n = ranks.rx.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ranks.rx[i] < 1 || ranks.rx[i] > n || ranks.ry[i] < 1 ||
        ranks.ry[i] > n) {
      throw BoundsError("rank outside {1..n}");
    }
  }
}

}  // namespace

std::vector<std::size_t> compute_ranks(std::span<const double> values,
                                       const RankOptions& options) {
  if (values.size() < 2) throw InsufficientDataError("ranking needs n >= 2");
  switch (options.policy) {
    case TiePolicy::FirstOccurrence:
      return ordinal_ranks(values);
    case TiePolicy::Strict: {
      auto ranks = ordinal_ranks(values);
      std::vector<double> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      if (dup != sorted.end()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "tied value " << *dup << " under strict tie policy";
        throw TieError(msg.str());
      }
      return ranks;
    }
    case TiePolicy::Jitter: {
      Xoshiro256 rng(options.jitter_seed);
      std::vector<double> jittered(values.begin(), values.end());
      for (auto& v : jittered) {
        const double scale = std::max(1.0, std::fabs(v)) * 1e-9;
        v += scale * (rng.uniform_open() - 0.5);
      }
      return ordinal_ranks(jittered);
    }
  }
  return ordinal_ranks(values);
}

RankPair compute_ranks(const BivariateSample& sample, const RankOptions& options) {
  validate(sample);
  RankOptions ry_options = options;
  // Independent jitter streams for the two margins.
  ry_options.jitter_seed = derive_seed(options.jitter_seed, 1);
  return {compute_ranks(sample.x, options), compute_ranks(sample.y, ry_options)};
}

std::vector<double> pareto_pseudo(const RankPair& ranks) {
  check_rank_pair(ranks);
  const std::size_t n = ranks.rx.size();
  const double np1 = static_cast<double>(n + 1);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tx = np1 / static_cast<double>(n + 1 - ranks.rx[i]);
    const double ty = np1 / static_cast<double>(n + 1 - ranks.ry[i]);
    t[i] = std::min(tx, ty);
  }
  return t;
}

std::vector<double> frechet_pseudo(const RankPair& ranks) {
  check_rank_pair(ranks);
  const std::size_t n = ranks.rx.size();
  const double np1 = static_cast<double>(n + 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = -std::log(static_cast<double>(ranks.rx[i]) / np1);
    const double ly = -std::log(static_cast<double>(ranks.ry[i]) / np1);
    v[i] = 1.0 / std::max(lx, ly);
  }
  return v;
}

std::vector<double> shift_half(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x += 0.5;
  return out;
}

PseudoSample make_pseudo_sample(RankPair ranks) {
  PseudoSample ps;
  ps.t_sorted = pareto_pseudo(ranks);
  ps.v_sorted = frechet_pseudo(ranks);
  std::sort(ps.t_sorted.begin(), ps.t_sorted.end());
  std::sort(ps.v_sorted.begin(), ps.v_sorted.end());
  ps.vstar_sorted = shift_half(ps.v_sorted);
  ps.n = ranks.rx.size();
  ps.rx = std::move(ranks.rx);
  ps.ry = std::move(ranks.ry);
  return ps;
}

PseudoSample make_pseudo_sample(const BivariateSample& sample,
                                const RankOptions& options) {
  return make_pseudo_sample(compute_ranks(sample, options));
}

std::size_t joint_exceedance_count(const BivariateSample& sample,
                                   std::size_t k, double x) {
  validate(sample);
  const std::size_t n = sample.size();
  const double level = std::floor(static_cast<double>(k) * x);
  if (!(level >= 1.0 && level <= static_cast<double>(n))) {
    std::ostringstream msg;
    msg << "joint_exceedance_count: [k x] = " << level << " outside [1, " << n
        << "]";
    throw BoundsError(msg.str());
  }
  const auto m = static_cast<std::size_t>(level);
  auto mth_largest = [&](const std::vector<double>& col) {
    std::vector<double> tmp(col);
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n - m),
                     tmp.end());
    return tmp[n - m];
  };
  const double x_thr = mth_largest(sample.x);
  const double y_thr = mth_largest(sample.y);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sample.x[i] >= x_thr && sample.y[i] >= y_thr) ++count;
  }
  return count;
}

}  // namespace resdep
