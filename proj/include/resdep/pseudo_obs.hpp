#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "resdep/sample.hpp"

namespace resdep {

/// How equal values are ranked.
///  - FirstOccurrence: stable ordinal ranks, earlier rows rank lower.
///  - Strict: any tie is an error.
///  - Jitter: add uniform noise of relative size 1e-9 (seeded), then rank
///    as FirstOccurrence.
enum class TiePolicy { FirstOccurrence, Strict, Jitter };

struct RankOptions {
  TiePolicy policy = TiePolicy::FirstOccurrence;
  std::uint64_t jitter_seed = 0;
};

/// Ordinal ranks in {1..n}. For distinct values rank[i] = #{j : v[j] <= v[i]}.
/// Throws TieError (Strict) naming the tied value.
std::vector<std::size_t> compute_ranks(std::span<const double> values,
                                       const RankOptions& options = {});

struct RankPair {
  std::vector<std::size_t> rx;
  std::vector<std::size_t> ry;
};

RankPair compute_ranks(const BivariateSample& sample,
                       const RankOptions& options = {});

/// T_i = min((n+1)/(n+1-rx_i), (n+1)/(n+1-ry_i)), standard Pareto scale.
std::vector<double> pareto_pseudo(const RankPair& ranks);

/// V_i = 1 / max(-log(rx_i/(n+1)), -log(ry_i/(n+1))), unit Frechet scale.
std::vector<double> frechet_pseudo(const RankPair& ranks);

/// V*_i = V_i + 1/2.
std::vector<double> shift_half(std::span<const double> v);

/// Ranks plus the three ascending order-statistic sequences the estimators
/// run on. Immutable once built; safe to share across threads.
struct PseudoSample {
  std::size_t n = 0;
  std::vector<std::size_t> rx;
  std::vector<std::size_t> ry;
  std::vector<double> t_sorted;
  std::vector<double> v_sorted;
  std::vector<double> vstar_sorted;
};

PseudoSample make_pseudo_sample(RankPair ranks);
PseudoSample make_pseudo_sample(const BivariateSample& sample,
                                const RankOptions& options = {});

/// Number of i with X_i and Y_i both at or above their respective m-th
/// largest order statistics, m = floor(k * x). Throws BoundsError unless
/// 1 <= m <= n.
std::size_t joint_exceedance_count(const BivariateSample& sample,
                                   std::size_t k, double x);

}  // namespace resdep
