#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resdep/copula.hpp"
#include "resdep/estimators.hpp"

namespace resdep {

enum class EstimatorKind { Raw, Reduced };

std::string_view to_string(EstimatorKind kind) noexcept;

/// Rule for the top order statistic k* used by the shift-correction term.
///  - PowN: max(floor(n^exponent), minimum), then capped at floor(sqrt(k)).
///  - SqrtK: floor(sqrt(k)).
///  - Fixed: the given value, uncapped (cells with k* > sqrt(k) fail).
struct KStarRule {
  enum class Kind { PowN, SqrtK, Fixed };
  Kind kind = Kind::PowN;
  double exponent = 0.3;
  std::size_t minimum = 10;
  std::size_t fixed = 0;

  std::size_t resolve(std::size_t n, std::size_t k) const;
  std::string describe() const;
};

/// Parses "pow0.3" (no floor), "pow0.3/10" (floor 10), "sqrtk", or an
/// integer. The default-constructed rule is pow0.3/10.
KStarRule parse_kstar_rule(std::string_view text);

namespace second_order {
/// Estimate (tau, beta) on every replicate at k0 (0 selects floor(n^0.999)).
struct PerReplicate {
  std::size_t k0 = 0;
};
/// Ground-truth tau of the model (or the given one) with a supplied beta.
struct Oracle {
  std::optional<double> tau;
  double beta = 0.0;
};
struct UserSupplied {
  double tau = 0.0;
  double beta = 0.0;
};
}  // namespace second_order

using SecondOrderMode = std::variant<second_order::PerReplicate,
                                     second_order::Oracle,
                                     second_order::UserSupplied>;

enum class ParamFamily { ConjugateQ, MeanOfOrderP };

/// A Monte Carlo study. Defaults follow the reference design: N = 1000
/// replicates of n = 500 pairs, q = 0.1(0.1)1.9 and every k up to 0.3 n.
struct StudyConfig {
  CopulaModel model{CopulaFamily::Frank, 0.5};
  std::size_t n = 500;
  std::size_t N = 1000;
  std::vector<double> q_grid;
  std::vector<std::size_t> k_grid;
  std::vector<Margin> margins{Margin::ParetoT, Margin::FrechetShifted,
                              Margin::FrechetUnshifted};
  std::vector<EstimatorKind> estimators{EstimatorKind::Raw,
                                        EstimatorKind::Reduced};
  ParamFamily parametrization = ParamFamily::ConjugateQ;
  KStarRule kstar_rule{};
  std::uint64_t master_seed = 20240601;
  SecondOrderMode second_order = second_order::PerReplicate{};
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Throws ParameterError on any violated invariant.
  void validate() const;

  Parametrization parametrization_for(double q) const;

  /// Stable text form of every field; input to the provenance hash.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// q = 0.1, 0.2, ..., 1.9.
std::vector<double> default_q_grid();

/// k = 1..floor(0.3 n).
std::vector<std::size_t> default_k_grid(std::size_t n);

/// Parses a q list: "0.5,1,1.5" or a range "start:stop:step".
std::vector<double> parse_q_grid(std::string_view text);

/// Parses a k list for sample size n. Integer entries are absolute; entries
/// containing '.' are fractions of n floored to floor(n f). Ranges
/// "a:b[:step]" follow the same rule. "all" gives default_k_grid(n). The
/// result is sorted and deduplicated.
std::vector<std::size_t> parse_k_grid(std::string_view text, std::size_t n);

/// Reads the key = value study file format. Lines starting with '#' and
/// blank lines are ignored. Recognised keys:
///
///   model           = <family>:<theta>      e.g. frank:0.5, amh:-1
///   n               = <int>
///   N               = <int>
///   q_grid          = <list or range>
///   k_grid          = <list, range or all>
///   margins         = pareto,frechet_shifted,frechet
///   estimators      = raw,reduced
///   parametrization = conjugate_q | mean_of_order_p
///   kstar_rule      = pow0.3 | pow0.3/10 | sqrtk | <int>
///   master_seed     = <u64>
///   second_order    = per_replicate[:k0] | oracle[:tau],beta | user:tau,beta
///   threads         = <int>
///
/// Unknown keys are a UsageError. k_grid is resolved after n is known.
StudyConfig parse_study_config(std::istream& in);
StudyConfig load_study_config(const std::string& path);

}  // namespace resdep
