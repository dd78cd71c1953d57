#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "resdep/pseudo_obs.hpp"

namespace resdep {

/// Which pseudo-observation sequence an estimator runs on.
enum class Margin { ParetoT, FrechetShifted, FrechetUnshifted };

std::string_view to_string(Margin margin) noexcept;
/// Accepts "pareto", "frechet_shifted", "frechet".
Margin parse_margin(std::string_view name);

/// Explicit (a, b) pair.
struct RawAB {
  double a = 0.0;
  double b = 0.0;
};

/// (a, b) = (1/p, 1/q - 1) with 1/p + 1/q = 1. q = 1 is the Hill estimator.
struct ConjugateQ {
  double q = 1.0;
};

/// Mean-of-order-p parametrisation (a, b) = (1/(1-p), q - 1) where p is the
/// conjugate of q, so a = 1 - q. Meets ConjugateQ at q = 1.
struct MeanOfOrderP {
  double q = 1.0;
};

using Parametrization = std::variant<RawAB, ConjugateQ, MeanOfOrderP>;

struct ResolvedAB {
  double a;
  double b;
};

/// Throws ParameterError for q <= 0 or non-finite values. q = 1 resolves to
/// exactly (0, 0) in both conjugate parametrisations.
ResolvedAB resolve(const Parametrization& param);

/// Conjugate exponent p of q (1/p + 1/q = 1); infinite at q = 1.
double conjugate_exponent(double q) noexcept;

struct EstimatorSpec {
  Parametrization param = ConjugateQ{1.0};
  Margin margin = Margin::FrechetShifted;

  ResolvedAB ab() const { return resolve(param); }
};

/// The M_{a,b} functional on the k largest values of an ascending sequence,
/// using sorted[n-1-k] as threshold:
///
///   A_a = [ (1/k) sum_{i<k} (z_(n-i) / z_(n-k))^a ]^(1/a),
///   M   = (A_a^b - 1) / b,
///
/// with a = 0 read as the geometric mean and b = 0 as log A_a, so a = b = 0
/// is the Hill estimator. A_a is accumulated in log space.
///
/// Throws BoundsError unless 1 <= k <= n - 1, DomainError if the threshold is
/// not positive.
double m_ab(std::span<const double> sorted, std::size_t k, double a, double b);

/// Sequence an estimator with this margin reads.
std::span<const double> margin_sequence(const PseudoSample& pseudo,
                                        Margin margin) noexcept;

/// Point estimate of eta at k.
double eta_hat(const PseudoSample& pseudo, std::size_t k,
               const EstimatorSpec& spec);

/// sigma_a^2(eta) = eta^2 (1 - a eta)^2 / (1 - 2 a eta). Throws
/// VarianceDomainError when a * eta >= 1/2.
double asymptotic_variance(double a, double eta);

/// b_a(eta, tau) = (1 - a eta) / (1 - a eta + tau). Throws DomainError when
/// the denominator is not positive.
double asymptotic_bias(double a, double eta, double tau);

struct Interval {
  double low;
  double high;
};

/// estimate -/+ z_{(1+level)/2} sigma_a(estimate) / sqrt(k). Throws
/// VarianceDomainError when sigma_a is undefined at the plug-in estimate.
Interval confidence_interval(double estimate, std::size_t k, double a,
                             double level);

/// A point estimate packaged with its asymptotic summaries. Fields that do
/// not exist at this (a, eta) are empty rather than NaN.
struct EtaEstimate {
  double eta = 0.0;
  std::size_t k = 0;
  double a_used = 0.0;
  Margin margin = Margin::FrechetShifted;
  std::optional<double> variance;   // sigma_a^2(eta) / k
  std::optional<double> bias_term;  // b_a(eta, tau); reported, never subtracted
  std::optional<Interval> ci;
};

/// Estimate with variance and CI. tau is only used for the reported bias term.
/// Restricted to the b = -a subclass, for which the variance formula holds.
EtaEstimate estimate_eta(const PseudoSample& pseudo, std::size_t k,
                         const EstimatorSpec& spec, double level = 0.95,
                         std::optional<double> tau = std::nullopt);

}  // namespace resdep
