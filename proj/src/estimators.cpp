#include "resdep/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "resdep/error.hpp"
#include "resdep/normal.hpp"

namespace resdep {

std::string_view to_string(Margin margin) noexcept {
  switch (margin) {
    case Margin::ParetoT: return "pareto";
    case Margin::FrechetShifted: return "frechet_shifted";
    case Margin::FrechetUnshifted: return "frechet";
  }
  return "unknown";
}

Margin parse_margin(std::string_view name) {
  if (name == "pareto") return Margin::ParetoT;
  if (name == "frechet_shifted") return Margin::FrechetShifted;
  if (name == "frechet") return Margin::FrechetUnshifted;
  throw UsageError("unknown margin '" + std::string(name) +
                   "' (expected pareto, frechet_shifted or frechet)");
}

namespace {

void check_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    std::ostringstream msg;
    msg << "q must be a finite positive number, got " << q;
    throw ParameterError(msg.str());
  }
}

}  // namespace

double conjugate_exponent(double q) noexcept {
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  return q / (q - 1.0);
}

ResolvedAB resolve(const Parametrization& param) {
  return std::visit(
      [](const auto& p) -> ResolvedAB {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RawAB>) {
          if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
            throw ParameterError("a and b must be finite");
          }
          return {p.a, p.b};
        } else if constexpr (std::is_same_v<T, ConjugateQ>) {
          check_q(p.q);
          if (p.q == 1.0) return {0.0, 0.0};
          return {1.0 - 1.0 / p.q, 1.0 / p.q - 1.0};
        } else {
          check_q(p.q);
          if (p.q == 1.0) return {0.0, 0.0};
          // 1/(1-p) with p = q/(q-1) simplifies to 1 - q.
          return {1.0 - p.q, p.q - 1.0};
        }
      },
      param);
}

double m_ab(std::span<const double> sorted, std::size_t k, double a, double b) {
  const std::size_t n = sorted.size();
  if (k == 0 || k >= n) {
    std::ostringstream msg;
    msg << "m_ab: k = " << k << " outside [1, " << (n == 0 ? 0 : n - 1) << "]";
    throw BoundsError(msg.str());
  }
  const double threshold = sorted[n - 1 - k];
  if (!(threshold > 0.0)) {
    throw DomainError("m_ab: threshold order statistic must be positive");
  }
  const double log_thr = std::log(threshold);
  const double inv_k = 1.0 / static_cast<double>(k);

  double log_A;
  if (a == 0.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(sorted[n - 1 - i]) - log_thr;
    log_A = sum * inv_k;
  } else {
    // log mean exp(a * l_i), shifted by the largest exponent.
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      peak = std::max(peak, a * (std::log(sorted[n - 1 - i]) - log_thr));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      acc += std::exp(a * (std::log(sorted[n - 1 - i]) - log_thr) - peak);
    }
    log_A = (peak + std::log(acc * inv_k)) / a;
  }
  if (b == 0.0) return log_A;
  return std::expm1(b * log_A) / b;
}

std::span<const double> margin_sequence(const PseudoSample& pseudo,
                                        Margin margin) noexcept {
  switch (margin) {
    case Margin::ParetoT: return pseudo.t_sorted;
    case Margin::FrechetShifted: return pseudo.vstar_sorted;
    case Margin::FrechetUnshifted: return pseudo.v_sorted;
  }
  return pseudo.vstar_sorted;
}

double eta_hat(const PseudoSample& pseudo, std::size_t k,
               const EstimatorSpec& spec) {
  const auto [a, b] = spec.ab();
  return m_ab(margin_sequence(pseudo, spec.margin), k, a, b);
}

double asymptotic_variance(double a, double eta) {
  const double ae = a * eta;
  if (!(ae < 0.5)) {
    std::ostringstream msg;
    msg << "asymptotic variance undefined: a * eta = " << ae << " >= 1/2";
    throw VarianceDomainError(msg.str());
  }
  const double one_minus = 1.0 - ae;
  return eta * eta * one_minus * one_minus / (1.0 - 2.0 * ae);
}

double asymptotic_bias(double a, double eta, double tau) {
  const double num = 1.0 - a * eta;
  const double den = num + tau;
  if (!(den > 0.0)) {
    throw DomainError("asymptotic bias undefined: 1 - a eta + tau <= 0");
  }
  return num / den;
}

Interval confidence_interval(double estimate, std::size_t k, double a,
                             double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ParameterError("confidence level must lie in (0, 1)");
  }
  if (k == 0) throw BoundsError("confidence_interval: k must be positive");
  const double sigma = std::sqrt(asymptotic_variance(a, estimate));
  const double z = normal_quantile((1.0 + level) / 2.0);
  const double half = z * sigma / std::sqrt(static_cast<double>(k));
  return {estimate - half, estimate + half};
}

EtaEstimate estimate_eta(const PseudoSample& pseudo, std::size_t k,
                         const EstimatorSpec& spec, double level,
                         std::optional<double> tau) {
  const auto [a, b] = spec.ab();
  EtaEstimate est;
  est.eta = m_ab(margin_sequence(pseudo, spec.margin), k, a, b);
  est.k = k;
  est.a_used = a;
  est.margin = spec.margin;
  if (b != -a) return est;
  if (a * est.eta < 0.5) {
    est.variance = asymptotic_variance(a, est.eta) / static_cast<double>(k);
    est.ci = confidence_interval(est.eta, k, a, level);
  }
  if (tau && 1.0 - a * est.eta + *tau > 0.0) {
    est.bias_term = asymptotic_bias(a, est.eta, *tau);
  }
  return est;
}

}  // namespace resdep
