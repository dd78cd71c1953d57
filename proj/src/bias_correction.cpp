#include "resdep/bias_correction.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "resdep/error.hpp"

namespace resdep {

double effective_tau(double eta, double tau) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("effective_tau: eta outside (0, 1]");
  if (!(tau > 0.0)) throw DomainError("effective_tau: tau must be positive");
  return tau < eta ? tau : eta;
}

std::string_view to_string(SecondOrderSource source) noexcept {
  return source == SecondOrderSource::Estimated ? "estimated" : "user_supplied";
}

std::size_t default_k0(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.999)));
}

SecondOrderParams user_supplied(double tau, double beta, std::size_t k0) {
  if (!(tau > 0.0) || !std::isfinite(tau) || !std::isfinite(beta)) {
    throw ParameterError("second-order parameters: need finite tau > 0 and finite beta");
  }
  return {tau, beta, k0, SecondOrderSource::UserSupplied};
}

SecondOrderParams estimate_second_order(const PseudoSample& pseudo,
                                        std::size_t k0) {
  const std::size_t n = pseudo.n;
  if (n < 50) {
    throw InsufficientDataError("second-order estimation needs n >= 50");
  }
  if (k0 < 3 || k0 >= n) {
    std::ostringstream msg;
    msg << "second-order estimation: k0 = " << k0 << " outside [3, " << n - 1 << "]";
    throw BoundsError(msg.str());
  }
  const auto& t = pseudo.t_sorted;
  const double log_thr = std::log(t[n - 1 - k0]);
  const double kd = static_cast<double>(k0);

  // Log-excess moments M^(1..3).
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < k0; ++i) {
    const double l = std::log(t[n - 1 - i]) - log_thr;
    m1 += l;
    m2 += l * l;
    m3 += l * l * l;
  }
  m1 /= kd;
  m2 /= kd;
  m3 /= kd;
  if (!(m1 > 0.0)) {
    throw EstimationError("second-order estimation: top-k0 values are constant");
  }
  const double half_log_m2 = 0.5 * std::log(m2 / 2.0);
  const double ratio = (std::log(m1) - half_log_m2) /
                       (half_log_m2 - std::log(m3 / 6.0) / 3.0);
  const double tau_hat = std::fabs(3.0 * (ratio - 1.0) / (ratio - 3.0));
  if (!std::isfinite(tau_hat)) {
    throw EstimationError("second-order estimation: ratio statistic not finite");
  }
  if (!(tau_hat > 0.0)) {
    std::ostringstream msg;
    msg << "second-order estimation: tau_hat = " << tau_hat
        << " is not positive (ratio statistic " << ratio << ", M1 " << m1
        << ", M2 " << m2 << ", M3 " << m3 << ")";
    throw EstimationError(msg.str());
  }

  const double rho = -tau_hat;
  double d_rho = 0.0, D0 = 0.0, D_rho = 0.0, D_2rho = 0.0;
  for (std::size_t i = 1; i <= k0; ++i) {
    const double spacing = std::log(t[n - i]) - std::log(t[n - i - 1]);
    const double u = static_cast<double>(i) * spacing;
    const double w = std::pow(static_cast<double>(i) / kd, -rho);
    d_rho += w;
    D0 += u;
    D_rho += w * u;
    D_2rho += w * w * u;
  }
  d_rho /= kd;
  D0 /= kd;
  D_rho /= kd;
  D_2rho /= kd;
  const double beta_hat = std::pow(kd / static_cast<double>(n), rho) *
                          (d_rho * D0 - D_rho) / (d_rho * D_rho - D_2rho);
  if (!std::isfinite(beta_hat)) {
    throw EstimationError("second-order estimation: beta_hat not finite");
  }
  return {tau_hat, beta_hat, k0, SecondOrderSource::Estimated};
}

double shift_term(const PseudoSample& pseudo, std::size_t k_star) {
  if (k_star >= pseudo.n) {
    throw BoundsError("k* must be below n");
  }
  return 1.0 / (1.0 + 2.0 * pseudo.v_sorted[pseudo.n - 1 - k_star]);
}

ReducedBiasResult reduced_bias_detail(const PseudoSample& pseudo, std::size_t k,
                                      std::size_t k_star, double a,
                                      const SecondOrderParams& so,
                                      double level) {
  if (k_star == 0 || k_star * k_star > k) {
    std::ostringstream msg;
    msg << "reduced-bias estimator requires 1 <= k* <= sqrt(k); got k* = "
        << k_star << ", k = " << k;
    throw ConstraintError(msg.str());
  }
  if (!(so.tau_hat > 0.0)) throw DomainError("reduced-bias estimator: tau_hat must be positive");

  const double raw = m_ab(pseudo.vstar_sorted, k, a, -a);
  const double one_minus = 1.0 - a * raw;
  const double den = one_minus + so.tau_hat;
  if (!(den > 0.0)) {
    throw DomainError("reduced-bias estimator: 1 - a eta + tau <= 0");
  }
  const double ratio_nk = static_cast<double>(pseudo.n) / static_cast<double>(k);
  const double correction =
      so.beta_hat * std::pow(ratio_nk, -so.tau_hat) + shift_term(pseudo, k_star);

  EtaEstimate est;
  est.eta = raw * (1.0 - correction * one_minus / den);
  est.k = k;
  est.a_used = a;
  est.margin = Margin::FrechetShifted;
  if (a * est.eta < 0.5) {
    est.variance = asymptotic_variance(a, est.eta) / static_cast<double>(k);
    est.ci = confidence_interval(est.eta, k, a, level);
  }
  return {est, raw};
}

EtaEstimate reduced_bias_eta(const PseudoSample& pseudo, std::size_t k,
                             std::size_t k_star, double a,
                             const SecondOrderParams& so, double level) {
  return reduced_bias_detail(pseudo, k, k_star, a, so, level).corrected;
}

}  // namespace resdep
