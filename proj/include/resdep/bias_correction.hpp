#pragma once

#include <cstddef>
#include <string_view>

#include "resdep/estimators.hpp"
#include "resdep/pseudo_obs.hpp"

namespace resdep {

/// Second-order speed after the 1/2 shift of Frechet pseudo-observations:
/// tau when tau < eta, eta otherwise.
double effective_tau(double eta, double tau);

enum class SecondOrderSource { Estimated, UserSupplied };

std::string_view to_string(SecondOrderSource source) noexcept;

/// (tau_hat, beta_hat) plugged into the reduced-bias estimator. tau is the
/// positive second-order parameter (the conventional rho equals -tau).
struct SecondOrderParams {
  double tau_hat = 0.0;
  double beta_hat = 0.0;
  std::size_t k0 = 0;
  SecondOrderSource source = SecondOrderSource::UserSupplied;
};

/// floor(n^0.999), the default threshold for second-order estimation.
std::size_t default_k0(std::size_t n);

/// Passthrough for externally estimated values. Throws ParameterError when
/// tau <= 0.
SecondOrderParams user_supplied(double tau, double beta, std::size_t k0 = 0);

/// Estimates (tau, beta) on the k0 largest T order statistics.
///
/// tau: the statistics-ratio estimator of the second-order parameter built
/// from the log-excess moments M^(j), j = 1, 2, 3, with tuning parameter 0:
///
///   W   = [log M1 - log(M2/2)/2] / [log(M2/2)/2 - log(M3/6)/3]
///   tau = |3 (W - 1) / (W - 3)|
///
/// beta: the companion estimator on scaled log-spacings U_i, with
/// d(x) = mean (i/k0)^-x and D(x) = mean (i/k0)^-x U_i, rho = -tau:
///
///   beta = (k0/n)^rho (d(rho) D(0) - D(rho)) / (d(rho) D(rho) - D(2 rho))
///
/// Requires n >= 50 and 3 <= k0 <= n - 1. Throws EstimationError on a
/// degenerate tail and on tau_hat <= 0.
SecondOrderParams estimate_second_order(const PseudoSample& pseudo,
                                        std::size_t k0);

/// Shift-correction term 1 / (1 + 2 V_{n, n-k*}).
double shift_term(const PseudoSample& pseudo, std::size_t k_star);

/// Reduced-bias estimator on the shifted Frechet sequence:
///
///   eta~ = eta^ {1 - (beta (n/k)^-tau + 1/(1 + 2 V_{n,n-k*}))
///                    (1 - a eta^) / (1 - a eta^ + tau)}
///
/// with eta^ the M_{a,-a} estimate on V*. Variance and CI use
/// sigma_a^2 at the corrected value. Throws ConstraintError when k* > sqrt(k)
/// or k* = 0, DomainError when 1 - a eta^ + tau <= 0.
EtaEstimate reduced_bias_eta(const PseudoSample& pseudo, std::size_t k,
                             std::size_t k_star, double a,
                             const SecondOrderParams& so, double level = 0.95);

/// Same as reduced_bias_eta but also returns the uncorrected eta^.
struct ReducedBiasResult {
  EtaEstimate corrected;
  double uncorrected;
};

ReducedBiasResult reduced_bias_detail(const PseudoSample& pseudo, std::size_t k,
                                      std::size_t k_star, double a,
                                      const SecondOrderParams& so,
                                      double level = 0.95);

}  // namespace resdep
