#pragma once

namespace resdep {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x) noexcept;

/// Standard normal quantile (Wichura's AS241, about 1e-16 relative).
/// Requires p in (0, 1); returns +/-inf at the endpoints.
double normal_quantile(double p);

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
/// Genz's adaptation of the Drezner-Wesolowsky method, absolute error well
/// below 1e-10.
double bivariate_normal_cdf(double h, double k, double rho);

}  // namespace resdep
