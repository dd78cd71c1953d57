#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "resdep/sample.hpp"

namespace resdep {

enum class CopulaFamily { FGM, Frank, AMH, Gaussian };

std::string_view to_string(CopulaFamily family) noexcept;
/// Accepts "fgm", "frank", "amh", "gaussian" (case-insensitive).
CopulaFamily parse_copula_family(std::string_view name);

/// Residual dependence index and second-order parameter of the upper tail.
struct TailTruth {
  double eta;
  double tau;
};

/// A copula family at a fixed parameter, with the known (eta, tau) of its
/// upper joint tail when that is available.
///
/// Admissible parameters: FGM and AMH theta in [-1, 1], Frank theta > 0,
/// Gaussian theta in (-1, 1).
class CopulaModel {
 public:
  /// Throws ParameterError when theta is outside the family's range.
  CopulaModel(CopulaFamily family, double theta);

  CopulaFamily family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }

  /// Ground truth for the upper tail; empty where it is not known
  /// (AMH away from theta = -1, FGM at theta = -1).
  const std::optional<TailTruth>& truth() const noexcept { return truth_; }

  std::string describe() const;

 private:
  CopulaFamily family_;
  double theta_;
  std::optional<TailTruth> truth_;
};

/// C_theta(u, v). Arguments are clamped to [0, 1].
double copula_cdf(const CopulaModel& model, double u, double v);

/// Draws n pairs with the model's copula as joint law, by conditional
/// inversion (Gaussian: Cholesky of the 2x2 correlation matrix). The same
/// (model, n, seed) always gives bit-identical output.
BivariateSample sample_copula(const CopulaModel& model, std::size_t n,
                              std::uint64_t seed);

/// Inverse of the conditional distribution v -> dC/du(u, v) at level w.
/// Exposed for testing the samplers.
double conditional_inverse(const CopulaModel& model, double u, double w);

}  // namespace resdep
