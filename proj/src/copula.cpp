#include "resdep/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "resdep/error.hpp"
#include "resdep/normal.hpp"
#include "resdep/rng.hpp"

namespace resdep {

void validate(const BivariateSample& sample) {
  if (sample.x.size() != sample.y.size()) {
    throw DataError("sample columns differ in length");
  }
  if (!sample.labels.empty() && sample.labels.size() != sample.x.size()) {
    throw DataError("sample labels differ in length from the data");
  }
  if (sample.size() < 2) {
    throw InsufficientDataError("sample needs at least 2 observations");
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (std::isnan(sample.x[i]) || std::isnan(sample.y[i])) {
      throw DataError("sample contains NaN at row " + std::to_string(i));
    }
  }
}

std::string_view to_string(CopulaFamily family) noexcept {
  switch (family) {
    case CopulaFamily::FGM: return "fgm";
    case CopulaFamily::Frank: return "frank";
    case CopulaFamily::AMH: return "amh";
    case CopulaFamily::Gaussian: return "gaussian";
  }
  return "unknown";
}

CopulaFamily parse_copula_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "fgm") return CopulaFamily::FGM;
  if (lower == "frank") return CopulaFamily::Frank;
  if (lower == "amh") return CopulaFamily::AMH;
  if (lower == "gaussian" || lower == "normal") return CopulaFamily::Gaussian;
  throw UsageError("unknown copula family '" + std::string(name) + "'");
}

CopulaModel::CopulaModel(CopulaFamily family, double theta)
    : family_(family), theta_(theta) {
  auto reject = [&](const char* range) {
    std::ostringstream msg;
    msg << to_string(family) << " copula: theta = " << theta << " outside "
        << range;
    throw ParameterError(msg.str());
  };
  if (!std::isfinite(theta)) reject("the real line");
  switch (family) {
    case CopulaFamily::FGM:
      if (theta < -1.0 || theta > 1.0) reject("[-1, 1]");
      // theta = -1 makes the joint tail decay like t^3, not t^2.
      if (theta > -1.0) truth_ = TailTruth{0.5, 0.5};
      break;
    case CopulaFamily::Frank:
      if (!(theta > 0.0)) reject("(0, inf)");
      truth_ = TailTruth{0.5, 0.5};
      break;
    case CopulaFamily::AMH:
      if (theta < -1.0 || theta > 1.0) reject("[-1, 1]");
      if (theta == -1.0) truth_ = TailTruth{1.0 / 3.0, 2.0 / 3.0};
      break;
    case CopulaFamily::Gaussian:
      if (!(theta > -1.0 && theta < 1.0)) reject("(-1, 1)");
      truth_ = TailTruth{(1.0 + theta) / 2.0, 0.0};
      break;
  }
}

std::string CopulaModel::describe() const {
  std::ostringstream out;
  out << to_string(family_) << "(theta=" << theta_ << ")";
  return out.str();
}

double copula_cdf(const CopulaModel& model, double u, double v) {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  const double theta = model.theta();
  switch (model.family()) {
    case CopulaFamily::FGM:
      return u * v * (1.0 + theta * (1.0 - u) * (1.0 - v));
    case CopulaFamily::Frank: {
      const double num = std::expm1(-theta * u) * std::expm1(-theta * v);
      return -std::log1p(num / std::expm1(-theta)) / theta;
    }
    case CopulaFamily::AMH:
      return u * v / (1.0 - theta * (1.0 - u) * (1.0 - v));
    case CopulaFamily::Gaussian:
      return bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), theta);
  }
  return 0.0;
}

double conditional_inverse(const CopulaModel& model, double u, double w) {
  const double theta = model.theta();
  switch (model.family()) {
    case CopulaFamily::FGM: {
      // v (1 + A (1 - v)) = w with A = theta (1 - 2u); rationalised root.
      const double A = theta * (1.0 - 2.0 * u);
      const double b = 1.0 + A;
      return 2.0 * w / (b + std::sqrt(b * b - 4.0 * A * w));
    }
    case CopulaFamily::Frank: {
      const double eu = std::exp(-theta * u);
      const double ratio = w * std::expm1(-theta) / (w + (1.0 - w) * eu);
      return -std::log1p(ratio) / theta;
    }
    case CopulaFamily::AMH: {
      // v (1 - theta (1 - v)) = w (alpha + beta v)^2.
      const double alpha = 1.0 - theta * (1.0 - u);
      const double beta = theta * (1.0 - u);
      const double A = theta - w * beta * beta;
      const double B = 1.0 - theta - 2.0 * w * alpha * beta;
      const double wa2 = w * alpha * alpha;
      return 2.0 * wa2 / (B + std::sqrt(B * B + 4.0 * A * wa2));
    }
    case CopulaFamily::Gaussian: {
      const double z = theta * normal_quantile(u) +
                       std::sqrt((1.0 - theta) * (1.0 + theta)) *
                           normal_quantile(w);
      return normal_cdf(z);
    }
  }
  return w;
}

BivariateSample sample_copula(const CopulaModel& model, std::size_t n,
                              std::uint64_t seed) {
  if (n < 2) throw ParameterError("sample_copula: n must be at least 2");
  Xoshiro256 rng(seed);
  BivariateSample out;
  out.x.resize(n);
  out.y.resize(n);
  constexpr double lo = 0x1.0p-1074;
  const double hi = std::nextafter(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    const double w = rng.uniform_open();
    out.x[i] = u;
    out.y[i] = std::clamp(conditional_inverse(model, u, w), lo, hi);
  }
  return out;
}

}  // namespace resdep
