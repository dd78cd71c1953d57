#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace resdep {

/// n paired observations (X_i, Y_i). Labels are optional (dates, station ids)
/// and, when present, have the same length as x and y.
struct BivariateSample {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return x.size(); }
};

/// Checks equal lengths, n >= 2 and absence of NaN; throws DataError.
void validate(const BivariateSample& sample);

}  // namespace resdep
