#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lassocv/errors.hpp"

namespace lassocv {

/// Linear-interpolation quantile (the "type 7" rule) of a non-empty sample.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw DimensionMismatch("quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto idx = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(idx);
  if (idx + 1 < values.size()) {
    return values[idx] * (1.0 - frac) + values[idx + 1] * frac;
  }
  return values.back();
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

struct MeanAndStdError {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of the mean (Bessel-corrected).
inline MeanAndStdError mean_std_error(const std::vector<double>& values) {
  const auto m = static_cast<double>(values.size());
  if (values.size() < 2) {
    return {values.empty() ? 0.0 : values.front(), 0.0};
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / m;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (m - 1.0) / m)};
}

}  // namespace lassocv
