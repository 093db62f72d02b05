#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fggs/common.hpp"

namespace fggs {

// Least-squares fit of log2(value) against scale.
struct LogLinearFit {
  double intercept = 0.0;
  double slope = 0.0;

  double eval(double scale) const {
    return std::exp2(intercept + slope * scale);
  }

  static LogLinearFit fit(std::span<const double> scales,
                          std::span<const double> values) {
    if (scales.size() != values.size() || scales.size() < 2)
      throw insufficient_data_error(
          "log-linear extrapolation needs at least 2 points");
    for (double v : values)
      if (!(v > 0.0))
        throw insufficient_data_error("log-linear fit needs positive values");
    double n = double(scales.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < scales.size(); ++i) {
      double x = scales[i], y = std::log2(values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    LogLinearFit f;
    if (det == 0.0) {  // all scales equal: flat fit through the mean
      f.slope = 0.0;
      f.intercept = sy / n;
    } else {
      f.slope = (n * sxy - sx * sy) / det;
      f.intercept = (sy - f.slope * sx) / n;
    }
    return f;
  }
};

inline double extrapolate_property(std::span<const double> scales,
                                   std::span<const double> values,
                                   double target_scale) {
  return LogLinearFit::fit(scales, values).eval(target_scale);
}

inline double extrapolate_property(const std::vector<int>& scales,
                                   const std::vector<double>& values,
                                   int target_scale) {
  std::vector<double> s(scales.begin(), scales.end());
  return extrapolate_property(std::span<const double>(s),
                              std::span<const double>(values),
                              double(target_scale));
}

}  // namespace fggs
