#pragma once

#include <string>
#include <utility>
#include <vector>

namespace strauss {

/// One sampled point of a numerically checked inequality. `x` and `y` are the
/// coordinates of the sample (e.g. t and r, or xi and 0) and `value` the
/// quantity whose sup/inf is being fitted.
struct Sample {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

/// Fitted constant plus verdict for an inequality checked over a sampled region.
struct WeightReport {
  std::string region;
  double fitted_constant = 0.0;
  Sample worst_point{};
  bool pass = false;
  std::vector<Sample> samples;
  /// Free-form diagnostics (growth ratios, residuals) surfaced in JSON output.
  std::vector<std::pair<std::string, double>> diagnostics;

  double diagnostic(const std::string& key, double fallback = 0.0) const {
    for (const auto& [k, v] : diagnostics) {
      if (k == key) return v;
    }
    return fallback;
  }
};

}  // namespace strauss
