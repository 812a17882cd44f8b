// Histogram of a normalized sample against the N(0, 2) density.
#pragma once

#include <cmath>
#include <filesystem>
#include <span>
#include <vector>

namespace rmtlab::experiment {

struct Histogram {
  std::vector<double> edges;   // bins + 1 entries
  std::vector<long> counts;
  std::vector<double> density; // N(0, 2) density at bin centers
  long total = 0;              // all sample values, including out-of-range ones
  long underflow = 0;
  long overflow = 0;
};

inline const double kHistogramHalfWidth = 4.0 * std::sqrt(2.0);

/// Bins [lo, hi) except the last, which is closed. Values outside the range
/// are tallied in underflow/overflow. Throws std::invalid_argument for an
/// empty sample or fewer than four bins.
Histogram build_histogram(std::span<const double> values, int bins, double lo = -kHistogramHalfWidth,
                          double hi = kHistogramHalfWidth);

/// Writes histogram.csv (bin_left,bin_right,count,normal02_density) and
/// histogram.svg into `dir`.
Histogram emit_histogram(std::span<const double> values, int bins, const std::filesystem::path& dir);

}  // namespace rmtlab::experiment
