#pragma once

// Static SVG rendering of experiment reports: per sample size, a histogram of
// the statistic and, for standardized statistics, the N(0, 1) density and a
// normal QQ plot with a 99% Kolmogorov-Smirnov band. Output bytes depend only
// on the report.

#include <cstddef>
#include <string>
#include <vector>

#include "grenlab/experiments.hpp"

namespace grenlab::cli {

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

// Equal-width bins over [min, max]; a constant sample gives one bin of width
// 1 centered on the value. Empty input gives no bins.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins);

// Distance d with P(D_n > d) = alpha under the asymptotic KS law, using the
// same finite-n correction as the KS p-values.
double ks_critical_distance(std::size_t n, double alpha);

struct QqPoint {
  double theoretical = 0.0;  // Phi^{-1}((i - 1/2) / n)
  double observed = 0.0;     // i-th order statistic
  double band_lo = 0.0;      // Phi^{-1}(i / n - d)
  double band_hi = 0.0;      // Phi^{-1}((i - 1) / n + d)
  bool inside() const { return observed >= band_lo && observed <= band_hi; }
};

// Band edges beyond (0, 1) in probability are +-infinity.
std::vector<QqPoint> normal_qq(std::vector<double> values, double alpha = 0.01);

std::string render_svg(const ExperimentReport& report);

}  // namespace grenlab::cli
