#pragma once

// Monte Carlo for the argmax process V(c) = argmax_t {W(t) - (t - c)^2} of a
// two-sided Brownian motion W with W(0) = 0, and its stationary version
// xi(c) = V(c) - c: absolute moments of V(0), the covariance curve
// c -> cov(|xi(0)|^k, |xi(c)|^k) and its integral kappa_k.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "grenlab/argmax.hpp"
#include "grenlab/stats.hpp"

namespace grenlab {

struct ArgmaxConfig {
  double horizon = 4.0;  // search window [c - T, c + T]
  double grid_step = 1.0 / 1024.0;
  int refine_depth = 3;  // each level shrinks the step by 8 around the candidates
  std::size_t replications = 100000;
  std::uint64_t seed = 20240917;
  unsigned workers = 0;  // 0: default_workers()

  // Throws std::invalid_argument on T <= 0, h <= 0, depth outside [0, 4] or R = 0.
  void validate() const;
  RefineOptions refine_options(double curvature) const;
};

// argmax over [c - T, c + T] of X(t) - b (t - c)^2 for a given path.
ArgmaxResult parabola_argmax(const BrownianPath& path, double c, double b, const ArgmaxConfig& cfg);

// V_b(c) on the path of one replication (tag selects the stream family).
ArgmaxResult simulate_V(double c, const ArgmaxConfig& cfg, std::uint32_t replication, double b = 1.0,
                        std::uint32_t tag = stream_tag::kChernoffPath);

struct ChernoffEstimates {
  ArgmaxConfig config;
  std::vector<double> k_values;
  std::vector<double> c_grid;

  std::size_t replications = 0;
  std::size_t truncated = 0;
  double mean_V0 = 0.0;
  double mean_V0_se = 0.0;

  // Indexed by position in k_values.
  std::vector<double> abs_moment;  // E|V(0)|^k
  std::vector<double> abs_moment_se;
  std::vector<std::vector<double>> cov_curve;  // [k][c], sample covariance with n - 1
  std::vector<std::vector<double>> cov_se;
  std::vector<double> kappa;  // trapezoid + fitted tail
  std::vector<double> kappa_se;
  std::vector<double> kappa_trapezoid;
  std::vector<double> kappa_tail;

  std::vector<double> V0;  // V(0) per replication
  std::vector<std::string> warnings;

  double truncated_fraction() const {
    return replications > 0 ? static_cast<double>(truncated) / static_cast<double>(replications * c_grid.size())
                             : 0.0;
  }
  // Throws std::out_of_range when k was not estimated.
  std::size_t k_index(double k) const;
};

// c = 0, 0.05, ..., 2.5.
std::vector<double> default_c_grid();

// Covariances are anchored at c = 0 with the same path for every c. Standard
// errors come from a delete-a-group jackknife with 100 groups. When the last
// covariance is still more than 3 standard errors from 0 the grid is widened
// by half once and a warning is recorded.
ChernoffEstimates estimate_chernoff(const std::vector<double>& k_values, const std::vector<double>& c_grid,
                                    const ArgmaxConfig& cfg);

struct ScalingCheck {
  double b = 1.0;
  double c = 0.0;
  std::vector<double> direct;  // argmax of W(t) - b (t - c)^2
  std::vector<double> mapped;  // b^{-2/3} V(c b^{2/3}) on independent paths
  KsResult ks;
};

// Compares V_b(c) with b^{-2/3} V(c b^{2/3}) by a two-sample KS test.
ScalingCheck scaling_check(double b, double c, const ArgmaxConfig& cfg);

}  // namespace grenlab
