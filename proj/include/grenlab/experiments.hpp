#pragma once

// Seeded Monte Carlo experiments on Grenander fits:
//   Plain         standardized L_k error, 1 <= k < 2.5
//   Modified      standardized L_k error on [n^-eps, 1 - n^-eps], k >= 2.5
//   BoundaryZero  fhat_n(0) / f(0) against sup_{j <= J} j / Gamma_j
//   BoundaryRate  scaled fhat_n(n^-alpha) - f(n^-alpha)
//   Divergence    n^{k/3} E int |fhat - f|^k and var(n^{(2k+1)/6} int_0^{z_n} |fhat - f|^k)
//   BoundaryIntegral  n^{(2k+1)/6} times the error integrals beyond U_n(f(0)) and U_n(f(1))
//
// Plain and Modified draw an independent stream per (replication, n). The
// other modes reuse one stream per replication across the n-grid (common
// random numbers): samples are built from exponential spacings, so the
// smallest order statistics, which drive the boundary behavior, are shared
// between sample sizes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "grenlab/constants.hpp"
#include "grenlab/density.hpp"
#include "grenlab/grenander.hpp"
#include "grenlab/stats.hpp"

namespace grenlab {

enum class ExperimentMode { Plain, Modified, BoundaryZero, BoundaryRate, Divergence, BoundaryIntegral };

std::string mode_name(ExperimentMode mode);
// Accepts the lower-case names: plain, modified, boundary-zero, boundary-rate,
// divergence, boundary-integral.
ExperimentMode parse_mode(const std::string& text);

struct ExperimentConfig {
  DensityFamily density = LinearFamily{1.5, 0.5};
  ExperimentMode mode = ExperimentMode::Plain;
  double k = 1.0;
  std::vector<std::size_t> n_grid{1000, 10000, 100000};
  std::size_t replications = 2000;
  std::uint64_t seed = 20240917;
  double eps = std::numeric_limits<double>::quiet_NaN();  // Modified; NaN selects the window midpoint
  double alpha = 1.0 / 3.0;                                // BoundaryRate
  std::size_t gamma_terms = 100000;                        // BoundaryZero: J
  std::size_t gamma_terms_check = 10000;                   // BoundaryZero: J for the truncation diagnostic
  unsigned workers = 0;

  // Throws std::invalid_argument on regime violations and malformed grids.
  void validate() const;
  double effective_eps() const;
  bool common_random_numbers() const;
};

// Pre-registered pass/fail rule evaluated on the finished report.
struct Check {
  std::string name;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct NSummary {
  std::size_t n = 0;
  Moments stat;  // of the per-replication statistic
  Moments aux;   // of the secondary series (Divergence only)
  KsResult ks;   // against N(0, 1) (Plain, Modified) or the reference sample
  double q95 = 0.0;
};

struct ExperimentReport {
  static constexpr int kVersion = 1;
  ExperimentConfig config;
  double mu_k = std::numeric_limits<double>::quiet_NaN();
  double sigma_k = std::numeric_limits<double>::quiet_NaN();
  std::string stat_label;
  std::string aux_label;

  // Indexed [n][replication].
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> stat;
  std::vector<std::vector<double>> aux;
  std::vector<NSummary> summaries;

  // BoundaryZero: sup j / Gamma_j at J and at the diagnostic J.
  // BoundaryRate with alpha < 1/3: |4 f(0) f'(0)|^{1/3} V(0) draws.
  std::vector<double> reference;
  std::vector<double> reference_check;

  std::vector<Check> checks;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;

  bool passed() const;
};

// Plain and Modified need the limit constants for cfg.k.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const LimitConstants* constants = nullptr);

ExperimentReport run_clt(const ExperimentConfig& cfg, const LimitConstants& constants);
ExperimentReport run_boundary_zero(const ExperimentConfig& cfg);
ExperimentReport run_boundary_rate(const ExperimentConfig& cfg);
ExperimentReport run_divergence(const ExperimentConfig& cfg);
ExperimentReport boundary_integral_magnitude(const ExperimentConfig& cfg);

// Integrals of |fhat - f|^k over [0, U_n(f(0))] and [U_n(f(1)), 1], where the
// estimate leaves the range of f; an empty region contributes 0.
double boundary_error_integral(const ConcaveMajorant& majorant, const MonotoneDensity& d, double k);

// sup_{1 <= j <= J} j / Gamma_j for each J in `checkpoints` (increasing), with
// Gamma_j the partial sums of standard exponentials from `stream`. Blocks of
// terms that cannot beat the running supremum are drawn as one Gamma variate.
std::vector<double> gamma_sup(Stream& stream, const std::vector<std::size_t>& checkpoints);

// Per-step growth ratios of `values` along `n_grid`, normalized to a decade:
// (v_{i+1} / v_i)^{1 / log10(n_{i+1} / n_i)}.
std::vector<double> growth_per_decade(const std::vector<double>& values, const std::vector<std::size_t>& n_grid);

}  // namespace grenlab
