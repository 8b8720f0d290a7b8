#pragma once

// L_k error functionals between a step density estimate and the true density,
// evaluated piece by piece: every constant piece is split at its single
// crossing with f and each smooth sub-piece is integrated adaptively.

#include <cstddef>
#include <functional>

#include "grenlab/density.hpp"
#include "grenlab/grenander.hpp"

namespace grenlab {

struct ErrorSpec {
  double k = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  // Empty means w = 1.
  std::function<double(double)> weight;

  // Throws std::invalid_argument unless k >= 1 and 0 <= lo < hi <= 1.
  void validate() const;
};

// Integral over [lo, hi] of |estimate(x) - f(x)|^k w(x).
double lk_error(const StepDensity& estimate, const MonotoneDensity& d, const ErrorSpec& spec);

// Integral over [a_lo, a_hi] of |U(a) - g(a)|^p / |g'(a)|^q, where U is the
// left-continuous inverse sup{x : estimate(x) >= a} of the step function.
double inverse_power_integral(const StepDensity& estimate, const MonotoneDensity& d, double p, double q,
                              double a_lo, double a_hi);

// Integral over [a_lo, a_hi] of |U_n(a) - g(a)|^k / |g'(a)|^{k-1}.
// Requires f(1) <= a_lo < a_hi <= f(0).
double inverse_lk_error(const ConcaveMajorant& majorant, const MonotoneDensity& d, double k, double a_lo,
                        double a_hi);
double inverse_lk_error(const EmpiricalCdf& ecdf, const MonotoneDensity& d, double k, double a_lo, double a_hi);

struct SegmentComparison {
  bool checked = false;        // false when the small-gap condition fails
  double sup_gap = 0.0;        // sup over the segment of |estimate - f|
  double gap_limit = 0.0;      // (inf|f'|)^2 / (2 sup|f''|), infinite for linear f
  double direct = 0.0;         // integral over [s, t] of |estimate - f|^k
  double inverse = 0.0;        // integral over [f(t), f(s)] of |U - g|^k / |g'|^{k-1}
  double delta = 0.0;          // direct - inverse
  double bound_integrand = 0.0;  // integral over [f(t), f(s)] of |U - g|^{k+1} / |g'|^k
};

// Compares the direct and inverse-scaled errors on one segment of a clipped
// estimate (values inside [f(1), f(0)]).
SegmentComparison compare_segment(const Segment& segment, const StepDensity& clipped, const MonotoneDensity& d,
                                  double k);

struct StandardizedStatistic {
  double raw = 0.0;
  double value = 0.0;
};

// T = n^{1/6} (n^{1/3} L^{1/k} - mu_k) / sigma_k.
StandardizedStatistic standardize(double raw_error, std::size_t n, double k, double mu_k, double sigma_k);

struct EpsWindow {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

// Open window (1/6, (k-1)/(3k-6)) of trimming exponents; requires k >= 2.5.
EpsWindow admissible_eps_window(double k);

// L_k error over [n^{-eps}, 1 - n^{-eps}]. Throws std::invalid_argument with
// the admissible window in the message when eps lies outside it.
double modified_lk_error(const StepDensity& estimate, const MonotoneDensity& d, double k, double eps,
                         std::size_t n);

// w(x) = (f(x) |f'(x)| / 2)^{-k/3}: standardizes each |fhat - f|^k by the
// pointwise limiting scale of the estimator.
std::function<double(double)> inverse_sd_weight(const MonotoneDensity& d, double k);

}  // namespace grenlab
