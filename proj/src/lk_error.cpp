#include "grenlab/lk_error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "grenlab/numerics.hpp"

namespace grenlab {

namespace {

constexpr double kPieceTolerance = 1e-12;

double power(double base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  if (exponent == 0.0) return 1.0;
  return std::pow(base, exponent);
}

// Integral over [lo, hi] of |level - f(x)|^k w(x), where level - f changes
// sign at most once.
double piece_error(const MonotoneDensity& d, double level, double lo, double hi, double k,
                   const std::function<double(double)>& weight) {
  if (!(hi > lo)) return 0.0;
  const double crossing = level_crossing(d, level, lo, hi);
  const double tol = kPieceTolerance * (hi - lo);
  double total = 0.0;
  if (weight) {
    auto integrand = [&](double x) { return power(std::abs(level - d.pdf(x)), k) * weight(x); };
    total += integrate(integrand, lo, crossing, tol);
    total += integrate(integrand, crossing, hi, tol);
  } else {
    auto integrand = [&](double x) { return power(std::abs(level - d.pdf(x)), k); };
    total += integrate(integrand, lo, crossing, tol);
    total += integrate(integrand, crossing, hi, tol);
  }
  return total;
}

}  // namespace

void ErrorSpec::validate() const {
  if (!(k >= 1.0) || !std::isfinite(k)) throw std::invalid_argument("error spec: k must be >= 1");
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw std::invalid_argument("error spec: need 0 <= lo < hi <= 1");
}

double lk_error(const StepDensity& estimate, const MonotoneDensity& d, const ErrorSpec& spec) {
  spec.validate();
  double total = 0.0;
  for (std::size_t j = 0; j < estimate.values.size(); ++j) {
    const double p = std::max(estimate.breakpoints[j], spec.lo);
    const double q = std::min(estimate.breakpoints[j + 1], spec.hi);
    if (q <= p) continue;
    total += piece_error(d, estimate.values[j], p, q, spec.k, spec.weight);
  }
  return total;
}

double inverse_power_integral(const StepDensity& estimate, const MonotoneDensity& d, double p, double q,
                              double a_lo, double a_hi) {
  if (!(a_hi > a_lo)) return 0.0;
  const auto& values = estimate.values;
  const auto& breaks = estimate.breakpoints;
  const std::size_t m = values.size();
  auto integrand_for = [&](double position) {
    return [&d, p, q, position](double a) {
      const double x = d.inverse(a);
      return power(std::abs(position - x), p) * power(std::abs(d.deriv(x)), q);
    };
  };
  double total = 0.0;
  // On (values[J], values[J-1]] the inverse equals breaks[J], J = 0..m, with
  // values[-1] = +inf and values[m] = -inf.
  for (std::size_t J = 0; J <= m; ++J) {
    const double upper = (J == 0) ? std::numeric_limits<double>::infinity() : values[J - 1];
    const double lower = (J == m) ? -std::numeric_limits<double>::infinity() : values[J];
    const double lo = std::max(lower, a_lo);
    const double hi = std::min(upper, a_hi);
    if (!(hi > lo)) continue;
    const double position = breaks[J];
    auto integrand = integrand_for(position);
    // position - g(a) increases with a; split where it vanishes.
    auto gap = [&](double a) { return position - d.inverse(a); };
    double split = lo;
    if (gap(lo) >= 0.0) {
      split = lo;
    } else if (gap(hi) <= 0.0) {
      split = hi;
    } else {
      split = bisect_root(gap, lo, hi, 1e-12);
    }
    const double tol = kPieceTolerance * (hi - lo);
    total += integrate(integrand, lo, split, tol);
    total += integrate(integrand, split, hi, tol);
  }
  return total;
}

double inverse_lk_error(const ConcaveMajorant& majorant, const MonotoneDensity& d, double k, double a_lo,
                        double a_hi) {
  if (!(k >= 1.0)) throw std::invalid_argument("inverse_lk_error: k must be >= 1");
  const double tol = 1e-12;
  if (!(a_lo >= d.f1() - tol && a_hi <= d.f0() + tol && a_lo < a_hi)) {
    throw std::invalid_argument("inverse_lk_error: band must lie inside [f(1), f(0)]");
  }
  return inverse_power_integral(grenander(majorant), d, k, k - 1.0, a_lo, a_hi);
}

double inverse_lk_error(const EmpiricalCdf& ecdf, const MonotoneDensity& d, double k, double a_lo,
                        double a_hi) {
  return inverse_lk_error(fit_lcm(ecdf), d, k, a_lo, a_hi);
}

SegmentComparison compare_segment(const Segment& segment, const StepDensity& clipped, const MonotoneDensity& d,
                                  double k) {
  SegmentComparison out;
  const double curvature = d.sup_abs_deriv2();
  const double slope = d.inf_abs_deriv();
  out.gap_limit = curvature > 0.0 ? slope * slope / (2.0 * curvature) : std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < clipped.values.size(); ++j) {
    const double p = std::max(clipped.breakpoints[j], segment.s);
    const double q = std::min(clipped.breakpoints[j + 1], segment.t);
    if (q <= p) continue;
    const double v = clipped.values[j];
    out.sup_gap = std::max({out.sup_gap, std::abs(v - d.pdf(p)), std::abs(v - d.pdf(q))});
  }
  if (!(out.sup_gap < out.gap_limit)) return out;
  out.checked = true;
  ErrorSpec spec;
  spec.k = k;
  spec.lo = segment.s;
  spec.hi = segment.t;
  out.direct = lk_error(clipped, d, spec);
  const double a_lo = d.pdf(segment.t);
  const double a_hi = d.pdf(segment.s);
  out.inverse = inverse_power_integral(clipped, d, k, k - 1.0, a_lo, a_hi);
  out.bound_integrand = inverse_power_integral(clipped, d, k + 1.0, k, a_lo, a_hi);
  out.delta = out.direct - out.inverse;
  return out;
}

StandardizedStatistic standardize(double raw_error, std::size_t n, double k, double mu_k, double sigma_k) {
  if (!(raw_error >= 0.0)) throw std::invalid_argument("standardize: raw error must be nonnegative");
  if (!(sigma_k > 0.0)) throw std::invalid_argument("standardize: sigma_k must be positive");
  if (n == 0) throw std::invalid_argument("standardize: n must be positive");
  const double nd = static_cast<double>(n);
  const double scaled = std::cbrt(nd) * std::pow(raw_error, 1.0 / k);
  return {raw_error, std::pow(nd, 1.0 / 6.0) * (scaled - mu_k) / sigma_k};
}

EpsWindow admissible_eps_window(double k) {
  if (!(k >= 2.5)) throw std::invalid_argument("trimmed error: k must be >= 2.5");
  return {1.0 / 6.0, (k - 1.0) / (3.0 * k - 6.0)};
}

double modified_lk_error(const StepDensity& estimate, const MonotoneDensity& d, double k, double eps,
                         std::size_t n) {
  const EpsWindow window = admissible_eps_window(k);
  if (!(eps > window.lo && eps < window.hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trimmed error: eps = " << eps << " outside the admissible window (" << window.lo << ", " << window.hi
        << ") for k = " << k;
    throw std::invalid_argument(msg.str());
  }
  const double margin = std::pow(static_cast<double>(n), -eps);
  if (!(margin < 0.5)) throw std::invalid_argument("trimmed error: n^{-eps} must be below 1/2");
  ErrorSpec spec;
  spec.k = k;
  spec.lo = margin;
  spec.hi = 1.0 - margin;
  return lk_error(estimate, d, spec);
}

std::function<double(double)> inverse_sd_weight(const MonotoneDensity& d, double k) {
  return [d, k](double x) { return std::pow(0.5 * d.pdf(x) * std::abs(d.deriv(x)), -k / 3.0); };
}

}  // namespace grenlab
