#pragma once

// Adaptive Gauss-Legendre quadrature and bracketed root finding.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace grenlab {

namespace detail {

// 15-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence.
struct GaussLegendreRule {
  static constexpr std::size_t kOrder = 15;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendreRule() {
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < kOrder; ++i) {
      double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t j = 2; j <= kOrder; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendreRule& gauss_legendre_rule() {
  static const GaussLegendreRule rule;
  return rule;
}

template <class F>
double gauss_legendre(F& f, double a, double b) {
  const auto& rule = gauss_legendre_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < GaussLegendreRule::kOrder; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth,
                     std::size_t& evaluations) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre(f, a, mid);
  const double right = gauss_legendre(f, mid, b);
  evaluations += 2 * GaussLegendreRule::kOrder;
  const double halves = left + right;
  const double estimate = std::abs(halves - whole);
  if (estimate <= tol || estimate <= 1e-15 * std::abs(halves) || depth >= 60 || mid <= a || mid >= b) {
    return halves;
  }
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth + 1, evaluations) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth + 1, evaluations);
}

}  // namespace detail

struct QuadratureStats {
  std::size_t evaluations = 0;
};

// Integrates f over [a, b] to absolute accuracy `tol`. Each interval is
// compared against the sum over its two halves; the difference is the error
// estimate, and intervals that fail it are halved again.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, QuadratureStats* stats = nullptr) {
  if (!(b > a)) return 0.0;
  std::size_t evaluations = detail::GaussLegendreRule::kOrder;
  const double whole = detail::gauss_legendre(f, a, b);
  const double result = detail::adaptive_step(f, a, b, whole, tol, 0, evaluations);
  if (stats != nullptr) stats->evaluations += evaluations;
  return result;
}

// Root of a function that changes sign exactly once on [lo, hi], by bisection.
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace grenlab
