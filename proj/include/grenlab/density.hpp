#pragma once

// Strictly decreasing, twice differentiable densities on [0, 1] with a
// positive lower bound and a derivative bounded away from zero.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "grenlab/random.hpp"

namespace grenlab {

// f(x) = f0 - (f0 - f1) x. Requires f0 > f1 > 0 and f0 + f1 = 2.
struct LinearFamily {
  double f0 = 1.5;
  double f1 = 0.5;
};

// f(x) = theta exp(-theta x) / (1 - exp(-theta)), theta > 0.
struct TruncatedExponentialFamily {
  double theta = 1.0;
};

using DensityFamily = std::variant<LinearFamily, TruncatedExponentialFamily>;

class MonotoneDensity {
 public:
  double pdf(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;
  double cdf(double x) const;
  // Inverse CDF in closed form; p is clamped to [0, 1].
  double quantile(double p) const;
  // Inverse g of f. Levels above f(0) map to 0 and levels below f(1) map to 1.
  double inverse(double a) const;
  // g'(a) = 1 / f'(g(a)).
  double inverse_deriv(double a) const { return 1.0 / deriv(inverse(a)); }

  double f0() const { return pdf(0.0); }
  double f1() const { return pdf(1.0); }
  double inf_abs_deriv() const;
  double sup_abs_deriv() const;
  double sup_abs_deriv2() const;

  const DensityFamily& family() const { return family_; }
  std::string name() const;

 private:
  friend MonotoneDensity make_density(const DensityFamily& family);
  explicit MonotoneDensity(DensityFamily family);

  DensityFamily family_;
  // Cached per-family coefficients.
  double a_ = 0.0;  // linear: f0; truncexp: theta
  double b_ = 0.0;  // linear: slope magnitude; truncexp: theta / (1 - exp(-theta))
};

// Throws std::invalid_argument when the family violates the shape conditions.
MonotoneDensity make_density(const DensityFamily& family);

// Parses "linear:1.5,0.5", "truncexp:1.0" or the JSON object form
// {"family":"linear","f0":1.5,"f1":0.5} / {"family":"truncexp","theta":1.0}.
DensityFamily parse_density_family(const std::string& text);
std::string density_family_json(const DensityFamily& family);

// I(p, q) = integral over [0, 1] of f(x)^p |f'(x)|^q.
double density_integral(const MonotoneDensity& d, double p, double q);

// n order statistics of an i.i.d. sample from d, ascending. Uniform order
// statistics come from normalized exponential spacings and are mapped through
// the quantile function, so the smallest order statistics drawn from one
// stream stay closely coupled across different n.
std::vector<double> sample(const MonotoneDensity& d, std::size_t n, Stream& stream);
void sample_into(const MonotoneDensity& d, std::size_t n, Stream& stream, std::vector<double>& out);

}  // namespace grenlab
