#pragma once

// Summary statistics, Kolmogorov-Smirnov tests, least-squares lines and the
// delete-a-group jackknife used by the Monte Carlo drivers.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace grenlab {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // g1 = m3 / m2^{3/2}
  double mean_se() const;
};

Moments moments(std::span<const double> values);

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

// P(sqrt(n) D > lambda) in the Kolmogorov limit, 1 - K(lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic p-values use the Stephens correction (sqrt(n) + 0.12 + 0.11/sqrt(n)) D
// with n the (effective) sample size.
KsResult ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf);
KsResult ks_normal(std::vector<double> values);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double p);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Delete-a-group jackknife. estimate(g) returns the estimator with group g
// left out, for g < groups; estimate(groups) returns the full-sample value.
struct JackknifeResult {
  double value = 0.0;
  double se = 0.0;
};

JackknifeResult group_jackknife(std::size_t groups, const std::function<double(std::size_t)>& estimate);

}  // namespace grenlab
