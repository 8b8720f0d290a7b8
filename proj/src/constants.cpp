#include "grenlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "grenlab/numerics.hpp"

namespace grenlab {

namespace {

constexpr double kQuadTol = 1e-14;
constexpr double kIdentityTol = 1e-10;

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

double weight_at(const WeightFunction& w, double x) { return w ? w(x) : 1.0; }

}  // namespace

ChernoffInputs chernoff_inputs(const ChernoffEstimates& ch, double k) {
  const std::size_t i = ch.k_index(k);
  ChernoffInputs in;
  in.k = k;
  in.abs_moment = ch.abs_moment[i];
  in.abs_moment_se = ch.abs_moment_se[i];
  in.kappa = ch.kappa[i];
  in.kappa_se = ch.kappa_se[i];
  return in;
}

double LimitConstants::sigma_k() const { return std::sqrt(sigma_k2); }

double ch_constant(const MonotoneDensity& d, double l, double m, const std::function<double(double)>& h) {
  if (!(l + m > 0.0)) throw std::invalid_argument("ch_constant: need l + m > 0");
  const double p = (2.0 * l + 2.0 * m + 1.0) / 3.0;
  const double q = (4.0 - 4.0 * l - 4.0 * m) / 3.0;
  // dx = |g'(a)| da with |g'(a)| = 1 / |f'(g(a))|.
  auto integrand = [&](double a) {
    const double slope = std::abs(d.deriv(d.inverse(a)));
    const double ha = h(a);
    return std::pow(4.0 * a, p) * std::pow(slope, q) * ha * ha / slope;
  };
  return 2.0 * integrate(integrand, d.f1(), d.f0(), kQuadTol);
}

LimitConstants compute_constants(const MonotoneDensity& d, const ChernoffInputs& inputs, const WeightFunction& weight) {
  const double k = inputs.k;
  if (!(k > 0.0)) throw std::invalid_argument("compute_constants: k must be positive");
  if (!(inputs.abs_moment > 0.0)) throw std::invalid_argument("compute_constants: E|V(0)|^k must be positive");
  if (!(inputs.kappa > 0.0)) {
    throw std::invalid_argument("compute_constants: kappa_k must be positive (increase the replications)");
  }
  LimitConstants out;
  out.inputs = inputs;

  out.mean_integral = integrate(
      [&](double x) { return std::pow(4.0 * d.pdf(x) * std::abs(d.deriv(x)), k / 3.0) * weight_at(weight, x); }, 0.0,
      1.0, kQuadTol);
  out.variance_integral = integrate(
      [&](double x) {
        const double w = weight_at(weight, x);
        return std::pow(4.0 * d.pdf(x), (2.0 * k + 1.0) / 3.0) * std::pow(std::abs(d.deriv(x)), (2.0 * k - 2.0) / 3.0) *
               w * w;
      },
      0.0, 1.0, kQuadTol);

  out.mu_k = std::pow(inputs.abs_moment * out.mean_integral, 1.0 / k);
  out.sigma2 = 2.0 * out.variance_integral * inputs.kappa;
  out.sigma_k2 = out.sigma2 / (k * k * std::pow(out.mu_k, 2.0 * k - 2.0));

  // Route 2: c_h kappa over levels.
  out.c_h = ch_constant(d, 0.0, k, [&](double a) {
    const double x = d.inverse(a);
    return std::pow(std::abs(d.deriv(x)), k - 1.0) * weight_at(weight, x);
  });
  const double sigma2_ch = out.c_h * inputs.kappa;

  // Route 3: the closed display with 4 factored out.
  double top = 0.0;
  double bottom = 0.0;
  if (weight) {
    top = integrate(
        [&](double x) {
          const double w = weight(x);
          return std::pow(d.pdf(x), (2.0 * k + 1.0) / 3.0) * std::pow(std::abs(d.deriv(x)), (2.0 * k - 2.0) / 3.0) * w *
                 w;
        },
        0.0, 1.0, kQuadTol);
    bottom = integrate([&](double x) { return std::pow(d.pdf(x) * std::abs(d.deriv(x)), k / 3.0) * weight(x); }, 0.0,
                       1.0, kQuadTol);
  } else {
    top = density_integral(d, (2.0 * k + 1.0) / 3.0, (2.0 * k - 2.0) / 3.0);
    bottom = density_integral(d, k / 3.0, k / 3.0);
  }
  const double display =
      top / (k * k * std::pow(inputs.abs_moment * bottom, (2.0 * k - 2.0) / k)) * 8.0 * inputs.kappa;

  out.identity_gap = std::max(relative_gap(out.sigma2, sigma2_ch), relative_gap(out.sigma_k2, display));
  if (!(out.identity_gap <= kIdentityTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "compute_constants: routes disagree (sigma^2 " << out.sigma2 << " vs c_h kappa " << sigma2_ch
        << "; sigma_k^2 " << out.sigma_k2 << " vs display " << display << ")";
    throw std::logic_error(msg.str());
  }

  // Delta method, treating the moment and kappa estimates as independent.
  const double rel_m = inputs.abs_moment_se / inputs.abs_moment;
  const double rel_kappa = inputs.kappa_se / inputs.kappa;
  out.mu_k_se = out.mu_k * rel_m / k;
  out.sigma2_se = out.sigma2 * rel_kappa;
  out.sigma_k2_se = out.sigma_k2 * std::hypot(rel_kappa, (2.0 * k - 2.0) / k * rel_m);
  return out;
}

}  // namespace grenlab
