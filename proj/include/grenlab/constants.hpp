#pragma once

// Limit constants of the standardized L_k error: the centering mu_k, the
// inverse-process variance sigma^2 and the variance sigma_k^2 of the L_k
// error itself, assembled from density integrals and Chernoff moments.
//
//   mu_k^k    = E|V(0)|^k  * int (4 f |f'|)^{k/3} w
//   sigma^2   = 2 kappa_k  * int (4 f)^{(2k+1)/3} |f'|^{(2k-2)/3} w^2
//   sigma_k^2 = sigma^2 / (k^2 mu_k^{2k-2})
//
// w is an optional weight on [0, 1] (w = 1 gives the unweighted error).

#include <functional>

#include "grenlab/chernoff.hpp"
#include "grenlab/density.hpp"

namespace grenlab {

struct ChernoffInputs {
  double k = 1.0;
  double abs_moment = 0.0;  // E|V(0)|^k
  double abs_moment_se = 0.0;
  double kappa = 0.0;  // int_0^inf cov(|xi(0)|^k, |xi(c)|^k) dc
  double kappa_se = 0.0;
};

// Throws std::out_of_range when the estimates do not cover k.
ChernoffInputs chernoff_inputs(const ChernoffEstimates& ch, double k);

struct LimitConstants {
  ChernoffInputs inputs;
  double mean_integral = 0.0;      // int (4 f |f'|)^{k/3} w
  double variance_integral = 0.0;  // int (4 f)^{(2k+1)/3} |f'|^{(2k-2)/3} w^2

  double mu_k = 0.0;
  double mu_k_se = 0.0;
  double sigma2 = 0.0;
  double sigma2_se = 0.0;
  double sigma_k2 = 0.0;
  double sigma_k2_se = 0.0;
  // c_h with l = 0, m = k, h(a) = |g'(a)|^{1-k} w(g(a)); c_h kappa_k = sigma^2.
  double c_h = 0.0;
  // Largest relative disagreement between the independent routes.
  double identity_gap = 0.0;

  double k() const { return inputs.k; }
  double sigma_k() const;
};

using WeightFunction = std::function<double(double)>;

// Computes sigma^2 through the x-integral and through c_h (integrated over
// levels a), and sigma_k^2 through the delta-method quotient and through the
// closed display in terms of int f^p |f'|^q. Throws std::logic_error when the
// routes disagree by more than 1e-10 relative.
LimitConstants compute_constants(const MonotoneDensity& d, const ChernoffInputs& inputs,
                                 const WeightFunction& weight = {});

// c_h = 2 int_0^1 (4 f)^{(2l+2m+1)/3} |f'|^{(4-4l-4m)/3} h(f(x))^2 dx, computed
// as an integral over levels a in [f(1), f(0)]. Requires l + m > 0.
double ch_constant(const MonotoneDensity& d, double l, double m, const std::function<double(double)>& h);

}  // namespace grenlab
