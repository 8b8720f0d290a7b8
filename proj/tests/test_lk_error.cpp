#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "grenlab/lk_error.hpp"
#include "grenlab/numerics.hpp"

using namespace grenlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MonotoneDensity linear() { return make_density(LinearFamily{1.5, 0.5}); }

ErrorSpec spec_k(double k) {
  ErrorSpec spec;
  spec.k = k;
  return spec;
}

// Integral over [p, q] of |v - (1.5 - x)|^k in closed form. With u = v - 1.5 + x
// the integrand is |u|^k; when u keeps its sign the difference of powers is
// formed through expm1/log1p to avoid cancellation for large v.
double linear_piece(double v, double p, double q, double k) {
  const double u1 = v - 1.5 + p;
  const double u2 = v - 1.5 + q;
  if (u1 < 0.0 && u2 > 0.0) return (std::pow(-u1, k + 1) + std::pow(u2, k + 1)) / (k + 1);
  const double small = std::min(std::abs(u1), std::abs(u2));
  const double width = q - p;
  if (small == 0.0) return std::pow(width, k + 1) / (k + 1);
  return std::pow(small, k + 1) * std::expm1((k + 1) * std::log1p(width / small)) / (k + 1);
}

double linear_oracle(const StepDensity& est, double k) {
  double total = 0.0;
  for (std::size_t j = 0; j < est.values.size(); ++j) {
    total += linear_piece(est.values[j], est.breakpoints[j], est.breakpoints[j + 1], k);
  }
  return total;
}

// Midpoint rule inside every constant piece, as an independent check for
// curved densities.
double midpoint_error(const StepDensity& est, const MonotoneDensity& d, double k) {
  const int cells = 4000;
  double total = 0.0;
  for (std::size_t j = 0; j < est.values.size(); ++j) {
    const double p = est.breakpoints[j];
    const double h = (est.breakpoints[j + 1] - p) / cells;
    for (int i = 0; i < cells; ++i) {
      total += std::pow(std::abs(est.values[j] - d.pdf(p + (i + 0.5) * h)), k) * h;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("flat estimate against the linear density") {
  const auto d = linear();
  StepDensity flat{{0.0, 1.0}, {1.0}};
  CHECK_THAT(lk_error(flat, d, spec_k(1.0)), WithinAbs(0.25, 1e-12));
  CHECK_THAT(lk_error(flat, d, spec_k(2.0)), WithinAbs(1.0 / 12.0, 1e-12));
  ErrorSpec half;
  half.k = 1.0;
  half.lo = 0.5;
  CHECK_THAT(lk_error(flat, d, half), WithinAbs(0.125, 1e-12));
}

TEST_CASE("invalid error specs") {
  const auto d = linear();
  StepDensity flat{{0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(lk_error(flat, d, spec_k(0.5)), std::invalid_argument);
  ErrorSpec bad;
  bad.lo = 0.7;
  bad.hi = 0.3;
  CHECK_THROWS_AS(lk_error(flat, d, bad), std::invalid_argument);
}

TEST_CASE("piecewise closed form on random samples") {
  const auto d = linear();
  for (std::uint32_t rep = 0; rep < 30; ++rep) {
    Stream s(99, stream_tag::kSynthetic, rep);
    const auto x = sample(d, 50 + 40 * rep, s);
    const auto est = grenander(fit_lcm_sorted(x));
    for (double k : {1.0, 2.0, 2.5, 3.7}) {
      const double exact = linear_oracle(est, k);
      CHECK_THAT(lk_error(est, d, spec_k(k)), WithinAbs(exact, 1e-11 * std::max(1.0, exact)));
    }
  }
}

TEST_CASE("curved density against a midpoint rule") {
  const auto d = make_density(TruncatedExponentialFamily{2.0});
  Stream s(4, stream_tag::kSynthetic, 0);
  const auto est = grenander(fit_lcm_sorted(sample(d, 300, s)));
  for (double k : {1.0, 2.0, 3.0}) {
    CHECK_THAT(lk_error(est, d, spec_k(k)), WithinRel(midpoint_error(est, d, k), 1e-6));
  }
}

TEST_CASE("inverse error of a single jump") {
  const auto d = linear();
  // U = 1/2 on the whole band: integral of |1/2 - g(a)|^2 / |g'|, g(a) = 1.5 - a.
  StepDensity one{{0.0, 0.5, 1.0}, {1.5, 0.5}};
  CHECK_THAT(inverse_power_integral(one, d, 2.0, 1.0, 0.75, 1.25), WithinAbs(2.0 * 0.25 * 0.25 * 0.25 / 3.0, 1e-13));
  CHECK_THAT(inverse_power_integral(one, d, 1.0, 0.0, 0.5, 1.5), WithinAbs(0.25, 1e-13));
  CHECK_THAT(inverse_power_integral(one, d, 2.0, 1.0, 0.5, 1.0), WithinAbs(0.0625 / 3.0 * 2.0, 1e-13));
}

TEST_CASE("for k = 1 the inverse error equals the clipped direct error") {
  for (const auto& d : {linear(), make_density(TruncatedExponentialFamily{1.0})}) {
    for (std::uint32_t rep = 0; rep < 20; ++rep) {
      Stream s(17, stream_tag::kSynthetic, rep);
      const auto x = sample(d, 20 + 30 * rep, s);
      const auto lcm = fit_lcm_sorted(x);
      const auto clipped = apply_cutoff(grenander(lcm), d, CutoffSpec::full_range());
      const double direct = lk_error(clipped, d, spec_k(1.0));
      const double inverse = inverse_lk_error(lcm, d, 1.0, d.f1(), d.f0());
      CHECK_THAT(inverse, WithinAbs(direct, 1e-10));
    }
  }
  CHECK_THROWS_AS(inverse_lk_error(fit_lcm_sorted({0.5}), linear(), 1.0, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("segment comparison bound") {
  const auto d = make_density(TruncatedExponentialFamily{0.5});
  for (std::uint32_t rep = 0; rep < 10; ++rep) {
    Stream s(23, stream_tag::kSynthetic, rep);
    const auto x = sample(d, 2000, s);
    const auto clipped = apply_cutoff(grenander(fit_lcm_sorted(x)), d, CutoffSpec::full_range());
    for (const auto& seg : segment_decomposition(clipped, d)) {
      for (double k : {1.0, 2.0, 3.0}) {
        const auto cmp = compare_segment(seg, clipped, d, k);
        if (!cmp.checked) continue;
        if (k == 1.0) {
          CHECK_THAT(cmp.delta, WithinAbs(0.0, 1e-12));
        } else {
          const double slope = d.inf_abs_deriv();
          const double bound = 2.0 * k * d.sup_abs_deriv2() * std::pow(d.sup_abs_deriv(), k - 1) /
                               std::pow(slope, 2.0 * k) * cmp.bound_integrand;
          CHECK(std::abs(cmp.delta) <= bound + 1e-13);
        }
      }
    }
  }
}

TEST_CASE("standardization") {
  const auto t = standardize(std::pow(2.0, 3.0) / 1000.0, 1000, 3.0, 1.0, 2.0);
  CHECK_THAT(t.value, WithinAbs(std::pow(1000.0, 1.0 / 6.0) * (2.0 - 1.0) / 2.0, 1e-12));
  CHECK_THROWS_AS(standardize(1.0, 10, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(standardize(1.0, 10, 1.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("trimming window") {
  CHECK_THROWS_AS(admissible_eps_window(2.0), std::invalid_argument);
  const auto w25 = admissible_eps_window(2.5);
  CHECK_THAT(w25.lo, WithinAbs(1.0 / 6.0, 1e-15));
  CHECK_THAT(w25.hi, WithinAbs(1.0, 1e-15));
  const auto w4 = admissible_eps_window(4.0);
  CHECK_THAT(w4.hi, WithinAbs(0.5, 1e-15));
  CHECK_THAT(w4.midpoint(), WithinAbs(1.0 / 3.0, 1e-15));
  const auto d = linear();
  StepDensity flat{{0.0, 1.0}, {1.0}};
  try {
    modified_lk_error(flat, d, 4.0, 0.6, 1000);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  // Trimmed integral of |x - 1/2|^4 over [1/10, 9/10] for n = 1000, eps = 1/3.
  const double m = 0.1;
  CHECK_THAT(modified_lk_error(flat, d, 4.0, 1.0 / 3.0, 1000), WithinAbs(2.0 * std::pow(0.5 - m, 5) / 5.0, 1e-12));
}

TEST_CASE("weighted error") {
  const auto d = linear();
  StepDensity flat{{0.0, 1.0}, {1.0}};
  ErrorSpec spec;
  spec.k = 2.0;
  spec.weight = inverse_sd_weight(d, 2.0);
  const double expected = integrate(
      [&](double x) { return std::pow(x - 0.5, 2) * std::pow(0.5 * (1.5 - x), -2.0 / 3.0); }, 0.0, 1.0, 1e-13);
  CHECK_THAT(lk_error(flat, d, spec), WithinRel(expected, 1e-10));
}

TEST_CASE("linear density: direct and inverse errors agree segment by segment") {
  const auto d = linear();
  double max_ratio = 0.0;
  int segments = 0;
  for (std::uint32_t rep = 0; rep < 40; ++rep) {
    Stream s(31, stream_tag::kSynthetic, rep);
    const auto clipped = apply_cutoff(grenander(fit_lcm_sorted(sample(d, 500, s))), d, CutoffSpec::full_range());
    for (const auto& seg : segment_decomposition(clipped, d)) {
      for (double k : {1.0, 2.0, 3.0}) {
        const auto cmp = compare_segment(seg, clipped, d, k);
        REQUIRE(cmp.checked);
        ++segments;
        CHECK(std::abs(cmp.delta) <= 10.0 * cmp.bound_integrand + 1e-12);
        if (cmp.bound_integrand > 1e-9) max_ratio = std::max(max_ratio, std::abs(cmp.delta) / cmp.bound_integrand);
      }
      // k = 1 against the closed form of each piece.
      ErrorSpec spec;
      spec.lo = seg.s;
      spec.hi = seg.t;
      double exact = 0.0;
      for (std::size_t j = 0; j < clipped.values.size(); ++j) {
        const double p = std::max(clipped.breakpoints[j], seg.s);
        const double q = std::min(clipped.breakpoints[j + 1], seg.t);
        if (q > p) exact += linear_piece(clipped.values[j], p, q, 1.0);
      }
      CHECK_THAT(lk_error(clipped, d, spec), WithinAbs(exact, 1e-10));
    }
  }
  CHECK(segments > 1000);
  CHECK(max_ratio < 1e-3);
}

TEST_CASE("unit weight and quadrature refinement") {
  const auto d = make_density(TruncatedExponentialFamily{1.5});
  Stream s(8, stream_tag::kSynthetic, 0);
  const auto est = grenander(fit_lcm_sorted(sample(d, 1000, s)));
  ErrorSpec plain;
  plain.k = 2.5;
  ErrorSpec unit = plain;
  unit.weight = [](double) { return 1.0; };
  CHECK(lk_error(est, d, plain) == lk_error(est, d, unit));
  // A fixed 2 x 15-point rule per signed sub-piece agrees with the adaptive one.
  double fixed = 0.0;
  for (std::size_t j = 0; j < est.values.size(); ++j) {
    const double p = est.breakpoints[j];
    const double q = est.breakpoints[j + 1];
    const double v = est.values[j];
    const double x = level_crossing(d, v, p, q);
    auto integrand = [&](double t) { return std::pow(std::abs(v - d.pdf(t)), 2.5); };
    for (auto [a, b] : {std::pair{p, x}, std::pair{x, q}}) {
      if (b <= a) continue;
      const int pieces = 64;
      for (int i = 0; i < pieces; ++i) {
        auto f = integrand;
        fixed += detail::gauss_legendre(f, a + (b - a) * i / pieces, a + (b - a) * (i + 1) / pieces);
      }
    }
  }
  CHECK_THAT(lk_error(est, d, plain), WithinAbs(fixed, 1e-10));
}

TEST_CASE("error grows with the integration range") {
  const auto d = linear();
  Stream s(12, stream_tag::kSynthetic, 0);
  const auto est = grenander(fit_lcm_sorted(sample(d, 300, s)));
  double previous = 0.0;
  for (double hi : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    ErrorSpec spec;
    spec.k = 2.0;
    spec.hi = hi;
    const double value = lk_error(est, d, spec);
    CHECK(value >= previous);
    previous = value;
  }
}
