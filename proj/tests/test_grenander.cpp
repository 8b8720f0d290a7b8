#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grenlab/grenander.hpp"

using namespace grenlab;
using Catch::Matchers::WithinAbs;

namespace {

MonotoneDensity linear() { return make_density(LinearFamily{1.5, 0.5}); }

// Upper hull by gift wrapping: from the current vertex pick the point with the
// largest slope, taking the farthest one among ties.
std::vector<Vertex> gift_wrap(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  std::vector<Vertex> pts{{0.0, 0.0}};
  for (std::size_t i = 0; i < n; ++i) {
    const double level = double(i + 1) / double(n);
    if (sorted[i] == 0.0) {
      pts[0].y = level;
    } else if (pts.back().t == sorted[i]) {
      pts.back().y = level;
    } else {
      pts.push_back({sorted[i], level});
    }
  }
  if (pts.back().t < 1.0) pts.push_back({1.0, 1.0});
  std::vector<Vertex> hull{pts[0]};
  std::size_t cur = 0;
  while (cur + 1 < pts.size()) {
    std::size_t best = cur + 1;
    double best_slope = (pts[best].y - pts[cur].y) / (pts[best].t - pts[cur].t);
    for (std::size_t j = cur + 2; j < pts.size(); ++j) {
      const double s = (pts[j].y - pts[cur].y) / (pts[j].t - pts[cur].t);
      if (s >= best_slope - 1e-12 * std::abs(best_slope)) {
        best = j;
        best_slope = std::max(best_slope, s);
      }
    }
    hull.push_back(pts[best]);
    cur = best;
  }
  return hull;
}

double piecewise_linear(const std::vector<Vertex>& v, double t) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (t <= v[i].t) return v[i - 1].y + (v[i].y - v[i - 1].y) * (t - v[i - 1].t) / (v[i].t - v[i - 1].t);
  }
  return v.back().y;
}

// Rightmost maximizer of F_n(x) - a x over the candidate points 0, x_(i), 1.
double brute_argmax(const std::vector<double>& sorted, double a) {
  const double n = double(sorted.size());
  double best_x = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] == 0.0) best = std::max(best, double(i + 1) / n);
  }
  std::vector<std::pair<double, double>> cand;
  for (std::size_t i = 0; i < sorted.size(); ++i) cand.push_back({sorted[i], double(i + 1) / n - a * sorted[i]});
  cand.push_back({1.0, 1.0 - a});
  for (const auto& c : cand) best = std::max(best, c.second);
  for (const auto& c : cand) {
    if (c.second >= best - 1e-12) best_x = std::max(best_x, c.first);
  }
  return best_x;
}

}  // namespace

TEST_CASE("empirical cdf validation") {
  CHECK_THROWS_AS(EmpiricalCdf::from_unsorted({}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf::from_unsorted({0.5, 1.2}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf::from_sorted({0.5, 0.2}), std::invalid_argument);
  const auto F = EmpiricalCdf::from_unsorted({0.75, 0.25});
  CHECK(F(0.0) == 0.0);
  CHECK(F(0.25) == 0.5);
  CHECK(F(0.5) == 0.5);
  CHECK(F(1.0) == 1.0);
}

TEST_CASE("two-point sample majorant and estimator") {
  const auto F = EmpiricalCdf::from_unsorted({0.75, 0.25});
  const auto lcm = fit_lcm(F);
  REQUIRE(lcm.vertices == std::vector<Vertex>{{0, 0}, {0.25, 0.5}, {0.75, 1.0}, {1.0, 1.0}});
  const auto est = grenander(lcm);
  CHECK(est.values == std::vector<double>{2.0, 1.0, 0.0});
  CHECK(eval_fhat(est, 0.0) == 2.0);
  CHECK(eval_fhat(est, 0.25) == 2.0);
  CHECK(eval_fhat(est, 0.26) == 1.0);
  CHECK(eval_fhat(est, 1.0) == 0.0);
  CHECK_THROWS_AS(eval_fhat(est, 1.5), std::domain_error);
  CHECK_THROWS_AS(eval_fhat(est, -0.1), std::domain_error);
  CHECK(est.mass() == 1.0);
  CHECK(inverse_un(lcm, 1.5) == 0.25);
  CHECK(inverse_un(lcm, 2.0) == 0.25);
  CHECK(inverse_un(lcm, 1.0) == 0.75);
  CHECK(inverse_un(lcm, 3.0) == 0.0);
  CHECK(inverse_un(lcm, -1.0) == 1.0);
}

TEST_CASE("ties and boundary values") {
  const auto lcm = fit_lcm(EmpiricalCdf::from_unsorted({0.5, 0.5, 0.5, 0.9}));
  REQUIRE(lcm.vertices == std::vector<Vertex>{{0, 0}, {0.5, 0.75}, {0.9, 1.0}, {1.0, 1.0}});
  const auto at_zero = fit_lcm(EmpiricalCdf::from_unsorted({0.0, 0.5}));
  CHECK(at_zero.vertices.front() == Vertex{0.0, 0.5});
  const auto at_one = fit_lcm(EmpiricalCdf::from_unsorted({0.2, 1.0}));
  CHECK(at_one.vertices.back() == Vertex{1.0, 1.0});
  // Collinear points are not vertices.
  const auto line = fit_lcm(EmpiricalCdf::from_unsorted({0.25, 0.5, 0.75, 1.0}));
  CHECK(line.vertices == std::vector<Vertex>{{0, 0}, {1, 1}});
}

TEST_CASE("majorant matches gift wrapping on random samples") {
  const auto d = linear();
  for (std::uint32_t rep = 0; rep < 200; ++rep) {
    Stream s(2024, stream_tag::kSynthetic, rep);
    const std::size_t n = 1 + rep % 60 * 7;
    auto x = sample(d, n, s);
    if (rep % 5 == 0) {
      // Rounded samples exercise ties.
      for (double& v : x) v = std::round(v * 20) / 20;
    }
    const auto lcm = fit_lcm_sorted(x);
    const auto oracle = gift_wrap(x);
    if (rep % 5 != 0) {
      REQUIRE(lcm.vertices.size() == oracle.size());
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(lcm.vertices[i].t == oracle[i].t);
        CHECK(lcm.vertices[i].y == oracle[i].y);
      }
    } else {
      // On a grid, exactly collinear points may survive rounding as vertices
      // in one construction and not the other; the functions still agree.
      for (const auto& v : lcm.vertices) CHECK_THAT(piecewise_linear(oracle, v.t), WithinAbs(v.y, 1e-12));
      for (const auto& v : oracle) CHECK_THAT(piecewise_linear(lcm.vertices, v.t), WithinAbs(v.y, 1e-12));
    }
    // Concavity, majorization and unit mass.
    const auto est = grenander(lcm);
    for (std::size_t j = 1; j < est.values.size(); ++j) CHECK(est.values[j] < est.values[j - 1]);
    CHECK_THAT(est.mass(), WithinAbs(1.0 - lcm.vertices.front().y, 1e-12));
    const auto F = EmpiricalCdf::from_sorted(x);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = x[i];
      const std::size_t j = est.piece_index(t);
      const double value = lcm.vertices[j].y + est.values[j] * (t - lcm.vertices[j].t);
      CHECK(value >= F(t) - 1e-12);
    }
    for (double a : {0.3, 0.7, 1.0, 1.2, 1.6, 2.5}) {
      CHECK(inverse_un(lcm, a) == brute_argmax(x, a));
    }
  }
}

TEST_CASE("switch relation") {
  const auto d = linear();
  Stream s(3, stream_tag::kSynthetic, 1);
  const auto x = sample(d, 500, s);
  const auto lcm = fit_lcm_sorted(x);
  const auto est = grenander(lcm);
  for (int i = 1; i < 100; ++i) {
    const double t = i / 100.0;
    for (double a : {0.6, 0.9, 1.1, 1.4}) {
      CHECK((est(t) >= a) == (inverse_un(lcm, a) >= t));
    }
  }
}

TEST_CASE("full-range cutoff clips to [f(1), f(0)]") {
  const auto d = linear();
  const auto est = grenander(fit_lcm(EmpiricalCdf::from_unsorted({0.75, 0.25})));
  const auto spec = CutoffSpec::full_range();
  const auto clipped = apply_cutoff(est, d, spec);
  CHECK(clipped.values == std::vector<double>{1.5, 1.0, 0.5});
  CHECK(clipped.breakpoints == std::vector<double>{0.0, 0.25, 0.75, 1.0});
  CHECK(inverse_cutoff(est, d, spec, 1.2) == 0.25);
  CHECK(inverse_cutoff(est, d, spec, 1.5) == 0.25);
  CHECK(inverse_cutoff(est, d, spec, 1.0) == 0.75);
  CHECK(inverse_cutoff(est, d, spec, 0.5) == 1.0);
  CHECK_THROWS_AS(inverse_cutoff(est, d, spec, 1.6), std::domain_error);
}

TEST_CASE("eps-range cutoff") {
  const auto d = linear();
  const auto est = grenander(fit_lcm(EmpiricalCdf::from_unsorted({0.75, 0.25})));
  const auto spec = CutoffSpec::eps_range(0.5, 16);  // margin 1/4
  CHECK(spec.margin() == 0.25);
  const auto band = spec.band(d);
  CHECK(band.lo == 0.75);
  CHECK(band.hi == 1.25);
  const auto clipped = apply_cutoff(est, d, spec);
  CHECK(clipped.values == std::vector<double>{1.25, 1.0, 0.75});
  CHECK(inverse_cutoff(est, d, spec, 1.25) == 0.25);
  CHECK(inverse_cutoff(est, d, spec, 0.75) == 0.75);
  CHECK_THROWS_AS(CutoffSpec::eps_range(0.1, 2).validate(d), std::invalid_argument);
}

TEST_CASE("segment decomposition") {
  const auto d = linear();
  StepDensity flat{{0.0, 1.0}, {1.0}};
  const auto segs = segment_decomposition(flat, d);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].kind == SegmentCase::Below);
  CHECK(segs[0].s == 0.0);
  CHECK_THAT(segs[0].t, WithinAbs(0.5, 1e-12));
  CHECK(segs[1].kind == SegmentCase::Above);
  CHECK(segs[1].t == 1.0);

  const auto est = apply_cutoff(grenander(fit_lcm(EmpiricalCdf::from_unsorted({0.75, 0.25}))), d,
                                CutoffSpec::full_range());
  const auto parts = segment_decomposition(est, d);
  // Segments tile [0, 1] and alternate.
  CHECK(parts.front().s == 0.0);
  CHECK(parts.back().t == 1.0);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    CHECK(parts[i].s == parts[i - 1].t);
    CHECK(parts[i].kind != parts[i - 1].kind);
  }
  for (const auto& seg : parts) {
    for (int i = 1; i < 10; ++i) {
      const double x = seg.s + (seg.t - seg.s) * i / 10.0;
      const double diff = est(x) - d.pdf(x);
      if (seg.kind == SegmentCase::Above) CHECK(diff >= -1e-12);
      if (seg.kind == SegmentCase::Below) CHECK(diff <= 1e-12);
    }
  }
}
