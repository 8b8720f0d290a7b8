#include "grenlab/grenander.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "grenlab/numerics.hpp"

namespace grenlab {

EmpiricalCdf EmpiricalCdf::from_sorted(std::vector<double> sorted) {
  if (sorted.empty()) throw std::invalid_argument("empirical cdf: sample is empty");
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("empirical cdf: value " + std::to_string(x) + " outside [0, 1]");
    }
    if (i > 0 && x < sorted[i - 1]) throw std::invalid_argument("empirical cdf: sample is not sorted");
  }
  return EmpiricalCdf(std::move(sorted));
}

EmpiricalCdf EmpiricalCdf::from_unsorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return from_sorted(std::move(values));
}

double EmpiricalCdf::operator()(double x) const {
  const auto count = std::upper_bound(points_.begin(), points_.end(), x) - points_.begin();
  return static_cast<double>(count) / static_cast<double>(points_.size());
}

double ConcaveMajorant::slope(std::size_t segment) const {
  const Vertex& left = vertices[segment - 1];
  const Vertex& right = vertices[segment];
  return (right.y - left.y) / (right.t - left.t);
}

namespace {

// Positive for a left turn o -> a -> b.
double cross(const Vertex& o, const Vertex& a, const Vertex& b) {
  return (a.t - o.t) * (b.y - o.y) - (a.y - o.y) * (b.t - o.t);
}

void push_hull(std::vector<Vertex>& hull, const Vertex& p) {
  while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
  hull.push_back(p);
}

}  // namespace

ConcaveMajorant fit_lcm_sorted(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n == 0) throw std::invalid_argument("fit_lcm: sample is empty");
  ConcaveMajorant result;
  auto& hull = result.vertices;
  hull.reserve(64);
  hull.push_back({0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    // Only the last copy of a tied value carries its ECDF level.
    if (i + 1 < n && sorted[i + 1] == sorted[i]) continue;
    const Vertex p{sorted[i], static_cast<double>(i + 1) / static_cast<double>(n)};
    if (p.t == 0.0) {
      hull.front().y = p.y;
      continue;
    }
    push_hull(hull, p);
  }
  if (hull.back().t < 1.0) push_hull(hull, {1.0, 1.0});
  return result;
}

ConcaveMajorant fit_lcm(const EmpiricalCdf& ecdf) { return fit_lcm_sorted(ecdf.points()); }

GrenanderEstimate grenander(const ConcaveMajorant& majorant) {
  GrenanderEstimate estimate;
  const std::size_t m = majorant.segment_count();
  estimate.breakpoints.reserve(m + 1);
  estimate.values.reserve(m);
  for (const Vertex& v : majorant.vertices) estimate.breakpoints.push_back(v.t);
  for (std::size_t j = 1; j <= m; ++j) estimate.values.push_back(majorant.slope(j));
  return estimate;
}

std::size_t StepDensity::piece_index(double x) const {
  const auto it = std::lower_bound(breakpoints.begin() + 1, breakpoints.end(), x);
  const auto index = static_cast<std::size_t>(it - breakpoints.begin());
  if (index == 0) return 0;
  return std::min(index - 1, values.size() - 1);
}

double StepDensity::operator()(double x) const { return values[piece_index(x)]; }

double StepDensity::mass() const {
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) total += values[j] * (breakpoints[j + 1] - breakpoints[j]);
  return total;
}

double eval_fhat(const GrenanderEstimate& estimate, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eval_fhat: x outside [0, 1]");
  return estimate(x);
}

double inverse_un(const ConcaveMajorant& majorant, double a) {
  const std::size_t m = majorant.segment_count();
  // Slopes decrease, so the segments with slope >= a form a prefix.
  std::size_t lo = 0;
  std::size_t hi = m;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (majorant.slope(mid + 1) >= a) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return majorant.vertices[lo].t;
}

double inverse_un(const EmpiricalCdf& ecdf, double a) { return inverse_un(fit_lcm(ecdf), a); }

double CutoffSpec::margin() const {
  if (mode == CutoffMode::FullRange) return 0.0;
  return std::pow(static_cast<double>(n), -eps);
}

CutoffSpec::Interval CutoffSpec::band(const MonotoneDensity& d) const {
  const double m = margin();
  return {d.pdf(1.0 - m), d.pdf(m)};
}

CutoffSpec::Interval CutoffSpec::domain() const {
  const double m = margin();
  return {m, 1.0 - m};
}

void CutoffSpec::validate(const MonotoneDensity& d) const {
  if (mode == CutoffMode::EpsRange) {
    if (n == 0) throw std::invalid_argument("cutoff: sample size must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("cutoff: eps must be positive");
    if (!(margin() < 0.5)) throw std::invalid_argument("cutoff: n^{-eps} must be below 1/2");
  }
  const Interval b = band(d);
  if (!(b.lo < b.hi)) throw std::invalid_argument("cutoff: clip band is empty");
}

GrenanderEstimate apply_cutoff(const GrenanderEstimate& estimate, const MonotoneDensity& d,
                               const CutoffSpec& spec) {
  spec.validate(d);
  const auto band = spec.band(d);
  GrenanderEstimate clipped;
  clipped.breakpoints.push_back(estimate.breakpoints.front());
  for (std::size_t j = 0; j < estimate.values.size(); ++j) {
    const double v = std::clamp(estimate.values[j], band.lo, band.hi);
    if (!clipped.values.empty() && clipped.values.back() == v) {
      clipped.breakpoints.back() = estimate.breakpoints[j + 1];
    } else {
      clipped.values.push_back(v);
      clipped.breakpoints.push_back(estimate.breakpoints[j + 1]);
    }
  }
  return clipped;
}

double inverse_cutoff(const GrenanderEstimate& estimate, const MonotoneDensity& d, const CutoffSpec& spec,
                      double a) {
  spec.validate(d);
  const auto band = spec.band(d);
  if (!(a >= band.lo && a <= band.hi)) throw std::domain_error("inverse_cutoff: level outside the clip band");
  const auto domain = spec.domain();
  std::size_t count = 0;
  while (count < estimate.values.size() && std::clamp(estimate.values[count], band.lo, band.hi) >= a) ++count;
  if (count == 0) return domain.lo;
  const double edge = estimate.breakpoints[count];
  if (edge < domain.lo) return domain.lo;
  return std::min(edge, domain.hi);
}

double level_crossing(const MonotoneDensity& d, double level, double lo, double hi) {
  auto diff = [&](double x) { return level - d.pdf(x); };
  if (diff(lo) >= 0.0) return lo;
  if (diff(hi) <= 0.0) return hi;
  return bisect_root(diff, lo, hi, 1e-12);
}

std::vector<Segment> segment_decomposition(const GrenanderEstimate& estimate, const MonotoneDensity& d) {
  std::vector<Segment> segments;
  auto append = [&](double s, double t, SegmentCase kind) {
    if (!(t > s)) return;
    if (!segments.empty() && segments.back().kind == kind) {
      segments.back().t = t;
    } else {
      segments.push_back({s, t, kind});
    }
  };
  for (std::size_t j = 0; j < estimate.values.size(); ++j) {
    const double p = estimate.breakpoints[j];
    const double q = estimate.breakpoints[j + 1];
    const double v = estimate.values[j];
    if (v - d.pdf(p) >= 0.0) {
      append(p, q, SegmentCase::Above);
    } else if (v - d.pdf(q) <= 0.0) {
      append(p, q, SegmentCase::Below);
    } else {
      const double x = level_crossing(d, v, p, q);
      append(p, x, SegmentCase::Below);
      append(x, q, SegmentCase::Above);
    }
  }
  return segments;
}

}  // namespace grenlab
