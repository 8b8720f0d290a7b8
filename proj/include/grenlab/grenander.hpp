#pragma once

// Least concave majorant of the empirical CDF, the Grenander estimator (its
// left derivative), the argmax inverse U_n, and clipped variants.

#include <cstddef>
#include <vector>

#include "grenlab/density.hpp"

namespace grenlab {

// Sorted sample in [0, 1]; F_n(x) = #{i : x_(i) <= x} / n.
class EmpiricalCdf {
 public:
  // Throws std::invalid_argument on empty input or values outside [0, 1].
  static EmpiricalCdf from_sorted(std::vector<double> sorted);
  static EmpiricalCdf from_unsorted(std::vector<double> values);

  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  double operator()(double x) const;

 private:
  explicit EmpiricalCdf(std::vector<double> points) : points_(std::move(points)) {}
  std::vector<double> points_;
};

struct Vertex {
  double t = 0.0;
  double y = 0.0;
  bool operator==(const Vertex&) const = default;
};

// Vertices (0, 0) = v_0, ..., v_m = (1, 1) with strictly decreasing slopes.
struct ConcaveMajorant {
  std::vector<Vertex> vertices;

  std::size_t segment_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  double slope(std::size_t segment) const;  // segment in [1, m]
};

// Left-continuous nonincreasing step function on [0, 1]: value values[j-1] on
// (breakpoints[j-1], breakpoints[j]], and values[0] at x = 0.
struct StepDensity {
  std::vector<double> breakpoints;
  std::vector<double> values;

  std::size_t piece_count() const { return values.size(); }
  double operator()(double x) const;
  // Index j - 1 of the piece (b_{j-1}, b_j] holding x; piece 0 for x = 0.
  std::size_t piece_index(double x) const;
  double mass() const;
};

using GrenanderEstimate = StepDensity;

// Upper concave hull of {(0,0)} U {(x_(i), i/n)} U {(1,1)} by a monotone
// chain pass. Tied sample values collapse to their highest ECDF level, and
// collinear points are dropped so that every vertex is extreme.
ConcaveMajorant fit_lcm(const EmpiricalCdf& ecdf);
ConcaveMajorant fit_lcm_sorted(const std::vector<double>& sorted);

GrenanderEstimate grenander(const ConcaveMajorant& majorant);

// Throws std::domain_error for x outside [0, 1].
double eval_fhat(const GrenanderEstimate& estimate, double x);

// Rightmost maximizer of F_n(x) - a x over [0, 1], i.e. the largest x with
// fhat(x) >= a (0 when no such x exists).
double inverse_un(const ConcaveMajorant& majorant, double a);
double inverse_un(const EmpiricalCdf& ecdf, double a);

enum class CutoffMode { FullRange, EpsRange };

struct CutoffSpec {
  CutoffMode mode = CutoffMode::FullRange;
  double eps = 0.0;
  std::size_t n = 0;

  static CutoffSpec full_range() { return {}; }
  static CutoffSpec eps_range(double eps, std::size_t n) { return {CutoffMode::EpsRange, eps, n}; }

  // Interior margin n^{-eps} (0 for the full range).
  double margin() const;
  struct Interval {
    double lo;
    double hi;
  };
  // Clip band [low, high] for the density values.
  Interval band(const MonotoneDensity& d) const;
  // Domain over which the clipped estimate is inverted.
  Interval domain() const;
  // Throws std::invalid_argument unless the band is nonempty.
  void validate(const MonotoneDensity& d) const;
};

GrenanderEstimate apply_cutoff(const GrenanderEstimate& estimate, const MonotoneDensity& d,
                               const CutoffSpec& spec);

// sup{x in domain : clipped estimate at x >= a}; the left edge of the domain
// when the set is empty. Throws std::domain_error when a lies outside the band.
double inverse_cutoff(const GrenanderEstimate& estimate, const MonotoneDensity& d, const CutoffSpec& spec,
                      double a);

enum class SegmentCase {
  Above = 1,  // estimate >= f on the segment
  Below = 2,  // estimate <= f on the segment
};

struct Segment {
  double s = 0.0;
  double t = 0.0;
  SegmentCase kind = SegmentCase::Above;
};

// Partitions [0, 1] into maximal segments on which the sign of estimate - f is
// constant. Within each constant piece the crossing of the level with f is
// located by bisection to 1e-12.
std::vector<Segment> segment_decomposition(const GrenanderEstimate& estimate, const MonotoneDensity& d);

// Crossing point of a level with f inside [lo, hi], i.e. the root of level - f(x),
// clamped to the bracket when the level does not cross there.
double level_crossing(const MonotoneDensity& d, double level, double lo, double hi);

}  // namespace grenlab
