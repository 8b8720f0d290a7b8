#pragma once

// Discretized Brownian paths and grid-refined argmax search.
//
// A path lives on the grid t_i = t0 + i h and holds X(t_i) = B(tau(t_i)) for a
// standard Brownian motion B and an increasing variance clock tau (identity by
// default). Refinement splits a cell into 8 subcells and draws the 7 interior
// values from the Brownian bridge between the cell's endpoint values. The
// infill of a cell comes from a stream keyed by (level, cell index), so every
// caller that refines the same cell sees the same path.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "grenlab/random.hpp"

namespace grenlab {

struct PathKey {
  std::uint64_t seed = 0;
  std::uint32_t tag = 0;  // below 2^16; bits 16..30 carry the refinement level
  std::uint32_t replication = 0;
  // Deterministic paths (tests): simulated paths are identically 0 and the
  // infill is the bridge mean.
  bool noiseless = false;
};

class BrownianPath {
 public:
  using Clock = std::function<double(double)>;

  // Path with X(0) = 0 on a grid through t = 0 that covers [t_lo, t_hi].
  // Requires t_lo <= 0 <= t_hi and clock(0) = 0.
  static BrownianPath simulate(double t_lo, double t_hi, double h, const PathKey& key, Clock clock = {});
  static BrownianPath from_values(double t0, double h, std::vector<double> values, const PathKey& key,
                                  Clock clock = {});

  std::size_t size() const { return values_.size(); }
  double origin() const { return t0_; }
  double step() const { return h_; }
  double t(std::size_t i) const { return t0_ + h_ * static_cast<double>(i); }
  const std::vector<double>& values() const { return values_; }
  const PathKey& key() const { return key_; }
  double clock(double t) const { return clock_ ? clock_(t) : t; }

  // Interior values of cell `index` at refinement `level` (width h / 8^level),
  // drawn from the bridge between its endpoint values. Results are memoized,
  // so a path object must not be shared between threads.
  void infill(int level, std::uint64_t index, double left, double right, std::array<double, 7>& out) const;

 private:
  BrownianPath() = default;
  double t0_ = 0.0;
  double h_ = 0.0;
  std::vector<double> values_;
  PathKey key_;
  Clock clock_;
  mutable std::unordered_map<std::uint64_t, std::array<double, 7>> infill_cache_;
};

struct ArgmaxResult {
  double location = 0.0;
  double value = 0.0;
  bool truncated = false;  // maximizer at an end of the search window
};

struct RefineOptions {
  int depth = 3;
  // Upper bound on d tau / d t.
  double variance_rate = 1.0;
  // Upper bound on |drift''|; the drift can rise above its chord over a cell
  // of width w by at most drift_curvature * w^2 / 8.
  double drift_curvature = 0.0;
  // A cell is dropped when a Brownian bridge between its endpoint values
  // exceeds the incumbent maximum with probability below exp(-miss_log).
  double miss_log = 13.815510557964274;  // -log(1e-6)
  // Candidate cells kept per level before truncating to the best ones.
  std::size_t max_cells = 4096;

  double bend(double width) const { return 0.125 * drift_curvature * width * width; }
  // Largest gap below the maximum at which a grid point can still border a
  // kept cell.
  double tolerance(double width) const {
    return std::sqrt(0.5 * variance_rate * width * miss_log) + bend(width);
  }
  // P(sup of the bridge over the cell > best) = exp(-2 (best - y_l)(best - y_r) / var).
  bool keep(double best, double left_y, double right_y, double width) const {
    const double margin = bend(width);
    const double gl = std::max(0.0, best - margin - left_y);
    const double gr = std::max(0.0, best - margin - right_y);
    return 2.0 * gl * gr < variance_rate * width * miss_log;
  }
};

namespace detail {

struct RefineCell {
  std::uint64_t index;
  double left_x;
  double right_x;
  double left_y;
  double right_y;
};

inline void consider(ArgmaxResult& best, double t, double y) {
  if (y > best.value || (y == best.value && t > best.location)) {
    best.value = y;
    best.location = t;
  }
}

}  // namespace detail

// Maximizes X(t) + drift(t) over grid points lo..hi, starting from the coarse
// candidates: every point within tolerance(h) of the coarse maximum must be
// listed, in increasing order. Ties go to the rightmost point.
template <class Drift>
ArgmaxResult refine_argmax(const BrownianPath& path, std::size_t lo, std::size_t hi,
                           std::span<const std::size_t> candidates, const Drift& drift,
                           const RefineOptions& options) {
  if (candidates.empty()) throw std::invalid_argument("refine_argmax: no candidates");
  const auto& x = path.values();
  ArgmaxResult best{path.t(candidates[0]), -INFINITY, false};
  for (std::size_t i : candidates) detail::consider(best, path.t(i), x[i] + drift(path.t(i)));

  thread_local std::vector<detail::RefineCell> cells;
  thread_local std::vector<detail::RefineCell> next;
  cells.clear();
  auto add_cell = [&](std::size_t left) {
    if (!cells.empty() && cells.back().index >= left) return;
    const double yl = x[left] + drift(path.t(left));
    const double yr = x[left + 1] + drift(path.t(left + 1));
    if (options.keep(best.value, yl, yr, path.step())) cells.push_back({left, x[left], x[left + 1], yl, yr});
  };
  // Candidates arrive in increasing order.
  for (std::size_t i : candidates) {
    if (i > lo) add_cell(i - 1);
    if (i < hi) add_cell(i);
  }

  std::array<double, 7> interior{};
  double width = path.step();
  for (int level = 0; level < options.depth && !cells.empty(); ++level) {
    const double sub = width / 8.0;
    next.clear();
    for (const auto& cell : cells) {
      path.infill(level, cell.index, cell.left_x, cell.right_x, interior);
      const double left_t = path.origin() + width * static_cast<double>(cell.index);
      double prev_x = cell.left_x;
      double prev_y = cell.left_y;
      for (int j = 0; j < 8; ++j) {
        double cur_x;
        double cur_y;
        if (j < 7) {
          const double t = left_t + sub * (j + 1);
          cur_x = interior[j];
          cur_y = cur_x + drift(t);
          detail::consider(best, t, cur_y);
        } else {
          cur_x = cell.right_x;
          cur_y = cell.right_y;
        }
        next.push_back({cell.index * 8 + static_cast<std::uint64_t>(j), prev_x, cur_x, prev_y, cur_y});
        prev_x = cur_x;
        prev_y = cur_y;
      }
    }
    width = sub;
    cells.clear();
    for (const auto& cell : next) {
      if (options.keep(best.value, cell.left_y, cell.right_y, width)) cells.push_back(cell);
    }
    if (cells.size() > options.max_cells) {
      std::nth_element(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(options.max_cells), cells.end(),
                       [](const auto& a, const auto& b) {
                         return std::max(a.left_y, a.right_y) > std::max(b.left_y, b.right_y);
                       });
      cells.resize(options.max_cells);
      std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    }
  }
  best.truncated = best.location <= path.t(lo) || best.location >= path.t(hi);
  return best;
}

// Exhaustive coarse scan over lo..hi followed by refinement.
template <class Drift>
ArgmaxResult grid_argmax(const BrownianPath& path, std::size_t lo, std::size_t hi, const Drift& drift,
                         const RefineOptions& options) {
  if (!(lo <= hi && hi < path.size())) throw std::invalid_argument("grid_argmax: bad index window");
  const auto& x = path.values();
  std::vector<double> y(hi - lo + 1);
  double best = -INFINITY;
  for (std::size_t i = lo; i <= hi; ++i) {
    y[i - lo] = x[i] + drift(path.t(i));
    best = std::max(best, y[i - lo]);
  }
  const double threshold = best - options.tolerance(path.step());
  std::vector<std::size_t> candidates;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (y[i - lo] >= threshold) candidates.push_back(i);
  }
  return refine_argmax(path, lo, hi, candidates, drift, options);
}

// Grid index window [lo, hi] of the points inside [a, b].
struct IndexWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
};
IndexWindow index_window(const BrownianPath& path, double a, double b);

}  // namespace grenlab
