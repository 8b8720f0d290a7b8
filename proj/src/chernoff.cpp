#include "grenlab/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "grenlab/numerics.hpp"
#include "grenlab/parallel.hpp"

namespace grenlab {

namespace {

constexpr std::size_t kBlock = 64;
constexpr std::size_t kGroups = 100;

// Fills xi[c] = V(c) - c for every grid value c from one shared path and
// returns the number of truncated maximizers. The coarse maximum for each c is
// found through per-block upper bounds max_block(W - t^2) + 2 c t_end, so only
// the blocks near the top are scanned point by point.
std::size_t replicate_xi(const ArgmaxConfig& cfg, const std::vector<double>& c_grid, std::uint32_t rep,
                         double* xi) {
  const double T = cfg.horizon;
  const PathKey key{cfg.seed, stream_tag::kChernoffPath, rep, false};
  const auto path = BrownianPath::simulate(-T, c_grid.back() + T, cfg.grid_step, key);
  const auto& w = path.values();
  const std::size_t n = w.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = path.t(i);
    z[i] = w[i] - t * t;
  }
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_max(blocks, -INFINITY);
  for (std::size_t i = 0; i < n; ++i) block_max[i / kBlock] = std::max(block_max[i / kBlock], z[i]);

  const RefineOptions options = cfg.refine_options(2.0);
  const double delta = options.tolerance(cfg.grid_step);
  std::vector<std::size_t> candidates;
  std::vector<double> candidate_y;
  std::size_t truncated = 0;
  for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
    const double c = c_grid[ci];
    const double s = 2.0 * c;
    const double shift = c * c;
    const auto win = index_window(path, c - T, c + T);
    const std::size_t b_lo = win.lo / kBlock;
    const std::size_t b_hi = win.hi / kBlock;
    auto bound = [&](std::size_t b) {
      const std::size_t first = std::max(win.lo, b * kBlock);
      const std::size_t last = std::min(win.hi, b * kBlock + kBlock - 1);
      return block_max[b] + s * path.t(s >= 0.0 ? last : first) - shift;
    };
    auto scan = [&](std::size_t b, auto&& visit) {
      const std::size_t first = std::max(win.lo, b * kBlock);
      const std::size_t last = std::min(win.hi, b * kBlock + kBlock - 1);
      for (std::size_t i = first; i <= last; ++i) visit(i, z[i] + s * path.t(i) - shift);
    };
    std::size_t top = b_lo;
    double top_bound = -INFINITY;
    for (std::size_t b = b_lo; b <= b_hi; ++b) {
      const double value = bound(b);
      if (value > top_bound) {
        top_bound = value;
        top = b;
      }
    }
    double first_max = -INFINITY;
    scan(top, [&](std::size_t, double y) { first_max = std::max(first_max, y); });
    candidates.clear();
    candidate_y.clear();
    double best = first_max;
    for (std::size_t b = b_lo; b <= b_hi; ++b) {
      if (bound(b) < first_max - delta) continue;
      scan(b, [&](std::size_t i, double y) {
        if (y >= first_max - delta) {
          candidates.push_back(i);
          candidate_y.push_back(y);
          best = std::max(best, y);
        }
      });
    }
    std::size_t kept = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (candidate_y[j] >= best - delta) candidates[kept++] = candidates[j];
    }
    candidates.resize(kept);
    auto drift = [c](double t) {
      const double d = t - c;
      return -d * d;
    };
    const auto result = refine_argmax(path, win.lo, win.hi, candidates, drift, options);
    xi[ci] = result.location - c;
    truncated += result.truncated ? 1 : 0;
  }
  return truncated;
}

// Least-squares fit of log cov against c^3 over the last decade of the grid,
// restricted to points more than 2 standard errors above 0, integrated from
// the end of the grid to infinity. Returns 0 when the fit is unusable.
double fitted_tail(const std::vector<double>& c, const std::vector<double>& cov, const std::vector<double>& se) {
  const double c_max = c.back();
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= 0.1 * c_max && cov[i] > 0.0 && cov[i] > 2.0 * se[i]) {
      x.push_back(c[i] * c[i] * c[i]);
      y.push_back(std::log(cov[i]));
    }
  }
  if (x.size() < 3) return 0.0;
  const auto fit = fit_line(x, y);
  if (!(fit.slope < 0.0)) return 0.0;
  const double upper = std::cbrt(c_max * c_max * c_max + 50.0 / -fit.slope);
  return integrate([&](double t) { return std::exp(fit.intercept + fit.slope * t * t * t); }, c_max, upper, 1e-14);
}

ChernoffEstimates estimate_once(const std::vector<double>& k_values, const std::vector<double>& c_grid,
                                const ArgmaxConfig& cfg) {
  const std::size_t R = cfg.replications;
  const std::size_t nc = c_grid.size();
  std::vector<double> xi(R * nc);
  std::vector<std::size_t> truncated(R);
  parallel_for(
      R, [&](std::size_t r) { truncated[r] = replicate_xi(cfg, c_grid, static_cast<std::uint32_t>(r), &xi[r * nc]); },
      cfg.workers);

  ChernoffEstimates est;
  est.config = cfg;
  est.k_values = k_values;
  est.c_grid = c_grid;
  est.replications = R;
  for (auto t : truncated) est.truncated += t;
  est.V0.resize(R);
  for (std::size_t r = 0; r < R; ++r) est.V0[r] = xi[r * nc];
  const Moments m0 = moments(est.V0);
  est.mean_V0 = m0.mean;
  est.mean_V0_se = m0.mean_se();

  const std::size_t G = std::min(kGroups, R);
  auto group_of = [&](std::size_t r) { return r * G / R; };
  std::vector<double> group_count(G, 0.0);
  for (std::size_t r = 0; r < R; ++r) group_count[group_of(r)] += 1.0;

  std::vector<double> a(nc);
  for (double k : k_values) {
    // Group sums of A_c = |xi(c)|^k and A_0 A_c.
    std::vector<double> s0(G, 0.0);
    std::vector<double> sc(G * nc, 0.0);
    std::vector<double> sp(G * nc, 0.0);
    std::vector<double> first(R);
    for (std::size_t r = 0; r < R; ++r) {
      const std::size_t g = group_of(r);
      for (std::size_t ci = 0; ci < nc; ++ci) a[ci] = std::pow(std::abs(xi[r * nc + ci]), k);
      first[r] = a[0];
      s0[g] += a[0];
      for (std::size_t ci = 0; ci < nc; ++ci) {
        sc[g * nc + ci] += a[ci];
        sp[g * nc + ci] += a[0] * a[ci];
      }
    }
    double t0 = 0.0;
    double tn = 0.0;
    std::vector<double> tc(nc, 0.0);
    std::vector<double> tp(nc, 0.0);
    for (std::size_t g = 0; g < G; ++g) {
      t0 += s0[g];
      tn += group_count[g];
      for (std::size_t ci = 0; ci < nc; ++ci) {
        tc[ci] += sc[g * nc + ci];
        tp[ci] += sp[g * nc + ci];
      }
    }
    // Covariance at grid index ci with group g left out (g == G: none).
    auto cov_at = [&](std::size_t g, std::size_t ci) {
      double n = tn;
      double x0 = t0;
      double xc = tc[ci];
      double xp = tp[ci];
      if (g < G) {
        n -= group_count[g];
        x0 -= s0[g];
        xc -= sc[g * nc + ci];
        xp -= sp[g * nc + ci];
      }
      return (xp - x0 * xc / n) / (n - 1.0);
    };
    auto trapezoid = [&](std::size_t g) {
      double total = 0.0;
      for (std::size_t ci = 1; ci < nc; ++ci) {
        total += 0.5 * (cov_at(g, ci - 1) + cov_at(g, ci)) * (c_grid[ci] - c_grid[ci - 1]);
      }
      return total;
    };
    const Moments mk = moments(first);
    est.abs_moment.push_back(mk.mean);
    est.abs_moment_se.push_back(mk.mean_se());
    std::vector<double> curve(nc);
    std::vector<double> curve_se(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
      const auto jk = group_jackknife(G, [&](std::size_t g) { return cov_at(g, ci); });
      curve[ci] = jk.value;
      curve_se[ci] = jk.se;
    }
    const auto trap = group_jackknife(G, trapezoid);
    const double tail = fitted_tail(c_grid, curve, curve_se);
    est.cov_curve.push_back(curve);
    est.cov_se.push_back(curve_se);
    est.kappa_trapezoid.push_back(trap.value);
    est.kappa_tail.push_back(tail);
    est.kappa.push_back(trap.value + tail);
    est.kappa_se.push_back(trap.se);
  }
  return est;
}

}  // namespace

void ArgmaxConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("argmax config: horizon must be positive");
  if (!(grid_step > 0.0)) throw std::invalid_argument("argmax config: grid step must be positive");
  if (refine_depth < 0 || refine_depth > 4) throw std::invalid_argument("argmax config: refine depth must be in [0, 4]");
  if (replications < 1) throw std::invalid_argument("argmax config: replications must be at least 1");
}

RefineOptions ArgmaxConfig::refine_options(double curvature) const {
  RefineOptions options;
  options.depth = refine_depth;
  options.variance_rate = 1.0;
  options.drift_curvature = curvature;
  return options;
}

ArgmaxResult parabola_argmax(const BrownianPath& path, double c, double b, const ArgmaxConfig& cfg) {
  const auto win = index_window(path, c - cfg.horizon, c + cfg.horizon);
  auto drift = [c, b](double t) {
    const double d = t - c;
    return -b * d * d;
  };
  return grid_argmax(path, win.lo, win.hi, drift, cfg.refine_options(2.0 * b));
}

ArgmaxResult simulate_V(double c, const ArgmaxConfig& cfg, std::uint32_t replication, double b, std::uint32_t tag) {
  cfg.validate();
  if (!(b > 0.0)) throw std::invalid_argument("simulate_V: curvature must be positive");
  const PathKey key{cfg.seed, tag, replication, false};
  const double T = cfg.horizon;
  const auto path = BrownianPath::simulate(std::min(0.0, c - T), std::max(0.0, c + T), cfg.grid_step, key);
  return parabola_argmax(path, c, b, cfg);
}

std::size_t ChernoffEstimates::k_index(double k) const {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == k) return i;
  }
  throw std::out_of_range("chernoff estimates: exponent " + std::to_string(k) + " was not estimated");
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(0.05 * i);
  return grid;
}

ChernoffEstimates estimate_chernoff(const std::vector<double>& k_values, const std::vector<double>& c_grid,
                                    const ArgmaxConfig& cfg) {
  cfg.validate();
  if (cfg.replications < 2) throw std::invalid_argument("estimate_chernoff: need at least two replications");
  if (k_values.empty()) throw std::invalid_argument("estimate_chernoff: no exponents");
  for (double k : k_values) {
    if (!(k > 0.0)) throw std::invalid_argument("estimate_chernoff: exponents must be positive");
  }
  if (c_grid.size() < 2 || c_grid.front() != 0.0) {
    throw std::invalid_argument("estimate_chernoff: c grid must start at 0 and hold two or more points");
  }
  for (std::size_t i = 1; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > c_grid[i - 1])) throw std::invalid_argument("estimate_chernoff: c grid must increase");
  }
  auto est = estimate_once(k_values, c_grid, cfg);
  auto undecayed = [](const ChernoffEstimates& e) {
    for (std::size_t i = 0; i < e.k_values.size(); ++i) {
      if (e.cov_curve[i].back() > 3.0 * e.cov_se[i].back()) return true;
    }
    return false;
  };
  if (undecayed(est)) {
    std::vector<double> wider = c_grid;
    const double step = c_grid.back() - c_grid[c_grid.size() - 2];
    const double target = 1.5 * c_grid.back();
    while (wider.back() + 0.5 * step < target) wider.push_back(wider.back() + step);
    std::ostringstream msg;
    msg << "covariance not decayed at c = " << c_grid.back() << "; grid widened to " << wider.back();
    est = estimate_once(k_values, wider, cfg);
    est.warnings.push_back(msg.str());
    if (undecayed(est)) est.warnings.push_back("covariance still not decayed after widening");
  }
  if (est.truncated_fraction() >= 1e-4) {
    std::ostringstream msg;
    msg << "truncated maximizers in " << est.truncated_fraction() << " of evaluations";
    est.warnings.push_back(msg.str());
  }
  return est;
}

ScalingCheck scaling_check(double b, double c, const ArgmaxConfig& cfg) {
  cfg.validate();
  if (!(b > 0.0)) throw std::invalid_argument("scaling_check: b must be positive");
  ScalingCheck out;
  out.b = b;
  out.c = c;
  const std::size_t R = cfg.replications;
  out.direct.resize(R);
  out.mapped.resize(R);
  const double scale = std::pow(b, -2.0 / 3.0);
  ArgmaxConfig direct_cfg = cfg;
  direct_cfg.horizon = cfg.horizon * std::max(1.0, scale);
  const double c_mapped = c / scale;
  parallel_for(
      R,
      [&](std::size_t r) {
        const auto rep = static_cast<std::uint32_t>(r);
        out.direct[r] = simulate_V(c, direct_cfg, rep, b, stream_tag::kScalingDirect).location;
        out.mapped[r] = scale * simulate_V(c_mapped, cfg, rep, 1.0, stream_tag::kScalingMapped).location;
      },
      cfg.workers);
  out.ks = ks_two_sample(out.direct, out.mapped);
  return out;
}

}  // namespace grenlab
