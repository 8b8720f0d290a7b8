#pragma once

// Localized inverse processes at a level a in (f(1), f(0)):
//
//   V_n^J(a) = argmax_t { X_n^J(a, t) + n^{2/3} [F(g(a) + n^{-1/3} t) - F(g(a)) - n^{-1/3} a t] }
//
// for J = E (empirical process), B (Brownian bridge) and W (Brownian motion).
// Only the marginal law of each process is simulated; the three are never
// coupled. With x0 = g(a) and tau(t) = n^{1/3} (F(x0 + n^{-1/3} t) - F(x0)),
//   X^W(t) = W(tau(t)),
//   X^B(t) = W(tau(t)) - n^{-1/6} W_1 tau(t), W_1 the bridge's driving W(1),
// and V^E(a) = n^{1/3} (U_n(a) - g(a)).
//
// Every process is searched over t in [-T / phi1(a), T / phi1(a)], clipped to
// the range where x0 + n^{-1/3} t stays in [0, 1]. Since V_n^J(a) is close to
// xi(0) / phi1(a), this is the Chernoff horizon T in local units; the grid step
// is cfg.grid_step / phi1(a) for the same reason.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "grenlab/chernoff.hpp"
#include "grenlab/density.hpp"
#include "grenlab/grenander.hpp"
#include "grenlab/stats.hpp"

namespace grenlab {

enum class ProcessKind { E, B, W };

std::string process_name(ProcessKind kind);
// Accepts "E", "B", "W" (case-insensitive).
ProcessKind parse_process(const std::string& text);

struct ScalingFunctions {
  double phi1 = 0.0;  // |f'(g(a))|^{2/3} (4a)^{-1/3}
  double phi2 = 0.0;  // (4a)^{1/3} |f'(g(a))|^{1/3}
};
ScalingFunctions scaling_functions(const MonotoneDensity& d, double a);

// n^{1/3} min(F(g(a)), 1 - F(g(a))) >= log n.
bool level_is_interior(const MonotoneDensity& d, double a, std::size_t n);

struct LocalizedSpec {
  MonotoneDensity density;
  double a = 1.0;
  std::size_t n = 1000;
  ProcessKind kind = ProcessKind::W;
  ArgmaxConfig argmax;  // horizon, grid step, refinement depth, seed
  // Zero Brownian paths (drift-only runs); ignored for J = E.
  bool noiseless = false;

  // Throws std::invalid_argument unless a lies strictly inside (f(1), f(0)),
  // n >= 2 and the argmax config is valid.
  void validate() const;
};

struct LocalWindow {
  double lo = 0.0;  // in t units
  double hi = 0.0;
  double step = 0.0;
  bool clipped_lo = false;  // the domain end x = 0 cuts the horizon
  bool clipped_hi = false;  // the domain end x = 1 cuts the horizon
};
LocalWindow local_window(const LocalizedSpec& spec);

// n^{1/3} (U_n(a) - g(a)) for a given sample.
double vn_E(const EmpiricalCdf& ecdf, const MonotoneDensity& d, double a);

// One draw of V_n^J(a) for replication `replication`. For J = E only the
// sample points inside the search window are drawn: the count below the
// window and the count inside it are binomial, and the points inside are
// uniform order statistics mapped through the quantile function. A
// maximizer on a horizon end is flagged as truncated.
ArgmaxResult simulate_vn(const LocalizedSpec& spec, std::uint32_t replication);

// phi1(a) V_n^J(a - phi2(a) c n^{-1/3}). Throws std::domain_error when the
// shifted level leaves (f(1), f(0)).
double scaled_vn(const LocalizedSpec& spec, double c, std::uint32_t replication);

// Replications 0..R-1 of simulate_vn, in parallel.
struct VnSample {
  std::vector<double> values;
  std::size_t truncated = 0;
};
VnSample simulate_vn_many(const LocalizedSpec& spec, std::size_t replications, unsigned workers = 0);

struct MomentPoint {
  double a = 0.0;
  double estimate = 0.0;  // mean of |V_n^W(a)|^k
  double se = 0.0;
  double prediction = 0.0;  // E|V(0)|^k (4a)^{k/3} / |f'(g(a))|^{2k/3}
  double prediction_se = 0.0;
  double ratio() const { return estimate / prediction; }
  // Standard error of the ratio, combining both sources.
  double ratio_se() const;
};

struct MomentProfile {
  double k = 1.0;
  std::size_t n = 0;
  std::vector<MomentPoint> points;
  std::vector<std::string> warnings;  // levels dropped for failing level_is_interior
};

// Estimates E|V_n^W(a)|^k on each level of a_grid with R replications per
// level. The replication streams of level i use seed + i.
MomentProfile moment_profile(const MonotoneDensity& d, double k, const std::vector<double>& a_grid, std::size_t n,
                             std::size_t replications, const ArgmaxConfig& cfg, double abs_moment,
                             double abs_moment_se);

struct TailFit {
  std::vector<double> x;
  std::vector<double> log_survival;  // log of the empirical P(|V| >= x)
  LineFit fit;                       // log_survival against x^3
};

// Fits log P(|V| >= x) against x^3 on `points` equally spaced x in
// [x_lo, x_hi]; points with empty survival are skipped.
TailFit tail_fit(const std::vector<double>& values, double x_lo, double x_hi, std::size_t points = 16);

}  // namespace grenlab
