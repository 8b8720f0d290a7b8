#include "grenlab/inverse_process.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "grenlab/parallel.hpp"

namespace grenlab {

std::string process_name(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::E:
      return "E";
    case ProcessKind::B:
      return "B";
    case ProcessKind::W:
      return "W";
  }
  return "?";
}

ProcessKind parse_process(const std::string& text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'E':
        return ProcessKind::E;
      case 'B':
        return ProcessKind::B;
      case 'W':
        return ProcessKind::W;
      default:
        break;
    }
  }
  throw std::invalid_argument("process must be one of E, B, W; got '" + text + "'");
}

ScalingFunctions scaling_functions(const MonotoneDensity& d, double a) {
  const double slope = std::abs(d.deriv(d.inverse(a)));
  return {std::pow(slope, 2.0 / 3.0) * std::cbrt(1.0 / (4.0 * a)), std::cbrt(4.0 * a) * std::cbrt(slope)};
}

bool level_is_interior(const MonotoneDensity& d, double a, std::size_t n) {
  const double p = d.cdf(d.inverse(a));
  const double nd = static_cast<double>(n);
  return std::cbrt(nd) * std::min(p, 1.0 - p) >= std::log(nd);
}

void LocalizedSpec::validate() const {
  if (!(a > density.f1() && a < density.f0())) {
    throw std::invalid_argument("localized process: level a must lie strictly inside (f(1), f(0))");
  }
  if (n < 2) throw std::invalid_argument("localized process: n must be at least 2");
  argmax.validate();
}

LocalWindow local_window(const LocalizedSpec& spec) {
  const double m = std::cbrt(static_cast<double>(spec.n));
  const double x0 = spec.density.inverse(spec.a);
  const double phi1 = scaling_functions(spec.density, spec.a).phi1;
  const double reach = spec.argmax.horizon / phi1;
  LocalWindow w;
  w.lo = std::max(-m * x0, -reach);
  w.hi = std::min(m * (1.0 - x0), reach);
  w.clipped_lo = -m * x0 >= -reach;
  w.clipped_hi = m * (1.0 - x0) <= reach;
  w.step = spec.argmax.grid_step / phi1;
  return w;
}

double vn_E(const EmpiricalCdf& ecdf, const MonotoneDensity& d, double a) {
  const double n = static_cast<double>(ecdf.size());
  return std::cbrt(n) * (inverse_un(ecdf, a) - d.inverse(a));
}

namespace {

ArgmaxResult simulate_brownian(const LocalizedSpec& spec, std::uint32_t replication) {
  const auto& d = spec.density;
  const double m = std::cbrt(static_cast<double>(spec.n));
  const double x0 = d.inverse(spec.a);
  const double F0 = d.cdf(x0);
  const auto w = local_window(spec);
  auto tau = [&d, m, x0, F0](double t) { return m * (d.cdf(x0 + t / m) - F0); };
  const bool bridge = spec.kind == ProcessKind::B;
  const PathKey key{spec.argmax.seed, bridge ? stream_tag::kLocalPathB : stream_tag::kLocalPathW, replication,
                     spec.noiseless};
  const auto path = BrownianPath::simulate(w.lo, w.hi, w.step, key, tau);

  // For the bridge, W(1) splits into the increment over the window, which the
  // path carries, and an independent remainder.
  double lambda = 0.0;
  if (bridge && !spec.noiseless) {
    const double inside = d.cdf(x0 + path.t(path.size() - 1) / m) - d.cdf(x0 + path.t(0) / m);
    Stream extra(spec.argmax.seed, stream_tag::kLocalPathB, replication, 1);
    const double w1 = (path.values().back() - path.values().front()) / std::sqrt(m) +
                      std::sqrt(std::max(0.0, 1.0 - inside)) * extra.normal();
    lambda = w1 / std::sqrt(m);
  }
  const double a = spec.a;
  auto drift = [&tau, m, a, lambda](double t) {
    const double s = tau(t);
    return m * (s - a * t) - lambda * s;
  };

  const double x_lo = std::max(0.0, x0 + path.t(0) / m);
  const double x_hi = std::min(1.0, x0 + path.t(path.size() - 1) / m);
  RefineOptions options = spec.argmax.refine_options(0.0);
  options.variance_rate = d.pdf(x_lo);
  const double curvature = std::max(std::abs(d.deriv(x_lo)), std::abs(d.deriv(x_hi)));
  options.drift_curvature = curvature * (1.0 + std::abs(lambda) / m);
  auto result = grid_argmax(path, 0, path.size() - 1, drift, options);
  const bool at_lo = result.location <= path.t(0);
  const bool at_hi = result.location >= path.t(path.size() - 1);
  result.truncated = (at_lo && !w.clipped_lo) || (at_hi && !w.clipped_hi);
  return result;
}

ArgmaxResult simulate_empirical(const LocalizedSpec& spec, std::uint32_t replication) {
  const auto& d = spec.density;
  const double m = std::cbrt(static_cast<double>(spec.n));
  const double x0 = d.inverse(spec.a);
  const auto w = local_window(spec);
  const double x_lo = std::max(0.0, x0 + w.lo / m);
  const double x_hi = std::min(1.0, x0 + w.hi / m);
  const double p_lo = d.cdf(x_lo);
  const double p_in = d.cdf(x_hi) - p_lo;

  Stream stream(spec.argmax.seed, stream_tag::kSample, replication, 1);
  StreamEngine engine(stream);
  using Binomial = std::binomial_distribution<std::uint64_t>;
  const std::uint64_t below = Binomial(spec.n, std::clamp(p_lo, 0.0, 1.0))(engine);
  const double p_cond = p_lo < 1.0 ? std::clamp(p_in / (1.0 - p_lo), 0.0, 1.0) : 0.0;
  const std::uint64_t inside = Binomial(spec.n - below, p_cond)(engine);

  // Objective relative to its value at x_lo: i / n - a (x_(i) - x_lo).
  const double n = static_cast<double>(spec.n);
  double best = 0.0;
  double best_x = x_lo;
  std::size_t best_index = 0;
  if (inside > 0) {
    thread_local std::vector<double> spacings;
    spacings.resize(inside);
    double total = 0.0;
    for (std::uint64_t i = 0; i < inside; ++i) {
      total += stream.exponential();
      spacings[i] = total;
    }
    total += stream.exponential();
    for (std::uint64_t i = 0; i < inside; ++i) {
      const double x = d.quantile(p_lo + p_in * (spacings[i] / total));
      const double value = static_cast<double>(i + 1) / n - spec.a * (x - x_lo);
      if (value >= best) {
        best = value;
        best_x = x;
        best_index = i + 1;
      }
    }
  }
  ArgmaxResult result;
  result.location = m * (best_x - x0);
  result.value = best;
  const bool at_lo = best_index == 0;
  const bool at_hi = inside > 0 && best_index == inside;
  result.truncated = (at_lo && !w.clipped_lo) || (at_hi && !w.clipped_hi);
  return result;
}

}  // namespace

ArgmaxResult simulate_vn(const LocalizedSpec& spec, std::uint32_t replication) {
  spec.validate();
  if (spec.kind == ProcessKind::E) return simulate_empirical(spec, replication);
  return simulate_brownian(spec, replication);
}

double scaled_vn(const LocalizedSpec& spec, double c, std::uint32_t replication) {
  spec.validate();
  const auto phi = scaling_functions(spec.density, spec.a);
  LocalizedSpec shifted = spec;
  shifted.a = spec.a - phi.phi2 * c / std::cbrt(static_cast<double>(spec.n));
  if (!(shifted.a > spec.density.f1() && shifted.a < spec.density.f0())) {
    std::ostringstream msg;
    msg << "scaled_vn: shifted level " << shifted.a << " leaves (f(1), f(0))";
    throw std::domain_error(msg.str());
  }
  return phi.phi1 * simulate_vn(shifted, replication).location;
}

VnSample simulate_vn_many(const LocalizedSpec& spec, std::size_t replications, unsigned workers) {
  spec.validate();
  VnSample out;
  out.values.resize(replications);
  std::vector<unsigned char> truncated(replications, 0);
  parallel_for(
      replications,
      [&](std::size_t r) {
        const auto result = simulate_vn(spec, static_cast<std::uint32_t>(r));
        out.values[r] = result.location;
        truncated[r] = result.truncated ? 1 : 0;
      },
      workers);
  for (auto t : truncated) out.truncated += t;
  return out;
}

double MomentPoint::ratio_se() const {
  return ratio() * std::hypot(se / estimate, prediction_se / prediction);
}

MomentProfile moment_profile(const MonotoneDensity& d, double k, const std::vector<double>& a_grid, std::size_t n,
                             std::size_t replications, const ArgmaxConfig& cfg, double abs_moment,
                             double abs_moment_se) {
  if (!(k >= 0.0)) throw std::invalid_argument("moment_profile: k must be nonnegative");
  if (replications < 2) throw std::invalid_argument("moment_profile: need at least two replications");
  MomentProfile profile;
  profile.k = k;
  profile.n = n;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    const double a = a_grid[i];
    if (!(a > d.f1() && a < d.f0()) || !level_is_interior(d, a, n)) {
      std::ostringstream msg;
      msg << "level " << a << " dropped: outside the interior range for n = " << n;
      profile.warnings.push_back(msg.str());
      continue;
    }
    LocalizedSpec spec{d, a, n, ProcessKind::W, cfg, false};
    spec.argmax.seed = cfg.seed + i;
    const auto sample = simulate_vn_many(spec, replications, cfg.workers);
    std::vector<double> powers(sample.values.size());
    for (std::size_t r = 0; r < powers.size(); ++r) powers[r] = std::pow(std::abs(sample.values[r]), k);
    const auto mom = moments(powers);
    const double factor = std::pow(4.0 * a, k / 3.0) / std::pow(std::abs(d.deriv(d.inverse(a))), 2.0 * k / 3.0);
    MomentPoint point;
    point.a = a;
    point.estimate = mom.mean;
    point.se = mom.mean_se();
    point.prediction = abs_moment * factor;
    point.prediction_se = abs_moment_se * factor;
    profile.points.push_back(point);
  }
  return profile;
}

TailFit tail_fit(const std::vector<double>& values, double x_lo, double x_hi, std::size_t points) {
  if (values.empty()) throw std::invalid_argument("tail_fit: no values");
  if (!(x_hi > x_lo) || points < 2) throw std::invalid_argument("tail_fit: need x_lo < x_hi and two points");
  std::vector<double> abs_values(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) abs_values[i] = std::abs(values[i]);
  std::sort(abs_values.begin(), abs_values.end());
  TailFit out;
  std::vector<double> cubes;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto first = std::lower_bound(abs_values.begin(), abs_values.end(), x);
    const auto count = static_cast<double>(abs_values.end() - first);
    if (count == 0.0) continue;
    out.x.push_back(x);
    out.log_survival.push_back(std::log(count / static_cast<double>(abs_values.size())));
    cubes.push_back(x * x * x);
  }
  if (cubes.size() < 3) throw std::runtime_error("tail_fit: fewer than three nonempty survival points");
  out.fit = fit_line(cubes, out.log_survival);
  return out;
}

}  // namespace grenlab
