#include "grenlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>
#include <stdexcept>

#include "grenlab/chernoff.hpp"
#include "grenlab/grenander.hpp"
#include "grenlab/lk_error.hpp"
#include "grenlab/parallel.hpp"

namespace grenlab {

namespace {

constexpr double kGrowthPerDecade = 1.5;
constexpr double kControlTolerance = 0.2;
constexpr double kKsAlpha = 0.01;
constexpr double kFinalKsDistance = 0.1;
constexpr double kVarianceFactor = 3.0;
constexpr double kTruncationKs = 0.005;

struct ModeName {
  ExperimentMode mode;
  const char* name;
};

constexpr ModeName kModeNames[] = {
    {ExperimentMode::Plain, "plain"},
    {ExperimentMode::Modified, "modified"},
    {ExperimentMode::BoundaryZero, "boundary-zero"},
    {ExperimentMode::BoundaryRate, "boundary-rate"},
    {ExperimentMode::Divergence, "divergence"},
    {ExperimentMode::BoundaryIntegral, "boundary-integral"},
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

Check decreasing_check(std::string name, const std::vector<double>& v) {
  return {std::move(name), 0.0, strictly_decreasing(v), "values along n: " + join(v)};
}

Check growth_check(std::string name, const std::vector<double>& values, const std::vector<std::size_t>& n_grid) {
  const auto growth = growth_per_decade(values, n_grid);
  bool ok = !growth.empty();
  for (double g : growth) ok = ok && g >= kGrowthPerDecade;
  return {std::move(name), kGrowthPerDecade, ok, "values " + join(values) + "; growth per decade " + join(growth)};
}

double pow_n(std::size_t n, double e) { return std::pow(static_cast<double>(n), e); }

// fhat_n(0) is the largest slope from the origin to a point of the ECDF.
double fhat_at_zero(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, static_cast<double>(i + 1) / n / sorted[i]);
  }
  return best;
}

struct Draw {
  double raw = 0.0;
  double stat = 0.0;
  double aux = 0.0;
};

class Replicator {
 public:
  Replicator(const ExperimentConfig& cfg, const MonotoneDensity& d, double mu_k, double sigma_k)
      : cfg_(cfg), d_(d), mu_k_(mu_k), sigma_k_(sigma_k), eps_(cfg.effective_eps()) {}

  Draw operator()(std::size_t n, const std::vector<double>& sorted) const {
    Draw out;
    switch (cfg_.mode) {
      case ExperimentMode::Plain:
      case ExperimentMode::Modified: {
        const auto est = grenander(fit_lcm_sorted(sorted));
        out.raw = cfg_.mode == ExperimentMode::Plain ? lk_error(est, d_, ErrorSpec{cfg_.k, 0.0, 1.0, {}})
                                                     : modified_lk_error(est, d_, cfg_.k, eps_, n);
        out.stat = standardize(out.raw, n, cfg_.k, mu_k_, sigma_k_).value;
        break;
      }
      case ExperimentMode::BoundaryZero:
        out.raw = fhat_at_zero(sorted);
        out.stat = out.raw / d_.f0();
        break;
      case ExperimentMode::BoundaryRate: {
        const double x = pow_n(n, -cfg_.alpha);
        const double scale = cfg_.alpha >= 1.0 / 3.0 ? pow_n(n, (1.0 - cfg_.alpha) / 2.0) : pow_n(n, 1.0 / 3.0);
        out.raw = eval_fhat(grenander(fit_lcm_sorted(sorted)), x) - d_.pdf(x);
        out.stat = scale * out.raw;
        break;
      }
      case ExperimentMode::Divergence: {
        const auto est = grenander(fit_lcm_sorted(sorted));
        const double z = 1.0 / (2.0 * static_cast<double>(n) * d_.f0());
        out.raw = lk_error(est, d_, ErrorSpec{cfg_.k, 0.0, 1.0, {}});
        out.stat = pow_n(n, cfg_.k / 3.0) * out.raw;
        out.aux = pow_n(n, (2.0 * cfg_.k + 1.0) / 6.0) * lk_error(est, d_, ErrorSpec{cfg_.k, 0.0, z, {}});
        break;
      }
      case ExperimentMode::BoundaryIntegral: {
        out.raw = boundary_error_integral(fit_lcm_sorted(sorted), d_, cfg_.k);
        out.stat = pow_n(n, (2.0 * cfg_.k + 1.0) / 6.0) * out.raw;
        break;
      }
    }
    return out;
  }

 private:
  const ExperimentConfig& cfg_;
  const MonotoneDensity& d_;
  double mu_k_;
  double sigma_k_;
  double eps_;
};

void add_clt_checks(ExperimentReport& report) {
  std::vector<double> abs_mean, var_gap, ks;
  for (const auto& s : report.summaries) {
    abs_mean.push_back(std::abs(s.stat.mean));
    var_gap.push_back(std::abs(s.stat.variance - 1.0));
    ks.push_back(s.ks.statistic);
  }
  report.checks.push_back(decreasing_check("abs_mean_T_decreasing", abs_mean));
  report.checks.push_back(decreasing_check("abs_var_T_minus_1_decreasing", var_gap));
  report.checks.push_back(decreasing_check("ks_distance_decreasing", ks));
  const double last = ks.back();
  report.checks.push_back({"final_ks_distance_below", kFinalKsDistance, last < kFinalKsDistance,
                           "KS distance at n = " + std::to_string(report.summaries.back().n) + ": " + fmt(last)});
}

void add_boundary_zero_checks(ExperimentReport& report) {
  for (const auto& s : report.summaries) {
    report.checks.push_back({"ks_two_sample_no_reject_n" + std::to_string(s.n), kKsAlpha, s.ks.p_value > kKsAlpha,
                             "D " + fmt(s.ks.statistic) + ", p " + fmt(s.ks.p_value)});
  }
  const double d = ks_two_sample(report.reference, report.reference_check).statistic;
  report.checks.push_back({"gamma_truncation_stable", kTruncationKs, d < kTruncationKs,
                           "KS distance between J = " + std::to_string(report.config.gamma_terms) + " and J = " +
                               std::to_string(report.config.gamma_terms_check) + ": " + fmt(d)});
}

void add_boundary_rate_checks(ExperimentReport& report) {
  if (report.config.alpha >= 1.0 / 3.0) {
    std::vector<double> var;
    for (const auto& s : report.summaries) var.push_back(s.stat.variance);
    bool ok = true;
    std::vector<double> ratios;
    for (std::size_t i = 1; i < var.size(); ++i) {
      const double r = var[i] / var[i - 1];
      ratios.push_back(r);
      ok = ok && var[i] > 0.0 && r <= kVarianceFactor && r >= 1.0 / kVarianceFactor;
    }
    report.checks.push_back(
        {"variance_stable", kVarianceFactor, ok, "variances " + join(var) + "; consecutive ratios " + join(ratios)});
  } else {
    std::vector<double> ks;
    for (const auto& s : report.summaries) ks.push_back(s.ks.statistic);
    report.checks.push_back(decreasing_check("ks_distance_to_pointwise_limit_decreasing", ks));
  }
}

void add_divergence_checks(ExperimentReport& report) {
  const double k = report.config.k;
  const auto& grid = report.config.n_grid;
  std::vector<double> means, vars;
  for (const auto& s : report.summaries) {
    means.push_back(s.stat.mean);
    vars.push_back(s.aux.variance);
  }
  if (k > 3.0) {
    report.checks.push_back(growth_check("scaled_mean_growth", means, grid));
  } else if (k > 2.5) {
    report.warnings.push_back("scaled mean (not asserted for k <= 3): " + join(means) + "; growth per decade " +
                              join(growth_per_decade(means, grid)));
  }
  if (k > 2.5) {
    report.checks.push_back(growth_check("near_zero_variance_growth", vars, grid));
  } else {
    const double last = means.back();
    const double prev = means[means.size() - 2];
    const double gap = std::abs(last / prev - 1.0);
    report.checks.push_back({"control_mean_converges", kControlTolerance, gap <= kControlTolerance,
                             "scaled means " + join(means) + "; relative change over the last step " + fmt(gap)});
  }
}

void add_boundary_integral_checks(ExperimentReport& report) {
  std::vector<double> q;
  for (const auto& s : report.summaries) q.push_back(s.q95);
  report.checks.push_back(decreasing_check("q95_decreasing", q));
}

}  // namespace

std::string mode_name(ExperimentMode mode) {
  for (const auto& m : kModeNames) {
    if (m.mode == mode) return m.name;
  }
  return "?";
}

ExperimentMode parse_mode(const std::string& text) {
  for (const auto& m : kModeNames) {
    if (text == m.name) return m.mode;
  }
  throw std::invalid_argument("unknown experiment mode '" + text + "'");
}

double ExperimentConfig::effective_eps() const {
  if (mode != ExperimentMode::Modified) return eps;
  return std::isnan(eps) ? admissible_eps_window(k).midpoint() : eps;
}

bool ExperimentConfig::common_random_numbers() const {
  return mode != ExperimentMode::Plain && mode != ExperimentMode::Modified;
}

void ExperimentConfig::validate() const {
  make_density(density);
  if (n_grid.empty()) throw std::invalid_argument("n-grid must not be empty");
  if (n_grid.front() < 2) throw std::invalid_argument("every n in the n-grid must be at least 2");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("n-grid must be strictly increasing");
  }
  if (replications < 2) throw std::invalid_argument("replications must be at least 2");
  if (!(k >= 1.0) || !std::isfinite(k)) throw std::invalid_argument("k must be a finite number >= 1");
  switch (mode) {
    case ExperimentMode::Plain:
      if (k >= 2.5) throw std::invalid_argument("plain mode requires 1 <= k < 2.5; use modified mode for k >= 2.5");
      break;
    case ExperimentMode::Modified: {
      if (k < 2.5) throw std::invalid_argument("modified mode requires k >= 2.5");
      const double e = effective_eps();
      const auto w = admissible_eps_window(k);
      if (!(e > w.lo && e < w.hi)) {
        throw std::invalid_argument("eps = " + fmt(e) + " outside the admissible window (" + fmt(w.lo) + ", " +
                                    fmt(w.hi) + ")");
      }
      break;
    }
    case ExperimentMode::BoundaryZero:
      if (gamma_terms < 1 || gamma_terms_check < 1 || gamma_terms_check > gamma_terms) {
        throw std::invalid_argument("gamma terms must satisfy 1 <= J_check <= J");
      }
      break;
    case ExperimentMode::BoundaryRate:
      if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
      break;
    case ExperimentMode::Divergence:
      if (k == 2.5) throw std::invalid_argument("divergence mode: k = 2.5 is neither a control nor divergent");
      break;
    case ExperimentMode::BoundaryIntegral:
      if (k >= 2.5) throw std::invalid_argument("boundary integral requires 1 <= k < 2.5");
      break;
  }
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double boundary_error_integral(const ConcaveMajorant& majorant, const MonotoneDensity& d, double k) {
  const auto est = grenander(majorant);
  const double u0 = inverse_un(majorant, d.f0());
  const double u1 = inverse_un(majorant, d.f1());
  double total = 0.0;
  if (u0 > 0.0) total += lk_error(est, d, ErrorSpec{k, 0.0, u0, {}});
  if (u1 < 1.0) total += lk_error(est, d, ErrorSpec{k, u1, 1.0, {}});
  return total;
}

std::vector<double> gamma_sup(Stream& stream, const std::vector<std::size_t>& checkpoints) {
  if (checkpoints.empty() || checkpoints.front() < 1) throw std::invalid_argument("gamma_sup: checkpoints must be >= 1");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) throw std::invalid_argument("gamma_sup: checkpoints must increase");
  }
  constexpr std::size_t kMinBlock = 8;
  StreamEngine engine(stream);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double sup = 0.0;
  double sum = 0.0;
  std::size_t j = 0;
  for (std::size_t target : checkpoints) {
    while (j < target) {
      // Every term j' in (j, j + m] has j' / Gamma_j' < (j + m) / Gamma_j <= sup.
      const double room = sup * sum - static_cast<double>(j);
      const auto block = room >= static_cast<double>(kMinBlock)
                             ? std::min(static_cast<std::size_t>(room), target - j)
                             : std::size_t{0};
      if (block >= kMinBlock) {
        sum += std::gamma_distribution<double>(static_cast<double>(block), 1.0)(engine);
        j += block;
      } else {
        sum += stream.exponential();
        ++j;
        sup = std::max(sup, static_cast<double>(j) / sum);
      }
    }
    out.push_back(sup);
  }
  return out;
}

std::vector<double> growth_per_decade(const std::vector<double>& values, const std::vector<std::size_t>& n_grid) {
  if (values.size() != n_grid.size()) throw std::invalid_argument("growth_per_decade: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double decades = std::log10(static_cast<double>(n_grid[i]) / static_cast<double>(n_grid[i - 1]));
    out.push_back(std::pow(values[i] / values[i - 1], 1.0 / decades));
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const LimitConstants* constants) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  const auto d = make_density(cfg.density);
  ExperimentReport report;
  report.config = cfg;
  report.config.eps = cfg.effective_eps();
  const bool clt = cfg.mode == ExperimentMode::Plain || cfg.mode == ExperimentMode::Modified;
  if (clt) {
    if (constants == nullptr) {
      throw std::invalid_argument("limit constants missing: run the `constants` subcommand first");
    }
    if (constants->k() != cfg.k) {
      throw std::invalid_argument("limit constants were computed for k = " + fmt(constants->k()) +
                                  ", experiment uses k = " + fmt(cfg.k));
    }
    report.mu_k = constants->mu_k;
    report.sigma_k = constants->sigma_k();
  }
  switch (cfg.mode) {
    case ExperimentMode::Plain:
    case ExperimentMode::Modified:
      report.stat_label = "T";
      break;
    case ExperimentMode::BoundaryZero:
      report.stat_label = "fhat(0) / f(0)";
      break;
    case ExperimentMode::BoundaryRate:
      report.stat_label = cfg.alpha >= 1.0 / 3.0 ? "n^((1-alpha)/2) (fhat - f)(n^-alpha)" : "n^(1/3) (fhat - f)(n^-alpha)";
      break;
    case ExperimentMode::Divergence:
      report.stat_label = "n^(k/3) L_k";
      report.aux_label = "n^((2k+1)/6) int_0^z_n |fhat - f|^k";
      break;
    case ExperimentMode::BoundaryIntegral:
      report.stat_label = "n^((2k+1)/6) boundary L_k";
      break;
  }

  const std::size_t N = cfg.n_grid.size();
  const std::size_t R = cfg.replications;
  report.raw.assign(N, std::vector<double>(R));
  report.stat.assign(N, std::vector<double>(R));
  if (cfg.mode == ExperimentMode::Divergence) report.aux.assign(N, std::vector<double>(R));
  const Replicator replicate(cfg, d, report.mu_k, report.sigma_k);
  const bool shared = cfg.common_random_numbers();
  parallel_for(
      R,
      [&](std::size_t r) {
        std::vector<double> sorted;
        const auto rep = static_cast<std::uint32_t>(r);
        for (std::size_t i = 0; i < N; ++i) {
          Stream stream(cfg.seed, stream_tag::kSample, rep, shared ? 0u : static_cast<std::uint32_t>(i + 1));
          sample_into(d, cfg.n_grid[i], stream, sorted);
          const Draw draw = replicate(cfg.n_grid[i], sorted);
          report.raw[i][r] = draw.raw;
          report.stat[i][r] = draw.stat;
          if (!report.aux.empty()) report.aux[i][r] = draw.aux;
        }
      },
      cfg.workers);

  if (cfg.mode == ExperimentMode::BoundaryZero) {
    report.reference.resize(R);
    report.reference_check.resize(R);
    const std::vector<std::size_t> cps = cfg.gamma_terms_check == cfg.gamma_terms
                                             ? std::vector<std::size_t>{cfg.gamma_terms}
                                             : std::vector<std::size_t>{cfg.gamma_terms_check, cfg.gamma_terms};
    parallel_for(
        R,
        [&](std::size_t r) {
          Stream stream(cfg.seed, stream_tag::kGammaSums, static_cast<std::uint32_t>(r));
          const auto sups = gamma_sup(stream, cps);
          report.reference_check[r] = sups.front();
          report.reference[r] = sups.back();
        },
        cfg.workers);
  } else if (cfg.mode == ExperimentMode::BoundaryRate && cfg.alpha < 1.0 / 3.0) {
    ArgmaxConfig argmax;
    argmax.seed = cfg.seed;
    const double scale = std::cbrt(std::abs(4.0 * d.f0() * d.deriv(0.0)));
    report.reference.resize(R);
    parallel_for(
        R,
        [&](std::size_t r) {
          report.reference[r] =
              scale * simulate_V(0.0, argmax, static_cast<std::uint32_t>(r), 1.0, stream_tag::kChernoffOracle).location;
        },
        cfg.workers);
  }

  for (std::size_t i = 0; i < N; ++i) {
    NSummary s;
    s.n = cfg.n_grid[i];
    s.stat = moments(report.stat[i]);
    if (!report.aux.empty()) s.aux = moments(report.aux[i]);
    if (clt) {
      s.ks = ks_normal(report.stat[i]);
    } else if (!report.reference.empty()) {
      s.ks = ks_two_sample(report.stat[i], report.reference);
    }
    s.q95 = quantile(report.stat[i], 0.95);
    report.summaries.push_back(s);
  }

  switch (cfg.mode) {
    case ExperimentMode::Plain:
    case ExperimentMode::Modified:
      add_clt_checks(report);
      break;
    case ExperimentMode::BoundaryZero:
      add_boundary_zero_checks(report);
      break;
    case ExperimentMode::BoundaryRate:
      add_boundary_rate_checks(report);
      break;
    case ExperimentMode::Divergence:
      add_divergence_checks(report);
      break;
    case ExperimentMode::BoundaryIntegral:
      add_boundary_integral_checks(report);
      break;
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

ExperimentReport run_in_mode(ExperimentConfig cfg, ExperimentMode expected, const char* op) {
  if (cfg.mode != expected) {
    throw std::invalid_argument(std::string(op) + " requires mode " + mode_name(expected) + ", got " +
                                mode_name(cfg.mode));
  }
  return run_experiment(cfg);
}

}  // namespace

ExperimentReport run_clt(const ExperimentConfig& cfg, const LimitConstants& constants) {
  if (cfg.mode != ExperimentMode::Plain && cfg.mode != ExperimentMode::Modified) {
    throw std::invalid_argument("run_clt requires mode plain or modified");
  }
  return run_experiment(cfg, &constants);
}

ExperimentReport run_boundary_zero(const ExperimentConfig& cfg) {
  return run_in_mode(cfg, ExperimentMode::BoundaryZero, "run_boundary_zero");
}

ExperimentReport run_boundary_rate(const ExperimentConfig& cfg) {
  return run_in_mode(cfg, ExperimentMode::BoundaryRate, "run_boundary_rate");
}

ExperimentReport run_divergence(const ExperimentConfig& cfg) {
  return run_in_mode(cfg, ExperimentMode::Divergence, "run_divergence");
}

ExperimentReport boundary_integral_magnitude(const ExperimentConfig& cfg) {
  return run_in_mode(cfg, ExperimentMode::BoundaryIntegral, "boundary_integral_magnitude");
}

}  // namespace grenlab
