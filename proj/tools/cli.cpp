#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "grenlab/chernoff.hpp"
#include "grenlab/constants.hpp"
#include "grenlab/experiments.hpp"
#include "grenlab/grenander.hpp"
#include "grenlab/inverse_process.hpp"
#include "grenlab/lk_error.hpp"
#include "io.hpp"
#include "render.hpp"
#include "serialize.hpp"

namespace grenlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ChecksFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kDefaultDensity = "linear:1.5,0.5";

const CLI::Validator kAtLeastOne(
    [](std::string& text) -> std::string {
      std::size_t value = 0;
      return CLI::detail::lexical_cast(text, value) && value >= 1 ? std::string() : "must be an integer >= 1";
    },
    "INT>=1");

std::string full(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string canonical_density(const std::string& text) { return density_family_json(parse_density_family(text)); }

// --- constants --------------------------------------------------------------

struct ConstantsOptions {
  double k = 1.0;
  std::string density = kDefaultDensity;
  std::string weight = "none";
  std::size_t reps = 100000;
  double horizon = 4.0;
  double grid = 1.0 / 1024.0;
  int refine_depth = 3;
  std::uint64_t seed = 20240917;
  unsigned workers = 0;
  std::string out;
  bool no_cache = false;
};

ArgmaxConfig argmax_config(const ConstantsOptions& o) {
  ArgmaxConfig a;
  a.replications = o.reps;
  a.horizon = o.horizon;
  a.grid_step = o.grid;
  a.refine_depth = o.refine_depth;
  a.seed = o.seed;
  a.workers = o.workers;
  a.validate();
  return a;
}

std::string constants_key(const ConstantsOptions& o) {
  const json key = {{"artifact_version", kArtifactVersion},
                    {"k", o.k},
                    {"density", json::parse(canonical_density(o.density))},
                    {"weight", o.weight},
                    {"replications", o.reps},
                    {"horizon", o.horizon},
                    {"grid_step", o.grid},
                    {"refine_depth", o.refine_depth},
                    {"seed", o.seed},
                    {"c_grid", default_c_grid()}};
  return fnv1a64_hex(key.dump());
}

std::optional<fs::path> cache_dir() {
  if (const char* dir = std::getenv("GRENLAB_CACHE_DIR"); dir && *dir) return fs::path(dir);
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "grenlab";
  return std::nullopt;
}

std::optional<fs::path> cache_file(const std::string& key) {
  auto dir = cache_dir();
  if (!dir) return std::nullopt;
  return *dir / ("constants-" + key + ".json");
}

std::optional<ConstantsRecord> cache_lookup(const std::string& key) {
  const auto file = cache_file(key);
  if (!file || !fs::exists(*file)) return std::nullopt;
  try {
    auto record = constants_from_json(json::parse(read_file(*file)));
    if (record.input_hash == key) return record;
  } catch (const std::exception&) {
    // Unreadable entries are recomputed and overwritten.
  }
  return std::nullopt;
}

ConstantsRecord compute_record(const ConstantsOptions& o, const std::string& key) {
  if (o.weight != "none" && o.weight != "inv-sd") throw ConfigError("weight must be none or inv-sd");
  const auto cfg = argmax_config(o);
  ConstantsRecord r;
  r.density = parse_density_family(o.density);
  const auto d = make_density(r.density);
  r.weight = o.weight;
  r.chernoff = cfg;
  const auto ch = estimate_chernoff({o.k}, default_c_grid(), cfg);
  r.c_grid = ch.c_grid;
  r.mean_V0 = ch.mean_V0;
  r.mean_V0_se = ch.mean_V0_se;
  r.warnings = ch.warnings;
  WeightFunction w;
  if (o.weight == "inv-sd") w = inverse_sd_weight(d, o.k);
  r.constants = compute_constants(d, chernoff_inputs(ch, o.k), w);
  r.input_hash = key;
  return r;
}

ConstantsRecord resolve_constants(const ConstantsOptions& o, bool allow_compute, bool use_cache, bool* from_cache) {
  const std::string key = constants_key(o);
  if (use_cache) {
    if (auto hit = cache_lookup(key)) {
      if (from_cache) *from_cache = true;
      return *hit;
    }
  }
  if (!allow_compute) {
    std::ostringstream msg;
    msg << "limit constants for k = " << o.k << " and density " << o.density
        << " are not available; run `grenlab constants --k " << o.k << " --density " << o.density
        << "` first, pass --constants FILE, or add --recompute-constants";
    throw ConfigError(msg.str());
  }
  auto record = compute_record(o, key);
  if (use_cache) {
    if (auto file = cache_file(key)) write_atomic(*file, constants_to_json(record).dump(2) + "\n");
  }
  if (from_cache) *from_cache = false;
  return record;
}

ConstantsRecord load_constants_file(const std::string& path, double k, const std::string& density,
                                    const std::string& weight) {
  auto record = constants_from_json(json::parse(read_file(path)));
  if (record.constants.k() != k) {
    throw ConfigError("constants file " + path + " holds k = " + full(record.constants.k()) + ", need k = " + full(k));
  }
  if (density_family_json(record.density) != canonical_density(density)) {
    throw ConfigError("constants file " + path + " was computed for density " + density_family_json(record.density));
  }
  if (record.weight != weight) throw ConfigError("constants file " + path + " uses weight " + record.weight);
  return record;
}

// --- shared experiment flags --------------------------------------------------

struct ExperimentOptions {
  std::string density = kDefaultDensity;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 0;
  std::uint64_t seed = 20240917;
  unsigned workers = 0;
  std::string out;
};

void add_experiment_flags(CLI::App* app, ExperimentOptions& o) {
  app->add_option("--density", o.density, "density family, e.g. linear:1.5,0.5 or truncexp:1.0");
  app->add_option("--n-grid", o.n_grid, "increasing sample sizes, comma separated")->delimiter(',');
  app->add_option("--reps", o.reps, "replications per sample size")->check(kAtLeastOne);
  app->add_option("--seed", o.seed, "base seed");
  app->add_option("--workers", o.workers, "worker threads (0: automatic)");
  app->add_option("--out", o.out, "report JSON path; the CSV and manifest go alongside")->required();
}

ExperimentConfig base_config(const ExperimentOptions& o, std::vector<std::size_t> default_grid,
                             std::size_t default_reps) {
  ExperimentConfig cfg;
  cfg.density = parse_density_family(o.density);
  cfg.n_grid = o.n_grid.empty() ? std::move(default_grid) : o.n_grid;
  cfg.replications = o.reps == 0 ? default_reps : o.reps;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  return cfg;
}

void print_report(const ExperimentReport& r, std::ostream& out) {
  out << mode_name(r.config.mode) << " (" << r.stat_label << "), k = " << r.config.k << ", R = "
      << r.config.replications << "\n";
  for (const auto& s : r.summaries) {
    out << "  n = " << s.n << ": mean " << s.stat.mean << ", variance " << s.stat.variance << ", skewness "
        << s.stat.skewness;
    if (!r.aux.empty()) out << ", aux variance " << s.aux.variance;
    if (s.ks.statistic > 0.0) out << ", KS " << s.ks.statistic << " (p " << s.ks.p_value << ")";
    out << ", q95 " << s.q95 << "\n";
  }
  for (const auto& c : r.checks) out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  for (const auto& w : r.warnings) out << "  note: " << w << "\n";
}

void write_report(const ExperimentReport& r, const std::string& subcommand, const std::vector<std::string>& argv,
                  const std::string& out_path, const std::vector<fs::path>& inputs, std::ostream& out) {
  const fs::path json_path = out_path;
  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  if (csv_path == json_path) csv_path += ".csv";
  const auto manifest = manifest_path_for(json_path);
  json j = report_to_json(r);
  j["manifest"] = manifest.string();
  write_atomic(json_path, j.dump() + "\n");
  write_atomic(csv_path, "# manifest: " + manifest.string() + "\n" + report_csv(r));
  write_manifest({subcommand, argv, config_to_json(r.config), r.config.seed, inputs, {json_path, csv_path}});
  print_report(r, out);
  out << "wrote " << json_path.string() << ", " << csv_path.string() << "\n";
  if (!r.passed()) throw ChecksFailed(subcommand + ": pre-registered checks failed");
}

// --- subcommands ------------------------------------------------------------

struct FitOptions {
  std::string input;
  std::string out;
};

void do_fit(const FitOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  const auto ecdf = EmpiricalCdf::from_unsorted(read_sample(o.input));
  const auto lcm = fit_lcm(ecdf);
  json j = fit_to_json(lcm, grenander(lcm));
  if (o.out.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  j["manifest"] = manifest_path_for(o.out).string();
  write_atomic(o.out, j.dump(2) + "\n");
  write_manifest({"fit", argv, {{"input", o.input}}, 0, {o.input}, {o.out}});
  out << "wrote " << o.out << " (" << lcm.segment_count() << " segments)\n";
}

struct ErrorOptions {
  std::string input;
  std::string density = kDefaultDensity;
  double k = 1.0;
  std::string range = "0:1";
  std::string weight = "none";
  std::optional<double> modified_eps;
  bool standardize = false;
  std::string constants;
};

void do_error(const ErrorOptions& o, std::ostream& out) {
  const auto ecdf = EmpiricalCdf::from_unsorted(read_sample(o.input));
  const auto d = make_density(parse_density_family(o.density));
  const auto est = grenander(fit_lcm(ecdf));
  const auto colon = o.range.find(':');
  if (colon == std::string::npos) throw ConfigError("--range must look like lo:hi");
  double lo = 0.0, hi = 1.0;
  try {
    lo = std::stod(o.range.substr(0, colon));
    hi = std::stod(o.range.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("--range must look like lo:hi");
  }
  const bool full_range = lo == 0.0 && hi == 1.0;
  double error = 0.0;
  if (o.modified_eps) {
    if (!full_range || o.weight != "none") throw ConfigError("--modified-eps excludes --range and --weight");
    error = modified_lk_error(est, d, o.k, *o.modified_eps, ecdf.size());
  } else {
    ErrorSpec spec{o.k, lo, hi, {}};
    if (o.weight == "inv-sd") spec.weight = inverse_sd_weight(d, o.k);
    error = lk_error(est, d, spec);
  }
  out << "error " << full(error) << "\n";
  if (o.standardize) {
    if (o.constants.empty()) throw ConfigError("--standardize needs --constants FILE (see `grenlab constants`)");
    if (!full_range) throw ConfigError("--standardize applies to the full-range or modified error");
    const auto record = load_constants_file(o.constants, o.k, o.density, o.weight);
    const auto t = standardize(error, ecdf.size(), o.k, record.constants.mu_k, record.constants.sigma_k());
    out << "T " << full(t.value) << "\n";
  }
}

void do_constants(const ConstantsOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  bool from_cache = false;
  const auto record = resolve_constants(o, true, !o.no_cache, &from_cache);
  json j = constants_to_json(record);
  if (o.out.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  j["manifest"] = manifest_path_for(o.out).string();
  write_atomic(o.out, j.dump(2) + "\n");
  const json cfg = {{"k", o.k},       {"density", o.density}, {"weight", o.weight},
                    {"reps", o.reps}, {"horizon", o.horizon}, {"grid_step", o.grid},
                    {"refine_depth", o.refine_depth}};
  write_manifest({"constants", argv, cfg, o.seed, {}, {o.out}});
  out << "mu_k " << full(record.constants.mu_k) << "\nsigma_k " << full(record.constants.sigma_k()) << "\n"
      << (from_cache ? "cache hit " : "wrote ") << o.out << "\n";
}

struct InverseOptions {
  std::vector<std::string> processes{"W"};
  std::vector<double> levels;
  std::vector<std::size_t> ns{10000};
  std::size_t reps = 1000;
  std::string density = kDefaultDensity;
  std::uint64_t seed = 20240917;
  double horizon = 4.0;
  double grid = 1.0 / 1024.0;
  int refine_depth = 3;
  unsigned workers = 0;
  std::string out;
};

void do_inverse(const InverseOptions& o, const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err) {
  const auto d = make_density(parse_density_family(o.density));
  ArgmaxConfig a;
  a.horizon = o.horizon;
  a.grid_step = o.grid;
  a.refine_depth = o.refine_depth;
  a.seed = o.seed;
  a.workers = o.workers;
  std::vector<ProcessKind> kinds;
  for (const auto& p : o.processes) kinds.push_back(parse_process(p));
  std::ostringstream csv;
  csv << std::setprecision(17);
  if (!o.out.empty()) csv << "# manifest: " << manifest_path_for(o.out).string() << "\n";
  csv << "J,a,n,replication,value\n";
  for (auto kind : kinds) {
    for (double level : o.levels) {
      for (std::size_t n : o.ns) {
        const LocalizedSpec spec{d, level, n, kind, a, false};
        if (!level_is_interior(d, level, n)) {
          err << "warning: level " << level << " is not interior for n = " << n << "\n";
        }
        const auto sample = simulate_vn_many(spec, o.reps, o.workers);
        for (std::size_t r = 0; r < sample.values.size(); ++r) {
          csv << process_name(kind) << "," << level << "," << n << "," << r << "," << sample.values[r] << "\n";
        }
        std::vector<double> abs_values(sample.values.size());
        for (std::size_t r = 0; r < abs_values.size(); ++r) abs_values[r] = std::abs(sample.values[r]);
        out << process_name(kind) << " a = " << level << " n = " << n << ": mean " << moments(sample.values).mean
            << ", mean |V| " << moments(abs_values).mean << ", truncated " << sample.truncated << "\n";
      }
    }
  }
  if (o.out.empty()) {
    out << csv.str();
    return;
  }
  write_atomic(o.out, csv.str());
  const json cfg = {{"processes", o.processes}, {"a", o.levels},          {"n", o.ns},
                    {"reps", o.reps},           {"density", o.density},   {"horizon", o.horizon},
                    {"grid_step", o.grid},      {"refine_depth", o.refine_depth}};
  write_manifest({"inverse-process", argv, cfg, o.seed, {}, {o.out}});
  out << "wrote " << o.out << "\n";
}

struct CltOptions {
  ExperimentOptions common;
  double k = 1.0;
  std::string mode;
  std::optional<double> eps;
  std::string constants;
  bool recompute = false;
  std::size_t chernoff_reps = 100000;
};

void do_clt(const CltOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  auto cfg = base_config(o.common, {1000, 10000, 100000}, 2000);
  cfg.k = o.k;
  cfg.mode = o.mode.empty() ? (o.k < 2.5 ? ExperimentMode::Plain : ExperimentMode::Modified) : parse_mode(o.mode);
  if (cfg.mode != ExperimentMode::Plain && cfg.mode != ExperimentMode::Modified) {
    throw ConfigError("--mode must be plain or modified");
  }
  if (o.eps) cfg.eps = *o.eps;
  cfg.validate();
  std::vector<fs::path> inputs;
  ConstantsRecord record;
  if (!o.constants.empty()) {
    record = load_constants_file(o.constants, o.k, o.common.density, "none");
    inputs.push_back(o.constants);
  } else {
    ConstantsOptions c;
    c.k = o.k;
    c.density = o.common.density;
    c.reps = o.chernoff_reps;
    c.workers = o.common.workers;
    record = resolve_constants(c, o.recompute, true, nullptr);
  }
  const auto report = run_clt(cfg, record.constants);
  write_report(report, "clt", argv, o.common.out, inputs, out);
}

struct BoundaryOptions {
  ExperimentOptions common;
  std::string mode = "zero";
  double alpha = 1.0 / 3.0;
  double k = 1.0;
  std::size_t gamma_terms = 100000;
  std::size_t gamma_terms_check = 10000;
};

void do_boundary(const BoundaryOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  ExperimentConfig cfg;
  if (o.mode == "zero") {
    cfg = base_config(o.common, {10000}, 10000);
    cfg.mode = ExperimentMode::BoundaryZero;
    cfg.gamma_terms = o.gamma_terms;
    cfg.gamma_terms_check = o.gamma_terms_check;
  } else if (o.mode == "rate") {
    cfg = base_config(o.common, {1000, 10000, 100000}, 2000);
    cfg.mode = ExperimentMode::BoundaryRate;
    cfg.alpha = o.alpha;
  } else {
    cfg = base_config(o.common, {1000, 10000, 100000}, 2000);
    cfg.mode = ExperimentMode::BoundaryIntegral;
  }
  cfg.k = o.k;
  cfg.validate();
  write_report(run_experiment(cfg), "boundary", argv, o.common.out, {}, out);
}

struct DivergeOptions {
  ExperimentOptions common;
  double k = 4.0;
};

void do_diverge(const DivergeOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  auto cfg = base_config(o.common, {1000, 10000, 100000}, 2000);
  cfg.mode = ExperimentMode::Divergence;
  cfg.k = o.k;
  cfg.validate();
  write_report(run_divergence(cfg), "diverge", argv, o.common.out, {}, out);
}

struct RenderOptions {
  std::string report;
  std::string out;
};

void do_render(const RenderOptions& o, const std::vector<std::string>& argv, std::ostream& out) {
  json j;
  try {
    j = json::parse(read_file(o.report));
  } catch (const json::parse_error& e) {
    throw ConfigError(o.report + " is not JSON: " + e.what());
  }
  const auto report = report_from_json(j);
  const auto manifest = manifest_path_for(o.out);
  std::string svg = render_svg(report);
  svg.insert(svg.find('\n') + 1, "<!-- manifest: " + manifest.string() + " -->\n");
  write_atomic(o.out, svg);
  write_manifest({"render", argv, {{"report", o.report}}, report.config.seed, {o.report}, {o.out}});
  out << "wrote " << o.out << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grenander estimator toolkit: fits, L_k errors, limit constants and Monte Carlo experiments"};
  app.name("grenlab");
  app.require_subcommand(1, 1);

  FitOptions fit_o;
  auto* fit = app.add_subcommand("fit", "least concave majorant and Grenander estimate of a sample");
  fit->add_option("--input", fit_o.input, "newline-separated sample in [0, 1]")->required();
  fit->add_option("--out", fit_o.out, "output JSON (stdout when omitted)");

  ErrorOptions err_o;
  auto* error = app.add_subcommand("error", "L_k distance between the Grenander estimate and a density");
  error->add_option("--input", err_o.input, "newline-separated sample in [0, 1]")->required();
  error->add_option("--density", err_o.density, "true density");
  error->add_option("--k", err_o.k, "error exponent, k >= 1");
  error->add_option("--range", err_o.range, "integration range lo:hi");
  error->add_option("--weight", err_o.weight, "none or inv-sd")->check(CLI::IsMember({"none", "inv-sd"}));
  error->add_option("--modified-eps", err_o.modified_eps, "integrate over [n^-eps, 1 - n^-eps]");
  error->add_flag("--standardize", err_o.standardize, "also print the standardized statistic T");
  error->add_option("--constants", err_o.constants, "constants JSON from `grenlab constants`");

  ConstantsOptions con_o;
  auto* constants = app.add_subcommand("constants", "limit constants mu_k and sigma_k by Chernoff-process Monte Carlo");
  constants->add_option("--k", con_o.k, "error exponent")->required();
  constants->add_option("--density", con_o.density, "density family");
  constants->add_option("--weight", con_o.weight, "none or inv-sd")->check(CLI::IsMember({"none", "inv-sd"}));
  constants->add_option("--reps", con_o.reps, "Chernoff replications")->check(kAtLeastOne);
  constants->add_option("--horizon", con_o.horizon, "argmax search half-width");
  constants->add_option("--grid", con_o.grid, "Brownian grid step");
  constants->add_option("--refine-depth", con_o.refine_depth, "argmax refinement levels (0-4)");
  constants->add_option("--seed", con_o.seed, "seed");
  constants->add_option("--workers", con_o.workers, "worker threads (0: automatic)");
  constants->add_option("--out", con_o.out, "output JSON (stdout when omitted)");
  constants->add_flag("--no-cache", con_o.no_cache, "ignore and do not update the constants cache");

  InverseOptions inv_o;
  auto* inverse = app.add_subcommand("inverse-process", "localized inverse processes V_n^J(a) as CSV");
  inverse->add_option("--process", inv_o.processes, "E, B and/or W")->delimiter(',');
  inverse->add_option("--a", inv_o.levels, "levels in (f(1), f(0))")->delimiter(',')->required();
  inverse->add_option("--n", inv_o.ns, "sample sizes")->delimiter(',');
  inverse->add_option("--reps", inv_o.reps, "replications")->check(kAtLeastOne);
  inverse->add_option("--density", inv_o.density, "density family");
  inverse->add_option("--seed", inv_o.seed, "seed");
  inverse->add_option("--horizon", inv_o.horizon, "search half-width in Chernoff units");
  inverse->add_option("--grid", inv_o.grid, "grid step in Chernoff units");
  inverse->add_option("--refine-depth", inv_o.refine_depth, "argmax refinement levels (0-4)");
  inverse->add_option("--workers", inv_o.workers, "worker threads (0: automatic)");
  inverse->add_option("--out", inv_o.out, "output CSV (stdout when omitted)");

  CltOptions clt_o;
  auto* clt = app.add_subcommand("clt", "standardized L_k error along an n-grid");
  add_experiment_flags(clt, clt_o.common);
  clt->add_option("--k", clt_o.k, "error exponent");
  clt->add_option("--mode", clt_o.mode, "plain or modified (default by k)");
  clt->add_option("--eps", clt_o.eps, "trimming exponent for modified mode (default: window midpoint)");
  clt->add_option("--constants", clt_o.constants, "constants JSON from `grenlab constants`");
  clt->add_flag("--recompute-constants", clt_o.recompute, "compute missing constants instead of failing");
  clt->add_option("--chernoff-reps", clt_o.chernoff_reps, "replications when computing constants")
      ->check(kAtLeastOne);

  BoundaryOptions bnd_o;
  auto* boundary = app.add_subcommand("boundary", "behavior of the estimator at and near x = 0");
  add_experiment_flags(boundary, bnd_o.common);
  boundary->add_option("--mode", bnd_o.mode, "zero, rate or integral")
      ->check(CLI::IsMember({"zero", "rate", "integral"}));
  boundary->add_option("--alpha", bnd_o.alpha, "rate mode: evaluate at n^-alpha");
  boundary->add_option("--k", bnd_o.k, "integral mode: error exponent");
  boundary->add_option("--J", bnd_o.gamma_terms, "zero mode: gamma partial sums")->check(kAtLeastOne);
  boundary->add_option("--J-check", bnd_o.gamma_terms_check, "zero mode: truncation diagnostic")
      ->check(kAtLeastOne);

  DivergeOptions div_o;
  auto* diverge = app.add_subcommand("diverge", "growth of the scaled error outside the CLT regime");
  add_experiment_flags(diverge, div_o.common);
  diverge->add_option("--k", div_o.k, "error exponent");

  RenderOptions ren_o;
  auto* render = app.add_subcommand("render", "SVG histogram and QQ plot of an experiment report");
  render->add_option("--report", ren_o.report, "report JSON")->required();
  render->add_option("--out", ren_o.out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return 2;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    if (fit->parsed()) do_fit(fit_o, args, out);
    if (error->parsed()) do_error(err_o, out);
    if (constants->parsed()) do_constants(con_o, args, out);
    if (inverse->parsed()) do_inverse(inv_o, args, out, err);
    if (clt->parsed()) do_clt(clt_o, args, out);
    if (boundary->parsed()) do_boundary(bnd_o, args, out);
    if (diverge->parsed()) do_diverge(div_o, args, out);
    if (render->parsed()) do_render(ren_o, args, out);
  } catch (const ChecksFailed& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace grenlab::cli
