#include "serialize.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "io.hpp"

namespace grenlab::cli {

using nlohmann::json;

namespace {

json num(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

double get_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json moments_json(const Moments& m) {
  return {{"count", m.count}, {"mean", num(m.mean)}, {"variance", num(m.variance)}, {"skewness", num(m.skewness)}};
}

Moments moments_from(const json& j) {
  Moments m;
  m.count = j.at("count").get<std::size_t>();
  m.mean = get_num(j.at("mean"));
  m.variance = get_num(j.at("variance"));
  m.skewness = get_num(j.at("skewness"));
  return m;
}

json matrix_json(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (double x : row) r.push_back(num(x));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> vector_from(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(get_num(x));
  return out;
}

json vector_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::vector<std::vector<double>> matrix_from(const json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(vector_from(row));
  return out;
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

void require_version(const json& j, const std::string& kind) {
  if (!j.is_object() || !j.contains("report_version") || !j["report_version"].is_number_integer()) {
    throw ConfigError("missing report_version");
  }
  const int v = j["report_version"].get<int>();
  if (v != kReportVersion) {
    throw ConfigError("unsupported report_version " + std::to_string(v) + " (expected " +
                      std::to_string(kReportVersion) + ")");
  }
  if (j.value("kind", std::string()) != kind) throw ConfigError("expected a " + kind + " document");
}

json fit_to_json(const ConcaveMajorant& majorant, const GrenanderEstimate& estimate) {
  json vertices = json::array();
  for (const auto& v : majorant.vertices) vertices.push_back({v.t, v.y});
  return {{"report_version", kReportVersion},
          {"kind", "fit"},
          {"vertices", vertices},
          {"breakpoints", estimate.breakpoints},
          {"values", estimate.values}};
}

json constants_to_json(const ConstantsRecord& r) {
  const auto& c = r.constants;
  const double sigma_k = c.sigma_k();
  return {{"report_version", kReportVersion},
          {"kind", "constants"},
          {"k", c.k()},
          {"density", json::parse(density_family_json(r.density))},
          {"weight", r.weight},
          {"chernoff",
           {{"replications", r.chernoff.replications},
            {"horizon", r.chernoff.horizon},
            {"grid_step", r.chernoff.grid_step},
            {"refine_depth", r.chernoff.refine_depth},
            {"seed", r.chernoff.seed},
            {"c_grid", r.c_grid}}},
          {"mu_k", c.mu_k},
          {"sigma_k", sigma_k},
          {"kappa_k", c.inputs.kappa},
          {"E_absV_k", c.inputs.abs_moment},
          {"sigma2", c.sigma2},
          {"sigma_k2", c.sigma_k2},
          {"c_h", c.c_h},
          {"mean_integral", c.mean_integral},
          {"variance_integral", c.variance_integral},
          {"identity_gap", c.identity_gap},
          {"mean_V0", r.mean_V0},
          {"se",
           {{"mu_k", c.mu_k_se},
            {"sigma_k", c.sigma_k2_se / (2.0 * sigma_k)},
            {"kappa_k", c.inputs.kappa_se},
            {"E_absV_k", c.inputs.abs_moment_se},
            {"sigma2", c.sigma2_se},
            {"sigma_k2", c.sigma_k2_se},
            {"mean_V0", r.mean_V0_se}}},
          {"warnings", r.warnings},
          {"input_hash", r.input_hash}};
}

ConstantsRecord constants_from_json(const json& j) {
  require_version(j, "constants");
  return guarded("constants", [&] {
    ConstantsRecord r;
    auto& c = r.constants;
    const auto& se = j.at("se");
    c.inputs.k = j.at("k").get<double>();
    c.inputs.abs_moment = j.at("E_absV_k").get<double>();
    c.inputs.abs_moment_se = se.at("E_absV_k").get<double>();
    c.inputs.kappa = j.at("kappa_k").get<double>();
    c.inputs.kappa_se = se.at("kappa_k").get<double>();
    c.mean_integral = j.at("mean_integral").get<double>();
    c.variance_integral = j.at("variance_integral").get<double>();
    c.mu_k = j.at("mu_k").get<double>();
    c.mu_k_se = se.at("mu_k").get<double>();
    c.sigma2 = j.at("sigma2").get<double>();
    c.sigma2_se = se.at("sigma2").get<double>();
    c.sigma_k2 = j.at("sigma_k2").get<double>();
    c.sigma_k2_se = se.at("sigma_k2").get<double>();
    c.c_h = j.at("c_h").get<double>();
    c.identity_gap = j.at("identity_gap").get<double>();
    r.density = parse_density_family(j.at("density").dump());
    r.weight = j.at("weight").get<std::string>();
    const auto& ch = j.at("chernoff");
    r.chernoff.replications = ch.at("replications").get<std::size_t>();
    r.chernoff.horizon = ch.at("horizon").get<double>();
    r.chernoff.grid_step = ch.at("grid_step").get<double>();
    r.chernoff.refine_depth = ch.at("refine_depth").get<int>();
    r.chernoff.seed = ch.at("seed").get<std::uint64_t>();
    r.c_grid = ch.at("c_grid").get<std::vector<double>>();
    r.mean_V0 = j.at("mean_V0").get<double>();
    r.mean_V0_se = se.at("mean_V0").get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.input_hash = j.at("input_hash").get<std::string>();
    return r;
  });
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"density", json::parse(density_family_json(cfg.density))},
          {"mode", mode_name(cfg.mode)},
          {"k", cfg.k},
          {"n_grid", cfg.n_grid},
          {"replications", cfg.replications},
          {"seed", cfg.seed},
          {"eps", num(cfg.eps)},
          {"alpha", cfg.alpha},
          {"gamma_terms", cfg.gamma_terms},
          {"gamma_terms_check", cfg.gamma_terms_check},
          {"common_random_numbers", cfg.common_random_numbers()}};
}

ExperimentConfig config_from_json(const json& j) {
  return guarded("experiment config", [&] {
    ExperimentConfig cfg;
    cfg.density = parse_density_family(j.at("density").dump());
    cfg.mode = parse_mode(j.at("mode").get<std::string>());
    cfg.k = j.at("k").get<double>();
    cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    cfg.replications = j.at("replications").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.eps = get_num(j.at("eps"));
    cfg.alpha = j.at("alpha").get<double>();
    cfg.gamma_terms = j.at("gamma_terms").get<std::size_t>();
    cfg.gamma_terms_check = j.at("gamma_terms_check").get<std::size_t>();
    return cfg;
  });
}

json report_to_json(const ExperimentReport& r) {
  json summaries = json::array();
  for (const auto& s : r.summaries) {
    summaries.push_back({{"n", s.n},
                         {"stat", moments_json(s.stat)},
                         {"aux", moments_json(s.aux)},
                         {"ks", {{"statistic", num(s.ks.statistic)}, {"p_value", num(s.ks.p_value)}}},
                         {"q95", num(s.q95)}});
  }
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"threshold", c.threshold}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"report_version", kReportVersion},
          {"kind", "experiment"},
          {"config", config_to_json(r.config)},
          {"constants", {{"mu_k", num(r.mu_k)}, {"sigma_k", num(r.sigma_k)}}},
          {"stat_label", r.stat_label},
          {"aux_label", r.aux_label},
          {"raw", matrix_json(r.raw)},
          {"stat", matrix_json(r.stat)},
          {"aux", matrix_json(r.aux)},
          {"summaries", summaries},
          {"reference", vector_json(r.reference)},
          {"reference_check", vector_json(r.reference_check)},
          {"checks", checks},
          {"passed", r.passed()},
          {"warnings", r.warnings},
          {"runtime_seconds", r.runtime_seconds}};
}

ExperimentReport report_from_json(const json& j) {
  require_version(j, "experiment");
  return guarded("experiment report", [&] {
    ExperimentReport r;
    r.config = config_from_json(j.at("config"));
    r.mu_k = get_num(j.at("constants").at("mu_k"));
    r.sigma_k = get_num(j.at("constants").at("sigma_k"));
    r.stat_label = j.at("stat_label").get<std::string>();
    r.aux_label = j.at("aux_label").get<std::string>();
    r.raw = matrix_from(j.at("raw"));
    r.stat = matrix_from(j.at("stat"));
    r.aux = matrix_from(j.at("aux"));
    for (const auto& s : j.at("summaries")) {
      NSummary ns;
      ns.n = s.at("n").get<std::size_t>();
      ns.stat = moments_from(s.at("stat"));
      ns.aux = moments_from(s.at("aux"));
      ns.ks.statistic = get_num(s.at("ks").at("statistic"));
      ns.ks.p_value = get_num(s.at("ks").at("p_value"));
      ns.q95 = get_num(s.at("q95"));
      r.summaries.push_back(ns);
    }
    r.reference = vector_from(j.at("reference"));
    r.reference_check = vector_from(j.at("reference_check"));
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("threshold").get<double>(), c.at("passed").get<bool>(),
                          c.at("detail").get<std::string>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
  });
}

std::string report_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "n,replication,raw,stat";
  if (!r.aux.empty()) out << ",aux";
  out << "\n";
  for (std::size_t i = 0; i < r.stat.size(); ++i) {
    for (std::size_t j = 0; j < r.stat[i].size(); ++j) {
      out << r.config.n_grid[i] << "," << j << "," << r.raw[i][j] << "," << r.stat[i][j];
      if (!r.aux.empty()) out << "," << r.aux[i][j];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace grenlab::cli
