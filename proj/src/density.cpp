#include "grenlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "grenlab/numerics.hpp"

namespace grenlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_linear(const DensityFamily& family) { return std::holds_alternative<LinearFamily>(family); }

}  // namespace

MonotoneDensity::MonotoneDensity(DensityFamily family) : family_(std::move(family)) {
  std::visit(Overloaded{
                 [this](const LinearFamily& lin) {
                   a_ = lin.f0;
                   b_ = lin.f0 - lin.f1;
                 },
                 [this](const TruncatedExponentialFamily& te) {
                   a_ = te.theta;
                   b_ = te.theta / (-std::expm1(-te.theta));
                 },
             },
             family_);
}

MonotoneDensity make_density(const DensityFamily& family) {
  std::visit(Overloaded{
                 [](const LinearFamily& lin) {
                   if (!std::isfinite(lin.f0) || !std::isfinite(lin.f1)) {
                     throw std::invalid_argument("linear density: endpoint values must be finite");
                   }
                   if (!(lin.f1 > 0.0)) {
                     throw std::invalid_argument("linear density: f(1) must be positive");
                   }
                   if (!(lin.f0 > lin.f1)) {
                     throw std::invalid_argument(
                         "linear density: f(0) must exceed f(1) (derivative bounded away from zero)");
                   }
                   if (std::abs(lin.f0 + lin.f1 - 2.0) > 1e-12) {
                     throw std::invalid_argument("linear density: f(0) + f(1) must equal 2");
                   }
                 },
                 [](const TruncatedExponentialFamily& te) {
                   if (!std::isfinite(te.theta) || !(te.theta > 0.0) || te.theta > 700.0) {
                     throw std::invalid_argument("truncated exponential density: theta must lie in (0, 700]");
                   }
                 },
             },
             family);
  return MonotoneDensity(family);
}

double MonotoneDensity::pdf(double x) const {
  if (is_linear(family_)) return a_ - b_ * x;
  return b_ * std::exp(-a_ * x);
}

double MonotoneDensity::deriv(double x) const {
  if (is_linear(family_)) return -b_;
  return -a_ * b_ * std::exp(-a_ * x);
}

double MonotoneDensity::deriv2(double x) const {
  if (is_linear(family_)) return 0.0;
  return a_ * a_ * b_ * std::exp(-a_ * x);
}

double MonotoneDensity::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (is_linear(family_)) return a_ * x - 0.5 * b_ * x * x;
  return -std::expm1(-a_ * x) * b_ / a_;
}

double MonotoneDensity::quantile(double p) const {
  if (!(p > 0.0)) return 0.0;
  if (p >= 1.0) return 1.0;
  double x = 0.0;
  if (is_linear(family_)) {
    // Root of a x - b x^2 / 2 = p in the cancellation-free form.
    x = 2.0 * p / (a_ + std::sqrt(std::max(a_ * a_ - 2.0 * b_ * p, 0.0)));
  } else {
    x = -std::log1p(-p * a_ / b_) / a_;
  }
  return std::clamp(x, 0.0, 1.0);
}

double MonotoneDensity::inverse(double a) const {
  if (a >= f0()) return 0.0;
  if (a <= f1()) return 1.0;
  if (is_linear(family_)) return (a_ - a) / b_;
  return -std::log(a / b_) / a_;
}

double MonotoneDensity::inf_abs_deriv() const { return std::abs(deriv(1.0)); }
double MonotoneDensity::sup_abs_deriv() const { return std::abs(deriv(0.0)); }
double MonotoneDensity::sup_abs_deriv2() const { return std::abs(deriv2(0.0)); }

std::string MonotoneDensity::name() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const LinearFamily& lin) { out << "linear(" << lin.f0 << "," << lin.f1 << ")"; },
                 [&](const TruncatedExponentialFamily& te) { out << "truncexp(" << te.theta << ")"; },
             },
             family_);
  return out.str();
}

namespace {

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("density: cannot parse number '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("density: cannot parse number '" + item + "'");
    values.push_back(value);
  }
  return values;
}

DensityFamily family_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "linear") return LinearFamily{j.at("f0").get<double>(), j.at("f1").get<double>()};
  if (family == "truncexp") return TruncatedExponentialFamily{j.at("theta").get<double>()};
  throw std::invalid_argument("density: unknown family '" + family + "'");
}

}  // namespace

DensityFamily parse_density_family(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return family_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("density: bad JSON: ") + e.what());
    }
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("density: expected FAMILY:PARAMS, got '" + text + "'");
  const std::string family = text.substr(0, colon);
  const auto params = parse_number_list(text.substr(colon + 1));
  if (family == "linear") {
    if (params.size() != 2) throw std::invalid_argument("density: linear takes two values f0,f1");
    return LinearFamily{params[0], params[1]};
  }
  if (family == "truncexp") {
    if (params.size() != 1) throw std::invalid_argument("density: truncexp takes one value theta");
    return TruncatedExponentialFamily{params[0]};
  }
  throw std::invalid_argument("density: unknown family '" + family + "'");
}

std::string density_family_json(const DensityFamily& family) {
  nlohmann::json j;
  std::visit(Overloaded{
                 [&](const LinearFamily& lin) { j = {{"family", "linear"}, {"f0", lin.f0}, {"f1", lin.f1}}; },
                 [&](const TruncatedExponentialFamily& te) { j = {{"family", "truncexp"}, {"theta", te.theta}}; },
             },
             family);
  return j.dump();
}

double density_integral(const MonotoneDensity& d, double p, double q) {
  if (p < 0.0 || q < 0.0) throw std::invalid_argument("density_integral: exponents must be nonnegative");
  auto integrand = [&](double x) { return std::pow(d.pdf(x), p) * std::pow(std::abs(d.deriv(x)), q); };
  return integrate(integrand, 0.0, 1.0, 1e-13);
}

void sample_into(const MonotoneDensity& d, std::size_t n, Stream& stream, std::vector<double>& out) {
  out.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += stream.exponential();
    out[i] = total;
  }
  total += stream.exponential();
  const double scale = 1.0 / total;
  for (std::size_t i = 0; i < n; ++i) out[i] = d.quantile(out[i] * scale);
}

std::vector<double> sample(const MonotoneDensity& d, std::size_t n, Stream& stream) {
  std::vector<double> out;
  sample_into(d, n, stream, out);
  return out;
}

}  // namespace grenlab
