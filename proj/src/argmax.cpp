#include "grenlab/argmax.hpp"

#include <limits>

namespace grenlab {

BrownianPath BrownianPath::simulate(double t_lo, double t_hi, double h, const PathKey& key, Clock clock) {
  if (!(h > 0.0)) throw std::invalid_argument("brownian path: step must be positive");
  if (!(t_lo <= 0.0 && t_hi >= 0.0)) throw std::invalid_argument("brownian path: range must contain 0");
  const auto left = static_cast<std::size_t>(std::ceil(-t_lo / h - 1e-9));
  const auto right = static_cast<std::size_t>(std::ceil(t_hi / h - 1e-9));
  BrownianPath path;
  path.t0_ = -h * static_cast<double>(left);
  path.h_ = h;
  path.key_ = key;
  path.clock_ = std::move(clock);
  path.values_.assign(left + right + 1, 0.0);
  Stream stream(key.seed, key.tag, key.replication);
  auto& v = path.values_;
  if (key.noiseless) return path;
  if (!path.clock_) {
    const double sd = std::sqrt(h);
    for (std::size_t i = left + 1; i < v.size(); ++i) v[i] = v[i - 1] + sd * stream.normal();
    for (std::size_t i = left; i-- > 0;) v[i] = v[i + 1] - sd * stream.normal();
    return path;
  }
  double prev_tau = 0.0;
  for (std::size_t i = left + 1; i < v.size(); ++i) {
    const double tau = path.clock(path.t(i));
    v[i] = v[i - 1] + std::sqrt(tau - prev_tau) * stream.normal();
    prev_tau = tau;
  }
  prev_tau = 0.0;
  for (std::size_t i = left; i-- > 0;) {
    const double tau = path.clock(path.t(i));
    v[i] = v[i + 1] - std::sqrt(prev_tau - tau) * stream.normal();
    prev_tau = tau;
  }
  return path;
}

BrownianPath BrownianPath::from_values(double t0, double h, std::vector<double> values, const PathKey& key,
                                       Clock clock) {
  if (!(h > 0.0) || values.size() < 2) throw std::invalid_argument("brownian path: need a step and two values");
  BrownianPath path;
  path.t0_ = t0;
  path.h_ = h;
  path.values_ = std::move(values);
  path.key_ = key;
  path.clock_ = std::move(clock);
  return path;
}

void BrownianPath::infill(int level, std::uint64_t index, double left, double right,
                          std::array<double, 7>& out) const {
  if (index > std::numeric_limits<std::uint32_t>::max()) {
    throw std::out_of_range("brownian path: cell index exceeds the stream key range");
  }
  const std::uint64_t cache_key = (static_cast<std::uint64_t>(level) << 32) | index;
  if (const auto it = infill_cache_.find(cache_key); it != infill_cache_.end()) {
    out = it->second;
    return;
  }
  const double width = h_ / std::pow(8.0, level);
  const double left_t = t0_ + width * static_cast<double>(index);
  const double tau_right = clock(left_t + width);
  double prev_tau = clock(left_t);
  double prev = left;
  const std::uint32_t tag = key_.tag | stream_tag::kInfillBit | (static_cast<std::uint32_t>(level + 1) << 16);
  Stream stream(key_.seed, tag, key_.replication, static_cast<std::uint32_t>(index));
  for (int j = 0; j < 7; ++j) {
    const double tau = clock(left_t + width * (j + 1) / 8.0);
    const double remaining = tau_right - prev_tau;
    const double step = tau - prev_tau;
    const double mean = prev + (right - prev) * step / remaining;
    if (key_.noiseless) {
      prev = mean;
    } else {
      const double var = step * (tau_right - tau) / remaining;
      prev = mean + std::sqrt(std::max(var, 0.0)) * stream.normal();
    }
    out[j] = prev;
    prev_tau = tau;
  }
  infill_cache_.emplace(cache_key, out);
}

IndexWindow index_window(const BrownianPath& path, double a, double b) {
  const double h = path.step();
  const double first = std::ceil((a - path.origin()) / h - 1e-9);
  const double last = std::floor((b - path.origin()) / h + 1e-9);
  const double max_index = static_cast<double>(path.size() - 1);
  IndexWindow w;
  w.lo = static_cast<std::size_t>(std::clamp(first, 0.0, max_index));
  w.hi = static_cast<std::size_t>(std::clamp(last, 0.0, max_index));
  if (w.hi < w.lo) throw std::invalid_argument("index_window: empty window");
  return w;
}

}  // namespace grenlab
