#pragma once

// Counter-based random streams.
//
// Every stream is identified by (seed, tag, id1, id2) and produces its values
// from Philox4x32-10 blocks with the counter {block, id2, id1, tag}. Two
// streams with different identifiers never overlap, and a stream's output does
// not depend on which thread consumes it or in which order replications run.
//
// Reference: Salmon, Moraes, Dror, Shaw, "Parallel random numbers: as easy as
// 1, 2, 3", SC'11.

#include <array>
#include <cmath>
#include <cstdint>

namespace grenlab {

namespace stream_tag {
inline constexpr std::uint32_t kSample = 0x0001;
inline constexpr std::uint32_t kChernoffPath = 0x0010;
inline constexpr std::uint32_t kChernoffOracle = 0x0011;
inline constexpr std::uint32_t kScalingDirect = 0x0012;
inline constexpr std::uint32_t kScalingMapped = 0x0013;
inline constexpr std::uint32_t kLocalPathW = 0x0020;
inline constexpr std::uint32_t kLocalPathB = 0x0021;
inline constexpr std::uint32_t kGammaSums = 0x0030;
inline constexpr std::uint32_t kSynthetic = 0x0040;
// Refinement infill streams set this bit on top of the owning path's tag.
inline constexpr std::uint32_t kInfillBit = 0x8000'0000u;
}  // namespace stream_tag

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(Block counter, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t tag, std::uint32_t id1 = 0, std::uint32_t id2 = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, id2, id1, tag} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  // Standard normal by the Marsaglia-Tsang ziggurat with 128 layers; the
  // layer index, sign and abscissa come from disjoint bits of one 64-bit draw.
  double normal();

 private:
  void refill() {
    buffer_ = Philox4x32::generate(counter_, key_);
    ++counter_[0];
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  Philox4x32::Block counter_;
  Philox4x32::Block buffer_{};
  int pos_ = 4;
};

// Adapter so that standard distributions (e.g. std::binomial_distribution)
// can draw from a stream.
class StreamEngine {
 public:
  using result_type = std::uint64_t;
  explicit StreamEngine(Stream& stream) : stream_(&stream) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return stream_->next_u64(); }

 private:
  Stream* stream_;
};

namespace detail {

struct ZigguratTables {
  static constexpr int kLayers = 128;
  static constexpr double kTailStart = 3.442619855899;
  double width[kLayers];  // layer half-width
  double inner[kLayers];  // fraction of the layer inside the density
  double height[kLayers];  // density at the layer's outer edge

  ZigguratTables() {
    const double area = 9.91256303526217e-3;
    double dn = kTailStart;
    double tn = dn;
    const double q = area / std::exp(-0.5 * dn * dn);
    inner[0] = dn / q;
    inner[1] = 0.0;
    width[0] = q;
    width[kLayers - 1] = dn;
    height[0] = 1.0;
    height[kLayers - 1] = std::exp(-0.5 * dn * dn);
    for (int i = kLayers - 2; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(area / dn + std::exp(-0.5 * dn * dn)));
      inner[i + 1] = dn / tn;
      tn = dn;
      height[i] = std::exp(-0.5 * dn * dn);
      width[i] = dn;
    }
  }
};

inline const ZigguratTables& ziggurat_tables() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace detail

inline double Stream::normal() {
  const auto& z = detail::ziggurat_tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int layer = static_cast<int>(bits & 127u);
    const double sign = (bits & 128u) ? -1.0 : 1.0;
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    const double x = u * z.width[layer];
    if (u < z.inner[layer]) return sign * x;
    if (layer == 0) {
      double tail;
      double y;
      do {
        tail = -std::log(uniform()) / detail::ZigguratTables::kTailStart;
        y = -std::log(uniform());
      } while (y + y < tail * tail);
      return sign * (detail::ZigguratTables::kTailStart + tail);
    }
    if (z.height[layer] + uniform() * (z.height[layer - 1] - z.height[layer]) < std::exp(-0.5 * x * x)) {
      return sign * x;
    }
  }
}

}  // namespace grenlab
