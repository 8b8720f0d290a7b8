#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "grenlab/random.hpp"

using grenlab::Philox4x32;
using grenlab::Stream;

TEST_CASE("philox known answers") {
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
  Stream a(42, grenlab::stream_tag::kSample, 3, 0);
  Stream b(42, grenlab::stream_tag::kSample, 3, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());
  Stream a2(42, grenlab::stream_tag::kSample, 3, 0);
  Stream c2(42, grenlab::stream_tag::kSample, 4, 0);
  Stream d2(43, grenlab::stream_tag::kSample, 3, 0);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a2.next_u32();
    same_c += x == c2.next_u32();
    same_d += x == d2.next_u32();
  }
  CHECK(same_c < 3);
  CHECK(same_d < 3);
}

TEST_CASE("uniform, exponential and normal moments") {
  Stream s(7, grenlab::stream_tag::kSynthetic);
  const int n = 400000;
  double su = 0, su2 = 0, se = 0, sn = 0, sn2 = 0, sn4 = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    su += u;
    su2 += u * u;
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    se += s.exponential();
    const double z = s.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  // Tolerances are about five standard errors.
  CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(su2 / n - 1.0 / 3) < 5 * std::sqrt(4.0 / 45 / n));
  CHECK(std::abs(se / n - 1.0) < 5 * std::sqrt(1.0 / n));
  CHECK(std::abs(sn / n) < 5 * std::sqrt(1.0 / n));
  CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(sn4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
}
