#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "evsynth/rng.hpp"

using evsynth::rng::CounterStream;
using evsynth::rng::Philox4x32;

TEST_CASE("philox known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are deterministic and independent") {
  CounterStream a(42, 1, 2);
  CounterStream b(42, 1, 2);
  CounterStream c(42, 1, 3);
  CounterStream d(43, 1, 2);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u32();
    CHECK(va == b.next_u32());
    same_c += va == c.next_u32();
    same_d += va == d.next_u32();
  }
  CHECK(same_c < 3);
  CHECK(same_d < 3);
}

TEST_CASE("uniform variates stay in range with the right moments") {
  CounterStream s(7, 0, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double o = s.uniform_open();
    REQUIRE(o > 0.0);
    REQUIRE(o < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 0.005);
  CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal variates have unit variance") {
  CounterStream s(9, 5, 6);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  int within_one = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
    within_one += std::abs(z) < 1.0;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.015);
  CHECK(std::abs(static_cast<double>(within_one) / n - 0.682689) < 0.005);
}

TEST_CASE("bounded draws cover the range uniformly") {
  CounterStream s(11, 0, 1);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto r = s.bounded(7);
    REQUIRE(r < 7);
    ++counts[r];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 500);
  CHECK(s.bounded(1) == 0);
}
