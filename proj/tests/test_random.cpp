// Copyright 2026 The PNC Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "pnc/random.hpp"

namespace pnc {

TEST_CASE("philox4x32-10 matches the Random123 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform draws are pure functions of (seed, slot, draw)") {
  const CounterRng a(42), b(42), c(43);
  for (std::uint64_t slot = 0; slot < 50; ++slot) {
    for (std::uint32_t draw = 0; draw < 5; ++draw) {
      const double x = a.uniform(slot, draw);
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      CHECK(x == b.uniform(slot, draw));
      CHECK(x != c.uniform(slot, draw));
    }
  }
}

TEST_CASE("bernoulli frequencies track the probability") {
  const CounterRng rng(7);
  int hits = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) hits += rng.bernoulli(0.3, static_cast<std::uint64_t>(t), 0) ? 1 : 0;
  CHECK(static_cast<double>(hits) / trials == doctest::Approx(0.3).epsilon(0.01));
  CHECK_FALSE(rng.bernoulli(0.0, 1, 0));
  CHECK(rng.bernoulli(1.0, 1, 0));
}

}  // namespace pnc
