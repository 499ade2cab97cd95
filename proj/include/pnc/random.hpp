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

#ifndef PNC_RANDOM_HPP_
#define PNC_RANDOM_HPP_

#include <array>
#include <cstdint>

namespace pnc {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (seed, slot, draw index), so two simulations that share
// a seed see the same arrivals and channel outcomes no matter which controls
// they apply.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  PhiloxCounter block(std::uint64_t slot, std::uint32_t draw) const;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t slot, std::uint32_t draw) const;

  bool bernoulli(double probability, std::uint64_t slot, std::uint32_t draw) const {
    return uniform(slot, draw) < probability;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace pnc

#endif  // PNC_RANDOM_HPP_
