// Copyright 2026 The spq Authors
//
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

#ifndef SPQ_RNG_HPP_
#define SPQ_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace spq {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the label, folded into the seed. Used to derive independent
// sub-seeds ("optimization", "validation", ...) from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// A short random stream addressed by (key, a, b): every draw is a pure
// function of the address and the draw index, so values never depend on the
// order in which streams are visited.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t key, std::uint64_t a, std::uint64_t b);

  std::uint64_t next_u64();
  double uniform();       // [0, 1)
  double uniform_pos();   // (0, 1]
  double normal();        // standard normal, Box-Muller
  double exponential();   // rate 1
  double gamma(double shape);  // scale 1, Marsaglia-Tsang
  std::int64_t poisson(double mean);

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter ctr_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spq

#endif  // SPQ_RNG_HPP_
