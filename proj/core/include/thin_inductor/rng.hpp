// Copyright 2026 The thin-inductor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace thin_inductor {

/// SplitMix64 run in counter mode: output(i) = finalizer(seed + (i+1) * golden).
/// Stateless and seekable, so any worker can evaluate any sample index and the
/// stream is identical for every worker count.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t at(std::uint64_t index) const {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01(std::uint64_t index) const {
    return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
  }
};

}  // namespace thin_inductor
