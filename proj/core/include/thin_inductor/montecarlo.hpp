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
#include <functional>

#include "thin_inductor/rng.hpp"
#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

struct McSpec {
  std::size_t samples = 100000;  // >= 1000
  std::uint64_t seed = 0;
  bool report_variance = true;
};

struct McResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Uniform sampler over an axis-aligned box; three rng indices per point.
struct BoxSampler {
  Vec3 lo, hi;
  double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }
  double density() const { return 1.0 / volume(); }
  Vec3 point(const CounterRng& rng, std::uint64_t sample_index) const {
    const std::uint64_t base = 3 * sample_index;
    return {lo.x + (hi.x - lo.x) * rng.uniform01(base),
            lo.y + (hi.y - lo.y) * rng.uniform01(base + 1),
            lo.z + (hi.z - lo.z) * rng.uniform01(base + 2)};
  }
};

/// Unbiased estimate of the integral of fn over the sampler's box. fn must be
/// pure; it should return 0 outside the region of interest (rejection).
/// Batches evaluate in parallel, batch sums reduce in batch order, so the
/// result is bit-identical for any worker count.
McResult mc_integrate_region(const std::function<double(const Vec3&)>& fn, const BoxSampler& sampler,
                             const McSpec& spec);

}  // namespace thin_inductor
