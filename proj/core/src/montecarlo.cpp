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

#include "thin_inductor/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "thin_inductor/parallel.hpp"

namespace thin_inductor {

McResult mc_integrate_region(const std::function<double(const Vec3&)>& fn, const BoxSampler& sampler,
                             const McSpec& spec) {
  if (spec.samples < 1000) throw std::invalid_argument("mc_integrate_region: samples must be >= 1000");
  const CounterRng rng{spec.seed};
  const double inv_density = sampler.volume();

  constexpr std::size_t kBatch = 4096;
  const std::size_t n_batches = (spec.samples + kBatch - 1) / kBatch;
  std::vector<double> sums(n_batches, 0.0);
  std::vector<double> sums2(n_batches, 0.0);

  parallel_for(n_batches, [&](std::size_t b) {
    const std::size_t begin = b * kBatch;
    const std::size_t end = std::min(begin + kBatch, spec.samples);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 x = sampler.point(rng, i);
      const double contrib = fn(x) * inv_density;
      s += contrib;
      s2 += contrib * contrib;
    }
    sums[b] = s;
    sums2[b] = s2;
  });

  double total = 0.0, total2 = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    total += sums[b];
    total2 += sums2[b];
  }
  const double n = static_cast<double>(spec.samples);
  McResult res;
  res.samples = spec.samples;
  res.value = total / n;
  const double mean2 = total2 / n;
  const double var = std::max(0.0, (mean2 - res.value * res.value) * n / (n - 1.0));
  res.std_error = std::sqrt(var / n);
  return res;
}

}  // namespace thin_inductor
