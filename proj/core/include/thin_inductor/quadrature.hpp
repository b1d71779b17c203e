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

#include <array>
#include <functional>
#include <vector>

namespace thin_inductor {

enum class Grading { Uniform, GeometricLo, GeometricHi, GeometricBoth };

struct AxisSpec {
  int order = 12;       // Gauss-Legendre nodes per panel, 2..64
  int panels = 4;
  Grading grading = Grading::Uniform;
  double ratio = 2.0;   // geometric panel-width ratio, in (1, 4]
};

struct QuadratureSpec {
  std::array<AxisSpec, 3> axis{};
  double target_rel_tol = 0.0;  // 0 disables the tolerance check
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |value(order) - value(order+2)|
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Panel edges for one axis of [a, b] under the given grading.
std::vector<double> panel_edges(double a, double b, const AxisSpec& axis);

double integrate_1d(const std::function<double(double)>& fn, double a, double b, const AxisSpec& axis);

/// Panel-summed tensor Gauss-Legendre over an axis-aligned box, dim in {1,2,3}.
/// Panels evaluate in parallel; contributions are summed in fixed index order,
/// so results are bitwise reproducible for any worker count. Throws
/// ToleranceNotReached when target_rel_tol > 0 and the order/order+2 estimate
/// misses it.
QuadratureResult integrate_box(const std::function<double(const double*)>& fn, const double* lo,
                               const double* hi, const QuadratureSpec& spec, int dim);

QuadratureResult integrate_3d(const std::function<double(double, double, double)>& fn,
                              const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                              const QuadratureSpec& spec);

}  // namespace thin_inductor
