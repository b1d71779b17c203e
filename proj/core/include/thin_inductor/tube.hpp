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

#include <memory>
#include <optional>
#include <vector>

#include "thin_inductor/curve.hpp"
#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

/// Coordinates on the reference box (0,1) x [0,1] x [0,2pi).
struct TubeCoords {
  double s = 0.0;
  double xi = 0.0;
  double theta = 0.0;
};

/// Tubular neighborhood of a closed curve with outer radius delta.
///
/// The parametric map is
///   F_eps(s, xi, theta) = g(s) + r_eps(xi) (cos theta nu(s) + sin theta b(s)),
///   r_eps(xi) = (delta - eps) xi + eps,
/// valid while delta |kappa| < |g'| everywhere (enforced with a >= 5% margin).
/// eps ranges over [0, delta/2]; eps = 0 parametrizes the full solid tube.
class TubeGeometry {
 public:
  /// delta = eta * min_s |g'| / kappa. eta in (0, 0.95] keeps the margin.
  static TubeGeometry with_auto_delta(const ClosedCurve& curve, double safety_eta = 0.5);
  /// Explicit delta; throws TubeInvalid if the curvature bound fails the margin.
  static TubeGeometry with_delta(const ClosedCurve& curve, double delta);

  const ClosedCurve& curve() const { return curve_; }
  double delta() const { return delta_; }

  struct Validity {
    double min_a0 = 0.0;   // min over grid of |g'| - delta kappa (worst metric factor)
    double max_a0 = 0.0;   // max over grid of |g'| + delta kappa
    double margin = 0.0;   // min |g'| / (delta kappa) - 1
    double safety_eta = 0.0;
  };
  const Validity& validity() const { return validity_; }

  /// Coarse projection table used to seed invert_F; 256 samples of g.
  const std::vector<Vec3>& coarse_points() const { return coarse_; }

 private:
  TubeGeometry(ClosedCurve curve, double delta, double eta);
  ClosedCurve curve_;
  double delta_;
  Validity validity_;
  std::vector<Vec3> coarse_;
};

Vec3 map_F(const TubeGeometry& tube, double eps, const TubeCoords& c);

/// a_eps = |g'| - r_eps(xi) kappa cos theta. Throws NonPositiveMetric if <= 0.
double a_factor(const TubeGeometry& tube, double eps, const TubeCoords& c);

/// J_eps = (delta - eps) a_eps r_eps.
double jacobian_F(const TubeGeometry& tube, double eps, const TubeCoords& c);

/// Boundary map G_eps(s, theta) = F_eps at xi = 0; requires 0 < eps <= delta/2.
Vec3 map_G(const TubeGeometry& tube, double eps, double s, double theta);

/// Surface element of Gamma_eps: eps (|g'| - eps kappa cos theta).
double surface_measure(const TubeGeometry& tube, double eps, double s, double theta);

/// Unit normal on Gamma_eps pointing out of the exterior domain (into the tube):
/// -(cos theta nu + sin theta b).
Vec3 boundary_normal(const TubeGeometry& tube, double eps, double s, double theta);

/// Nearest-point inversion of F_eps. Returns nullopt when x lies outside the
/// closed shell. Throws AmbiguousProjection when two distinct in-shell
/// projections tie within 1e-8 of each other (point near the cut locus).
std::optional<TubeCoords> invert_F(const TubeGeometry& tube, double eps, const Vec3& x);

}  // namespace thin_inductor
