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
#include <string>
#include <vector>

#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

enum class CurvePreset { Circle, Ellipse, TorusKnot, Fourier };

/// Closed C^3 curve g : [0,1) -> R^3 with analytic derivatives up to g'''.
///
/// Curvature and torsion follow the parameter-scaled convention: with
/// ' = d/ds (s the raw parameter, not arc length),
///     t' = kappa nu,   nu' = -kappa t + tau b,   b' = -tau nu,
/// so kappa = |g' x g''| / |g'|^2 and tau = |g'| (g' x g'') . g''' / |g' x g''|^2.
/// Immutable and cheap to copy; safe to share across threads.
class ClosedCurve {
 public:
  static ClosedCurve circle(double radius);
  static ClosedCurve ellipse(double a, double b);
  static ClosedCurve torus_knot(int p, int q, double major_radius, double tube_radius);
  /// g(s) = center + sum_k cos_coeffs[k-1] cos(2 pi k s) + sin_coeffs[k-1] sin(2 pi k s).
  static ClosedCurve fourier(Vec3 center, std::vector<Vec3> cos_coeffs, std::vector<Vec3> sin_coeffs);

  Vec3 position(double s) const;
  Vec3 d1(double s) const;
  Vec3 d2(double s) const;
  Vec3 d3(double s) const;

  CurvePreset preset() const;
  const std::string& describe() const;

  struct Validation {
    double closure_position_error = 0.0;   // |g(0) - g(1)|
    double closure_tangent_error = 0.0;    // |g'(0) - g'(1)| / max|g'|
    double min_gprime = 0.0;
    double max_gprime = 0.0;
    double min_cross = 0.0;                // min |g' x g''| over the grid
    bool closed() const { return closure_position_error <= 1e-10 && closure_tangent_error <= 1e-8; }
    bool regular() const { return min_gprime > 0.0; }
    bool curvature_ok() const { return min_cross > 0.0; }
    bool ok() const { return closed() && regular() && curvature_ok(); }
  };
  Validation validate(int n_grid = 2048) const;

 private:
  struct Impl;
  explicit ClosedCurve(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Frame at one parameter value, everything parameter-scaled (see ClosedCurve).
struct FrenetData {
  double gprime_norm = 0.0;
  Vec3 t, nu, b;
  double kappa = 0.0;
  double tau = 0.0;
};

/// Throws CurvatureVanishes when |g' x g''| < 1e-12 |g'|^3 at s.
FrenetData evaluate_frame(const ClosedCurve& curve, double s);

/// Length of the curve by adaptive panel-doubling Gauss quadrature of |g'|.
double arc_length(const ClosedCurve& curve, double rel_tol);

struct FrameScalarDerivatives {
  double dkappa_ds = 0.0;
  double dtau_ds = 0.0;
  double dgprime_ds = 0.0;
};

/// Central differences with periodic wrap; h must be in (0, 1e-3].
FrameScalarDerivatives frame_scalar_derivatives(const ClosedCurve& curve, double s, double h = 1e-5);

struct CurveExtrema {
  double min_gprime = 0.0;
  double max_gprime = 0.0;
  double max_kappa = 0.0;
  double max_kappa_over_gprime = 0.0;  // 1 / (min radius of curvature)
};

/// Grid extrema with one Newton polish step per grid candidate.
CurveExtrema curve_extrema(const ClosedCurve& curve, int n_grid);

}  // namespace thin_inductor
