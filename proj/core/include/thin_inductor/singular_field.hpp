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

#include "thin_inductor/cutoff.hpp"
#include "thin_inductor/quadrature.hpp"
#include "thin_inductor/tube.hpp"
#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

/// The explicit singular potential carried by the tube:
///   v(s, xi, theta) = theta phi(xi) / (2 pi)
/// in the eps = 0 tube coordinates, extended by 0 outside the tube. Its
/// Laplacian f = Delta v is supported in the tube and carries a 1/xi
/// singularity along the axis. v jumps by phi(xi) across the theta = 0 cut.
class SingularField {
 public:
  SingularField(TubeGeometry tube, CutoffProfile cutoff)
      : tube_(std::move(tube)), cutoff_(cutoff) {}

  const TubeGeometry& tube() const { return tube_; }
  const CutoffProfile& cutoff() const { return cutoff_; }
  double delta() const { return tube_.delta(); }

 private:
  TubeGeometry tube_;
  CutoffProfile cutoff_;
};

/// theta phi(xi) / 2pi. Throws OnCutSurface when theta is within 1e-12 of the
/// cut {0, 2pi}; use v_on_cut to pick a side there.
double v_value(const SingularField& field, const TubeCoords& c);

enum class CutSide { ThetaZeroPlus, ThetaTwoPiMinus };

/// One-sided limits on the cut: 0 from theta -> 0+, phi(xi) from theta -> 2pi-.
double v_on_cut(const SingularField& field, double xi, CutSide side);

/// v at an ambient point; 0 outside the tube. Propagates OnCutSurface.
double v_cartesian(const SingularField& field, const Vec3& x);

/// Ambient gradient of v. Throws AxisSingularity for xi < 1e-12.
Vec3 grad_v(const SingularField& field, const TubeCoords& c);

/// f = Delta v in tube coordinates; AxisSingularity for xi < 1e-12.
double f_value(const SingularField& field, const TubeCoords& c);

/// f at an ambient point; 0 outside the tube.
double f_cartesian(const SingularField& field, const Vec3& x);

/// Normal derivative of v on Gamma_eps; identically 0 for eps <= delta/2.
double dv_dn_on_gamma(const SingularField& field, double eps, double s, double theta);

/// Normal derivative of v on the cut leaf Sigma_0 (same from both sides).
double dv_dn_on_sigma0(const SingularField& field, double xi, double s);

/// Truncated L^p norm of f over xi > xi_min:
///   ( int |f|^p J_0 )^{1/p},  J_0 = delta^2 a_0 xi.
/// Finite as xi_min -> 0 iff p < 2.
double lp_norm_f_truncated(const SingularField& field, double p, double xi_min,
                           const QuadratureSpec& quad);

/// Default quadrature for lp_norm_f_truncated: xi graded toward xi_min, theta
/// split so the |sin theta|^p kinks land on panel boundaries.
QuadratureSpec default_lp_quadrature();

}  // namespace thin_inductor
