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

#include "thin_inductor/singular_field.hpp"

#include <cmath>
#include <numbers>

#include "thin_inductor/errors.hpp"

namespace thin_inductor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCutTol = 1e-12;

void check_on_cut(double theta) {
  if (std::abs(theta) <= kCutTol || std::abs(theta - kTwoPi) <= kCutTol) {
    throw OnCutSurface("theta lies on the cut; value is branch-dependent");
  }
}

void check_axis(double xi) {
  if (xi < 1e-12) throw AxisSingularity("xi too small: field is singular on the tube axis");
}
}  // namespace

double v_value(const SingularField& field, const TubeCoords& c) {
  check_on_cut(c.theta);
  return c.theta * field.cutoff().eval(c.xi).phi / kTwoPi;
}

double v_on_cut(const SingularField& field, double xi, CutSide side) {
  return side == CutSide::ThetaZeroPlus ? 0.0 : field.cutoff().eval(xi).phi;
}

double v_cartesian(const SingularField& field, const Vec3& x) {
  const auto c = invert_F(field.tube(), 0.0, x);
  if (!c) return 0.0;
  if (c->xi >= 1.0) return 0.0;
  return v_value(field, *c);
}

Vec3 grad_v(const SingularField& field, const TubeCoords& c) {
  check_axis(c.xi);
  const double delta = field.delta();
  const FrenetData fr = evaluate_frame(field.tube().curve(), c.s);
  const CutoffValues ph = field.cutoff().eval(c.xi);
  const double ct = std::cos(c.theta), st = std::sin(c.theta);
  const double a0 = fr.gprime_norm - delta * c.xi * fr.kappa * ct;
  const double dv_dxi = c.theta * ph.dphi / kTwoPi;
  const double dv_dth = ph.phi / kTwoPi;
  return (-fr.tau * dv_dth / a0) * fr.t +
         (ct / delta * dv_dxi - st / (delta * c.xi) * dv_dth) * fr.nu +
         (st / delta * dv_dxi + ct / (delta * c.xi) * dv_dth) * fr.b;
}

double f_value(const SingularField& field, const TubeCoords& c) {
  check_axis(c.xi);
  const double delta = field.delta();
  const FrenetData fr = evaluate_frame(field.tube().curve(), c.s);
  const CutoffValues ph = field.cutoff().eval(c.xi);
  const double ct = std::cos(c.theta), st = std::sin(c.theta);
  const double a0 = fr.gprime_norm - delta * c.xi * fr.kappa * ct;

  // d/ds (tau / a0) with the frame scalars differentiated by central FD.
  const FrameScalarDerivatives sd = frame_scalar_derivatives(field.tube().curve(), c.s);
  const double da0_ds = sd.dgprime_ds - delta * c.xi * ct * sd.dkappa_ds;
  const double ds_tau_over_a0 = sd.dtau_ds / a0 - fr.tau * da0_ds / (a0 * a0);

  const double term_phi =
      (fr.kappa * st / (delta * c.xi) -
       fr.tau * fr.tau * delta * c.xi * fr.kappa * st / (a0 * a0) - ds_tau_over_a0) *
      ph.phi / (kTwoPi * a0);
  const double term_dphi =
      c.theta / (kTwoPi * a0 * delta * delta * c.xi) * (2.0 * a0 - fr.gprime_norm) * ph.dphi;
  const double term_d2phi = c.theta / (kTwoPi * delta * delta) * ph.d2phi;
  return term_phi + term_dphi + term_d2phi;
}

double f_cartesian(const SingularField& field, const Vec3& x) {
  const auto c = invert_F(field.tube(), 0.0, x);
  if (!c) return 0.0;
  if (c->xi >= 1.0) return 0.0;
  return f_value(field, *c);
}

double dv_dn_on_gamma(const SingularField& field, double eps, double s, double theta) {
  (void)s;
  const double delta = field.delta();
  if (!(eps > 0.0) || !(eps <= 0.5 * delta)) throw EpsilonOutOfRange("dv_dn_on_gamma");
  // -(1/delta) dv/dxi at xi = eps/delta; the cutoff plateau makes this 0.
  return -theta * field.cutoff().eval(eps / delta).dphi / (kTwoPi * delta);
}

double dv_dn_on_sigma0(const SingularField& field, double xi, double s) {
  check_axis(xi);
  const double delta = field.delta();
  const FrenetData fr = evaluate_frame(field.tube().curve(), s);
  const double phi = field.cutoff().eval(xi).phi;
  const double A = fr.gprime_norm - delta * xi * fr.kappa;  // a_0 on the theta = 0 leaf
  const double tt = delta * xi * fr.tau;
  return phi / (kTwoPi * std::sqrt(A * A + tt * tt)) * (A / (delta * xi) + delta * xi * fr.tau * fr.tau / A);
}

QuadratureSpec default_lp_quadrature() {
  QuadratureSpec q;
  q.axis[0] = AxisSpec{10, 8, Grading::Uniform, 2.0};                // s
  q.axis[1] = AxisSpec{12, 12, Grading::GeometricLo, 2.0};          // xi
  q.axis[2] = AxisSpec{12, 16, Grading::GeometricBoth, 2.0};        // theta, |sin|^p kinks at ends
  q.target_rel_tol = 1e-4;
  return q;
}

double lp_norm_f_truncated(const SingularField& field, double p, double xi_min,
                           const QuadratureSpec& quad) {
  if (!(p >= 1.0) || p > 2.5) throw Error("lp_norm_f_truncated: p must be in [1, 2.5]");
  if (!(xi_min > 0.0) || xi_min > 0.1) throw Error("lp_norm_f_truncated: xi_min must be in (0, 0.1]");
  const double delta = field.delta();

  const auto integrand = [&](double s, double xi, double theta) {
    const TubeCoords c{s, xi, theta};
    const double a0 = a_factor(field.tube(), 0.0, c);
    return std::pow(std::abs(f_value(field, c)), p) * delta * delta * a0 * xi;
  };

  // f vanishes for xi >= 3/4. Split xi at the inner plateau edge and theta at
  // pi so the |f|^p kinks sit on panel boundaries.
  struct Range {
    double lo, hi;
    Grading grading;
    int extra_panels;
  };
  const int log_panels = static_cast<int>(std::ceil(std::log2(0.5 / xi_min))) + 2;
  const Range xi_ranges[2] = {{xi_min, 0.5, Grading::GeometricLo, log_panels},
                              {0.5, 0.75, Grading::Uniform, 0}};
  const Range th_ranges[2] = {{0.0, std::numbers::pi, Grading::GeometricBoth, 0},
                              {std::numbers::pi, kTwoPi, Grading::GeometricBoth, 0}};

  double total = 0.0, err = 0.0;
  for (const Range& rx : xi_ranges) {
    for (const Range& rt : th_ranges) {
      QuadratureSpec q = quad;
      q.target_rel_tol = 0.0;  // tolerance enforced on the composite value below
      q.axis[1].grading = rx.grading;
      q.axis[1].panels = std::max(q.axis[1].panels, rx.extra_panels);
      q.axis[2].grading = rt.grading;
      const std::array<double, 3> lo{0.0, rx.lo, rt.lo};
      const std::array<double, 3> hi{1.0, rx.hi, rt.hi};
      const QuadratureResult r = integrate_3d(integrand, lo, hi, q);
      total += r.value;
      err += r.error_estimate;
    }
  }
  if (quad.target_rel_tol > 0.0 && err > quad.target_rel_tol * std::abs(total)) {
    throw ToleranceNotReached("lp_norm_f_truncated: quadrature tolerance not reached");
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace thin_inductor
