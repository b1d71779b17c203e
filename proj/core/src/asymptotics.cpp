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

#include "thin_inductor/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thin_inductor/errors.hpp"

namespace thin_inductor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

QuadratureSpec default_l_prime_quadrature() {
  QuadratureSpec q;
  q.axis[0] = AxisSpec{12, 8, Grading::Uniform, 2.0};   // s
  q.axis[1] = AxisSpec{12, 4, Grading::Uniform, 2.0};   // xi
  q.axis[2] = AxisSpec{14, 6, Grading::Uniform, 2.0};   // theta
  q.target_rel_tol = 1e-8;
  return q;
}

LPrimeBreakdown compute_l_prime(const SingularField& field, const QuadratureSpec& quad) {
  const TubeGeometry& tube = field.tube();
  const double delta = field.delta();
  LPrimeBreakdown out;
  out.arc_length = arc_length(tube.curve(), 1e-12);
  const double log_coeff = out.arc_length / kTwoPi;
  out.term_log = log_coeff * std::log(delta / 2.0);

  QuadratureSpec q = quad;
  q.target_rel_tol = 0.0;  // composite tolerance checked below

  // phi' is supported on [1/2, 3/4].
  const auto phi_integrand = [&](double s, double xi, double theta) {
    const double a0 = a_factor(tube, 0.0, TubeCoords{s, xi, theta});
    const double dphi = field.cutoff().eval(xi).dphi;
    return a0 * xi * theta * theta * dphi * dphi / (4.0 * std::numbers::pi * std::numbers::pi);
  };
  const QuadratureResult phi_res =
      integrate_3d(phi_integrand, {0.0, 0.5, 0.0}, {1.0, 0.75, kTwoPi}, q);
  out.term_phi = phi_res.value;

  // The tau term vanishes for planar curves; phi is supported on [0, 3/4].
  const auto tau_integrand = [&](double s, double xi, double theta) {
    const FrenetData fr = evaluate_frame(tube.curve(), s);
    const double a0 = fr.gprime_norm - delta * xi * fr.kappa * std::cos(theta);
    const double phi = field.cutoff().eval(xi).phi;
    return delta * delta * xi * fr.tau * fr.tau * phi * phi /
           (4.0 * std::numbers::pi * std::numbers::pi * a0);
  };
  const QuadratureResult tau_res =
      integrate_3d(tau_integrand, {0.0, 0.0, 0.0}, {1.0, 0.75, kTwoPi}, q);
  out.term_tau = tau_res.value;

  const auto tail_integrand = [&](double xi) {
    const double phi = field.cutoff().eval(xi).phi;
    return phi * phi / xi;
  };
  AxisSpec tail_axis = quad.axis[1];
  tail_axis.grading = Grading::Uniform;
  tail_axis.panels = std::max(tail_axis.panels, 4);
  const double tail = integrate_1d(tail_integrand, 0.5, 0.75, tail_axis);
  AxisSpec tail_check = tail_axis;
  tail_check.order += 2;
  const double tail2 = integrate_1d(tail_integrand, 0.5, 0.75, tail_check);
  out.term_tail = log_coeff * tail;

  out.quad_error = phi_res.error_estimate + tau_res.error_estimate +
                   log_coeff * std::abs(tail - tail2);
  const double tol = quad.target_rel_tol > 0.0 ? quad.target_rel_tol : 1e-8;
  if (out.quad_error > tol * std::max(1e-300, std::abs(out.total()))) {
    throw ToleranceNotReached("compute_l_prime: quadrature error above target");
  }
  return out;
}

double asymptotic_total(const ExpansionInputs& inputs, double eps) {
  if (!(eps > 0.0) || !(eps <= 0.5 * inputs.delta)) {
    throw EpsilonOutOfRange("asymptotic_total: eps must lie in (0, delta/2]");
  }
  double total = -inputs.log_coeff * std::log(eps) + inputs.l_prime;
  if (inputs.correction) total += *inputs.correction;
  return total;
}

QuadratureSpec default_energy_quadrature(double eps_over_delta) {
  QuadratureSpec q;
  const int log_panels = static_cast<int>(std::ceil(std::log2(1.0 / eps_over_delta))) + 4;
  q.axis[0] = AxisSpec{10, 8, Grading::Uniform, 2.0};                      // s
  q.axis[1] = AxisSpec{12, std::max(10, log_panels), Grading::GeometricLo, 2.0};  // xi
  q.axis[2] = AxisSpec{14, 4, Grading::Uniform, 2.0};                      // theta
  return q;
}

EnergyResult direct_singular_energy(const SingularField& field, double eps, EnergyMethod method,
                                    const QuadratureSpec& quad, const McSpec& mc) {
  const double delta = field.delta();
  if (!(eps > 0.0) || !(eps <= 0.5 * delta)) {
    throw EpsilonOutOfRange("direct_singular_energy: eps must lie in (0, delta/2]");
  }
  const TubeGeometry& tube = field.tube();

  if (method == EnergyMethod::Parametric) {
    const auto integrand = [&](double s, double xi, double theta) {
      const TubeCoords c{s, xi, theta};
      const double a0 = a_factor(tube, 0.0, c);
      return grad_v(field, c).norm2() * delta * delta * a0 * xi;
    };
    // The gradient vanishes for xi >= 3/4; split at the cutoff breakpoints so
    // the C^2 seams land on panel boundaries.
    const double xi0 = eps / delta;
    EnergyResult out;
    if (xi0 < 0.5) {
      QuadratureSpec q = quad;
      q.axis[1].grading = Grading::GeometricLo;
      const QuadratureResult r = integrate_3d(integrand, {0.0, xi0, 0.0}, {1.0, 0.5, kTwoPi}, q);
      out.value += r.value;
      out.error += r.error_estimate;
    }
    {
      QuadratureSpec q = quad;
      q.axis[1].grading = Grading::Uniform;
      q.axis[1].panels = std::min(q.axis[1].panels, 6);
      const QuadratureResult r =
          integrate_3d(integrand, {0.0, std::max(xi0, 0.5), 0.0}, {1.0, 0.75, kTwoPi}, q);
      out.value += r.value;
      out.error += r.error_estimate;
    }
    return out;
  }

  // Ambient Monte Carlo: uniform box proposals, rejection through invert_F.
  const auto& coarse = tube.coarse_points();
  Vec3 lo = coarse.front(), hi = coarse.front();
  for (const Vec3& p : coarse) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }
  const double pad = 1.05 * delta;
  lo -= Vec3{pad, pad, pad};
  hi += Vec3{pad, pad, pad};
  const double xi_lo = eps / delta;
  const auto fn = [&](const Vec3& x) {
    const auto c = invert_F(tube, 0.0, x);
    if (!c || c->xi < xi_lo || c->xi >= 1.0) return 0.0;
    if (std::abs(c->theta) <= 1e-12 || std::abs(c->theta - kTwoPi) <= 1e-12) return 0.0;
    return grad_v(field, *c).norm2();
  };
  const McResult r = mc_integrate_region(fn, BoxSampler{lo, hi}, mc);
  return {r.value, r.std_error};
}

FitResult fit_log_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs;
  for (const auto& [eps, L] : points) {
    (void)L;
    if (std::find(xs.begin(), xs.end(), eps) == xs.end()) xs.push_back(eps);
  }
  if (xs.size() < 2) throw DegenerateFit("fit_log_slope: need at least two distinct eps");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const auto& [eps, L] : points) {
    const double x = std::log(1.0 / eps);
    sx += x; sy += L; sxx += x * x; sxy += x * L;
  }
  FitResult fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (const auto& [eps, L] : points) {
    const double x = std::log(1.0 / eps);
    fit.max_residual = std::max(fit.max_residual, std::abs(L - fit.slope * x - fit.intercept));
  }
  return fit;
}

bool InductanceExpansion::consistent(double fit_tol) const {
  if (!(log_coeff > 0.0)) return false;
  if (fit && std::abs(fit->slope - log_coeff) > fit_tol) return false;
  return true;
}

std::vector<double> default_eps_sweep(double delta, int count) {
  std::vector<double> eps;
  double e = delta / 2.0;
  for (int k = 0; k < count; ++k) {
    eps.push_back(e);
    e /= 2.0;
  }
  return eps;
}

}  // namespace thin_inductor
