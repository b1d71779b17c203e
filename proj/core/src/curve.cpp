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

#include "thin_inductor/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "thin_inductor/errors.hpp"
#include "thin_inductor/quadrature.hpp"

namespace thin_inductor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

struct ClosedCurve::Impl {
  CurvePreset preset;
  std::string description;

  // Preset parameters. Only the fields of the active preset are meaningful.
  double circle_r = 0.0;
  double ell_a = 0.0, ell_b = 0.0;
  int knot_p = 0, knot_q = 0;
  double knot_R = 0.0, knot_r = 0.0;
  Vec3 fourier_center;
  std::vector<Vec3> fourier_cos, fourier_sin;

  Vec3 eval(double s, int order) const {
    switch (preset) {
      case CurvePreset::Circle: {
        const double w = kTwoPi;
        const double a = w * s;
        const double f = circle_r * std::pow(w, order);
        switch (order & 3) {
          case 0: return {f * std::cos(a), f * std::sin(a), 0.0};
          case 1: return {-f * std::sin(a), f * std::cos(a), 0.0};
          case 2: return {-f * std::cos(a), -f * std::sin(a), 0.0};
          default: return {f * std::sin(a), -f * std::cos(a), 0.0};
        }
      }
      case CurvePreset::Ellipse: {
        const double w = kTwoPi;
        const double a = w * s;
        const double f = std::pow(w, order);
        switch (order & 3) {
          case 0: return {ell_a * f * std::cos(a), ell_b * f * std::sin(a), 0.0};
          case 1: return {-ell_a * f * std::sin(a), ell_b * f * std::cos(a), 0.0};
          case 2: return {-ell_a * f * std::cos(a), -ell_b * f * std::sin(a), 0.0};
          default: return {ell_a * f * std::sin(a), -ell_b * f * std::cos(a), 0.0};
        }
      }
      case CurvePreset::TorusKnot:
        return eval_knot(s, order);
      case CurvePreset::Fourier:
        return eval_fourier(s, order);
    }
    return {};
  }

  Vec3 eval_knot(double s, int order) const {
    const double A = kTwoPi * knot_p;
    const double B = kTwoPi * knot_q;
    const double a = A * s, b = B * s;
    const double ca = std::cos(a), sa = std::sin(a);
    const double cb = std::cos(b), sb = std::sin(b);
    const double w = knot_R + knot_r * cb;
    const double w1 = -knot_r * B * sb;
    const double w2 = -knot_r * B * B * cb;
    const double w3 = knot_r * B * B * B * sb;
    switch (order) {
      case 0:
        return {w * ca, w * sa, knot_r * sb};
      case 1:
        return {w1 * ca - w * A * sa, w1 * sa + w * A * ca, knot_r * B * cb};
      case 2:
        return {w2 * ca - 2.0 * w1 * A * sa - w * A * A * ca,
                w2 * sa + 2.0 * w1 * A * ca - w * A * A * sa,
                -knot_r * B * B * sb};
      default:
        return {w3 * ca - 3.0 * w2 * A * sa - 3.0 * w1 * A * A * ca + w * A * A * A * sa,
                w3 * sa + 3.0 * w2 * A * ca - 3.0 * w1 * A * A * sa - w * A * A * A * ca,
                -knot_r * B * B * B * cb};
    }
  }

  Vec3 eval_fourier(double s, int order) const {
    Vec3 acc = (order == 0) ? fourier_center : Vec3{};
    const std::size_t n = std::max(fourier_cos.size(), fourier_sin.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      const double f = std::pow(w, order);
      const double a = w * s;
      // d/ds rotates (cos, sin) by a quarter period per order.
      double cw, sw;
      switch (order & 3) {
        case 0: cw = std::cos(a); sw = std::sin(a); break;
        case 1: cw = -std::sin(a); sw = std::cos(a); break;
        case 2: cw = -std::cos(a); sw = -std::sin(a); break;
        default: cw = std::sin(a); sw = -std::cos(a); break;
      }
      if (i < fourier_cos.size()) acc += fourier_cos[i] * (f * cw);
      if (i < fourier_sin.size()) acc += fourier_sin[i] * (f * sw);
    }
    return acc;
  }
};

ClosedCurve::ClosedCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ClosedCurve ClosedCurve::circle(double radius) {
  auto impl = std::make_shared<Impl>();
  impl->preset = CurvePreset::Circle;
  impl->circle_r = radius;
  std::ostringstream os;
  os << "circle{R=" << radius << "}";
  impl->description = os.str();
  return ClosedCurve(impl);
}

ClosedCurve ClosedCurve::ellipse(double a, double b) {
  auto impl = std::make_shared<Impl>();
  impl->preset = CurvePreset::Ellipse;
  impl->ell_a = a;
  impl->ell_b = b;
  std::ostringstream os;
  os << "ellipse{a=" << a << ",b=" << b << "}";
  impl->description = os.str();
  return ClosedCurve(impl);
}

ClosedCurve ClosedCurve::torus_knot(int p, int q, double major_radius, double tube_radius) {
  auto impl = std::make_shared<Impl>();
  impl->preset = CurvePreset::TorusKnot;
  impl->knot_p = p;
  impl->knot_q = q;
  impl->knot_R = major_radius;
  impl->knot_r = tube_radius;
  std::ostringstream os;
  os << "torus_knot{p=" << p << ",q=" << q << ",R=" << major_radius << ",r=" << tube_radius << "}";
  impl->description = os.str();
  return ClosedCurve(impl);
}

ClosedCurve ClosedCurve::fourier(Vec3 center, std::vector<Vec3> cos_coeffs, std::vector<Vec3> sin_coeffs) {
  auto impl = std::make_shared<Impl>();
  impl->preset = CurvePreset::Fourier;
  impl->fourier_center = center;
  impl->fourier_cos = std::move(cos_coeffs);
  impl->fourier_sin = std::move(sin_coeffs);
  std::ostringstream os;
  os << "fourier{" << impl->fourier_cos.size() << " cos, " << impl->fourier_sin.size() << " sin}";
  impl->description = os.str();
  return ClosedCurve(impl);
}

Vec3 ClosedCurve::position(double s) const { return impl_->eval(s, 0); }
Vec3 ClosedCurve::d1(double s) const { return impl_->eval(s, 1); }
Vec3 ClosedCurve::d2(double s) const { return impl_->eval(s, 2); }
Vec3 ClosedCurve::d3(double s) const { return impl_->eval(s, 3); }
CurvePreset ClosedCurve::preset() const { return impl_->preset; }
const std::string& ClosedCurve::describe() const { return impl_->description; }

ClosedCurve::Validation ClosedCurve::validate(int n_grid) const {
  Validation v;
  v.closure_position_error = distance(position(0.0), position(1.0));
  v.min_gprime = std::numeric_limits<double>::infinity();
  v.max_gprime = 0.0;
  v.min_cross = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_grid; ++i) {
    const double s = static_cast<double>(i) / n_grid;
    const Vec3 g1 = d1(s);
    const double n1 = g1.norm();
    v.min_gprime = std::min(v.min_gprime, n1);
    v.max_gprime = std::max(v.max_gprime, n1);
    v.min_cross = std::min(v.min_cross, cross(g1, d2(s)).norm());
  }
  v.closure_tangent_error = distance(d1(0.0), d1(1.0)) / v.max_gprime;
  return v;
}

FrenetData evaluate_frame(const ClosedCurve& curve, double s) {
  FrenetData fr;
  const Vec3 g1 = curve.d1(s);
  const Vec3 g2 = curve.d2(s);
  const Vec3 g3 = curve.d3(s);
  fr.gprime_norm = g1.norm();
  const Vec3 cr = cross(g1, g2);
  const double ncr = cr.norm();
  if (ncr < 1e-12 * fr.gprime_norm * fr.gprime_norm * fr.gprime_norm) {
    throw CurvatureVanishes("Frenet normal undefined: |g' x g''| vanishes at s");
  }
  fr.t = g1 / fr.gprime_norm;
  fr.b = cr / ncr;
  fr.nu = cross(fr.b, fr.t);
  fr.kappa = ncr / (fr.gprime_norm * fr.gprime_norm);
  fr.tau = fr.gprime_norm * dot(cr, g3) / (ncr * ncr);
  return fr;
}

double arc_length(const ClosedCurve& curve, double rel_tol) {
  if (!(rel_tol > 0.0)) throw ToleranceNotReached("arc_length: rel_tol must be positive");
  const auto speed = [&curve](double s) { return curve.d1(s).norm(); };
  double prev = 0.0;
  int panels = 4;
  for (int round = 0; round < 16; ++round, panels *= 2) {
    AxisSpec axis;
    axis.order = 12;
    axis.panels = panels;
    const double value = integrate_1d(speed, 0.0, 1.0, axis);
    if (round > 0 && std::abs(value - prev) <= rel_tol * std::abs(value)) return value;
    prev = value;
  }
  throw ToleranceNotReached("arc_length: refinement budget exhausted");
}

FrameScalarDerivatives frame_scalar_derivatives(const ClosedCurve& curve, double s, double h) {
  if (!(h > 0.0) || h > 1e-3) throw Error("frame_scalar_derivatives: h must be in (0, 1e-3]");
  // Periodicity of the presets makes the wraparound implicit.
  const FrenetData fp = evaluate_frame(curve, s + h);
  const FrenetData fm = evaluate_frame(curve, s - h);
  FrameScalarDerivatives d;
  d.dkappa_ds = (fp.kappa - fm.kappa) / (2.0 * h);
  d.dtau_ds = (fp.tau - fm.tau) / (2.0 * h);
  d.dgprime_ds = (fp.gprime_norm - fm.gprime_norm) / (2.0 * h);
  return d;
}

namespace {

// One Newton step on the derivative of fn (both derivatives by central FD).
double polish_extremum(const std::function<double(double)>& fn, double s0, double h) {
  const double fp = fn(s0 + h), fm = fn(s0 - h), f0 = fn(s0);
  const double d1 = (fp - fm) / (2.0 * h);
  const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
  if (d2 == 0.0) return s0;
  const double step = d1 / d2;
  if (std::abs(step) > h) return s0;  // polish only within the grid cell
  return s0 - step;
}

}  // namespace

CurveExtrema curve_extrema(const ClosedCurve& curve, int n_grid) {
  n_grid = std::max(n_grid, 256);
  const auto speed = [&curve](double s) { return curve.d1(s).norm(); };
  const auto kappa = [&curve](double s) { return evaluate_frame(curve, s).kappa; };
  const auto ratio = [&curve](double s) {
    const FrenetData fr = evaluate_frame(curve, s);
    return fr.kappa / fr.gprime_norm;
  };

  CurveExtrema e;
  e.min_gprime = std::numeric_limits<double>::infinity();
  const double h = 0.125 / n_grid;
  int i_min_speed = 0, i_max_speed = 0, i_max_kappa = 0, i_max_ratio = 0;
  double best_min_speed = std::numeric_limits<double>::infinity();
  double best_max_speed = -1.0, best_max_kappa = -1.0, best_max_ratio = -1.0;
  for (int i = 0; i < n_grid; ++i) {
    const double s = static_cast<double>(i) / n_grid;
    const double sp = speed(s);
    const double ka = kappa(s);
    if (sp < best_min_speed) { best_min_speed = sp; i_min_speed = i; }
    if (sp > best_max_speed) { best_max_speed = sp; i_max_speed = i; }
    if (ka > best_max_kappa) { best_max_kappa = ka; i_max_kappa = i; }
    const double ra = ka / sp;
    if (ra > best_max_ratio) { best_max_ratio = ra; i_max_ratio = i; }
  }
  const auto at = [&](int i) { return static_cast<double>(i) / n_grid; };
  e.min_gprime = speed(polish_extremum(speed, at(i_min_speed), h));
  e.max_gprime = speed(polish_extremum(speed, at(i_max_speed), h));
  e.max_kappa = kappa(polish_extremum(kappa, at(i_max_kappa), h));
  e.max_kappa_over_gprime = ratio(polish_extremum(ratio, at(i_max_ratio), h));
  // The polish step may only improve the extremum.
  e.min_gprime = std::min(e.min_gprime, best_min_speed);
  e.max_gprime = std::max(e.max_gprime, best_max_speed);
  e.max_kappa = std::max(e.max_kappa, best_max_kappa);
  e.max_kappa_over_gprime = std::max(e.max_kappa_over_gprime, best_max_ratio);
  return e;
}

}  // namespace thin_inductor
