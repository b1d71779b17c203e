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

#include "thin_inductor/tube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thin_inductor/errors.hpp"

namespace thin_inductor {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCoarseGrid = 256;

double r_eps(double delta, double eps, double xi) { return (delta - eps) * xi + eps; }

void check_eps(double eps, double delta, bool allow_zero) {
  const bool lower_ok = allow_zero ? (eps >= 0.0) : (eps > 0.0);
  if (!lower_ok || !(eps <= 0.5 * delta)) {
    throw EpsilonOutOfRange("eps must lie in " + std::string(allow_zero ? "[0" : "(0") +
                            ", delta/2]");
  }
}
}  // namespace

TubeGeometry::TubeGeometry(ClosedCurve curve, double delta, double eta)
    : curve_(std::move(curve)), delta_(delta) {
  validity_.safety_eta = eta;
  validity_.min_a0 = std::numeric_limits<double>::infinity();
  validity_.max_a0 = 0.0;
  validity_.margin = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 2048;
  for (int i = 0; i < kGrid; ++i) {
    const FrenetData fr = evaluate_frame(curve_, static_cast<double>(i) / kGrid);
    validity_.min_a0 = std::min(validity_.min_a0, fr.gprime_norm - delta_ * fr.kappa);
    validity_.max_a0 = std::max(validity_.max_a0, fr.gprime_norm + delta_ * fr.kappa);
    validity_.margin = std::min(validity_.margin, fr.gprime_norm / (delta_ * fr.kappa) - 1.0);
  }
  if (!(validity_.margin >= 0.05)) {
    throw TubeInvalid("tube radius too large: delta |kappa| < |g'| needs a >= 5% margin");
  }
  coarse_.reserve(kCoarseGrid);
  for (int i = 0; i < kCoarseGrid; ++i) {
    coarse_.push_back(curve_.position(static_cast<double>(i) / kCoarseGrid));
  }
}

TubeGeometry TubeGeometry::with_auto_delta(const ClosedCurve& curve, double safety_eta) {
  if (!(safety_eta > 0.0) || safety_eta > 0.95) {
    throw TubeInvalid("safety eta must lie in (0, 0.95]");
  }
  const CurveExtrema e = curve_extrema(curve, 2048);
  const double delta = safety_eta / e.max_kappa_over_gprime;
  return TubeGeometry(curve, delta, safety_eta);
}

TubeGeometry TubeGeometry::with_delta(const ClosedCurve& curve, double delta) {
  if (!(delta > 0.0)) throw TubeInvalid("delta must be positive");
  return TubeGeometry(curve, delta, 0.0);
}

Vec3 map_F(const TubeGeometry& tube, double eps, const TubeCoords& c) {
  check_eps(eps, tube.delta(), /*allow_zero=*/true);
  const FrenetData fr = evaluate_frame(tube.curve(), c.s);
  const double r = r_eps(tube.delta(), eps, c.xi);
  return tube.curve().position(c.s) + r * (std::cos(c.theta) * fr.nu + std::sin(c.theta) * fr.b);
}

double a_factor(const TubeGeometry& tube, double eps, const TubeCoords& c) {
  check_eps(eps, tube.delta(), /*allow_zero=*/true);
  const FrenetData fr = evaluate_frame(tube.curve(), c.s);
  const double a =
      fr.gprime_norm - r_eps(tube.delta(), eps, c.xi) * fr.kappa * std::cos(c.theta);
  if (!(a > 0.0)) throw NonPositiveMetric("a_eps <= 0: tube radius invalid for this curve");
  return a;
}

double jacobian_F(const TubeGeometry& tube, double eps, const TubeCoords& c) {
  const double a = a_factor(tube, eps, c);
  return (tube.delta() - eps) * a * r_eps(tube.delta(), eps, c.xi);
}

Vec3 map_G(const TubeGeometry& tube, double eps, double s, double theta) {
  check_eps(eps, tube.delta(), /*allow_zero=*/false);
  return map_F(tube, eps, TubeCoords{s, 0.0, theta});
}

double surface_measure(const TubeGeometry& tube, double eps, double s, double theta) {
  check_eps(eps, tube.delta(), /*allow_zero=*/false);
  const FrenetData fr = evaluate_frame(tube.curve(), s);
  return eps * (fr.gprime_norm - eps * fr.kappa * std::cos(theta));
}

Vec3 boundary_normal(const TubeGeometry& tube, double eps, double s, double theta) {
  check_eps(eps, tube.delta(), /*allow_zero=*/false);
  const FrenetData fr = evaluate_frame(tube.curve(), s);
  return -(std::cos(theta) * fr.nu + std::sin(theta) * fr.b);
}

namespace {

// Newton on h(s) = (x - g(s)) . g'(s); quadratic near the foot point.
double newton_project(const ClosedCurve& curve, const Vec3& x, double s) {
  for (int it = 0; it < 50; ++it) {
    const Vec3 d = x - curve.position(s);
    const Vec3 g1 = curve.d1(s);
    const double h = dot(d, g1);
    const double hp = dot(d, curve.d2(s)) - g1.norm2();
    if (hp == 0.0) break;
    const double step = h / hp;
    s -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return s - std::floor(s);
}

double wrap_dist(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace

std::optional<TubeCoords> invert_F(const TubeGeometry& tube, double eps, const Vec3& x) {
  check_eps(eps, tube.delta(), /*allow_zero=*/true);
  const ClosedCurve& curve = tube.curve();
  const auto& coarse = tube.coarse_points();
  const int n = static_cast<int>(coarse.size());

  // All local minima of the coarse squared distance, cyclically.
  std::vector<int> seeds;
  for (int i = 0; i < n; ++i) {
    const double d0 = (coarse[i] - x).norm2();
    const double dm = (coarse[(i + n - 1) % n] - x).norm2();
    const double dp = (coarse[(i + 1) % n] - x).norm2();
    if (d0 <= dm && d0 <= dp) seeds.push_back(i);
  }

  // Polish every seed, dedupe by parameter distance, keep the best two.
  std::vector<std::pair<double, double>> candidates;  // (distance, s)
  for (int i : seeds) {
    const double s = newton_project(curve, x, static_cast<double>(i) / n);
    const double d = distance(x, curve.position(s));
    bool merged = false;
    for (auto& c : candidates) {
      if (wrap_dist(c.second, s) < 1e-6) {
        if (d < c.first) c = {d, s};
        merged = true;
        break;
      }
    }
    if (!merged) candidates.emplace_back(d, s);
  }
  std::sort(candidates.begin(), candidates.end());

  const double delta = tube.delta();
  const double d_best = candidates.front().first;
  const double s_best = candidates.front().second;

  const double out_slack = 1e-9 * delta;
  if (d_best > delta + out_slack) return std::nullopt;
  if (d_best < eps - out_slack) return std::nullopt;  // inside the inner hole of the shell

  if (candidates.size() > 1) {
    const double d_second = candidates[1].first;
    if (d_second <= delta + out_slack && d_second - d_best < 1e-8 * std::max(1.0, d_best)) {
      throw AmbiguousProjection("two curve projections tie; point is near the cut locus");
    }
  }

  const FrenetData fr = evaluate_frame(curve, s_best);
  const Vec3 d = x - curve.position(s_best);
  double theta = std::atan2(dot(d, fr.b), dot(d, fr.nu));
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  double xi = (d_best - eps) / (delta - eps);
  xi = std::clamp(xi, 0.0, 1.0);
  return TubeCoords{s_best, xi, theta};
}

}  // namespace thin_inductor
