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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thin_inductor/curve.hpp"
#include "thin_inductor/errors.hpp"
#include "thin_inductor/rng.hpp"

using namespace thin_inductor;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frame from positions only: central differences for g', g'', g''' and the
// same parameter-scaled formulas. Independent of evaluate_frame's derivative
// path.
FrenetData fd_frame(const ClosedCurve& curve, double s, double h) {
  const Vec3 p2 = curve.position(s + 2 * h), p1 = curve.position(s + h);
  const Vec3 m1 = curve.position(s - h), m2 = curve.position(s - 2 * h);
  const Vec3 p0 = curve.position(s);
  const Vec3 g1 = (p1 - m1) / (2 * h);
  const Vec3 g2 = (p1 - 2.0 * p0 + m1) / (h * h);
  const Vec3 g3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2 * h * h * h);
  FrenetData fr;
  fr.gprime_norm = g1.norm();
  const Vec3 cr = cross(g1, g2);
  fr.t = g1 / fr.gprime_norm;
  fr.b = cr.normalized();
  fr.nu = cross(fr.b, fr.t);
  fr.kappa = cr.norm() / (fr.gprime_norm * fr.gprime_norm);
  fr.tau = fr.gprime_norm * dot(cr, g3) / cr.norm2();
  return fr;
}

double frame_diff(const FrenetData& a, const FrenetData& b) {
  return std::abs(a.gprime_norm - b.gprime_norm) + (a.t - b.t).norm() + (a.nu - b.nu).norm() +
         (a.b - b.b).norm() + std::abs(a.kappa - b.kappa) + std::abs(a.tau - b.tau);
}

}  // namespace

TEST_CASE("unit circle frame at s = 0") {
  const ClosedCurve c = ClosedCurve::circle(1.0);
  const FrenetData fr = evaluate_frame(c, 0.0);
  CHECK(fr.gprime_norm == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK((fr.t - Vec3{0, 1, 0}).norm() <= 1e-14);
  CHECK((fr.nu - Vec3{-1, 0, 0}).norm() <= 1e-14);
  CHECK((fr.b - Vec3{0, 0, 1}).norm() <= 1e-14);
  CHECK(fr.kappa == doctest::Approx(kTwoPi).epsilon(1e-14));
  CHECK(fr.tau == 0.0);
}

TEST_CASE("planar presets have zero torsion") {
  const ClosedCurve e = ClosedCurve::ellipse(1.0, 0.5);
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(evaluate_frame(e, i / 32.0).tau) <= 1e-9);
  }
}

TEST_CASE("torus knot frame matches the finite-difference oracle at order 2") {
  const ClosedCurve k = ClosedCurve::torus_knot(2, 3, 2.0, 0.5);
  const double s = 0.1;
  const FrenetData exact = evaluate_frame(k, s);
  const double e1 = frame_diff(fd_frame(k, s, 1e-4), exact);
  const double e2 = frame_diff(fd_frame(k, s, 5e-5), exact);
  CHECK(e1 < 1e-4);
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("Serret-Frenet residuals fall at second order in h") {
  const ClosedCurve k = ClosedCurve::torus_knot(2, 3, 2.0, 0.5);
  const CounterRng rng{5};
  const double h = 1e-5;
  for (int i = 0; i < 10; ++i) {
    const double s = rng.uniform01(i);
    const FrenetData f0 = evaluate_frame(k, s);
    const FrenetData fp = evaluate_frame(k, s + h);
    const FrenetData fm = evaluate_frame(k, s - h);
    const double scale = f0.kappa + std::abs(f0.tau) + f0.gprime_norm;
    const Vec3 dt = (fp.t - fm.t) / (2 * h);
    const Vec3 dnu = (fp.nu - fm.nu) / (2 * h);
    const Vec3 db = (fp.b - fm.b) / (2 * h);
    CHECK((dt - f0.kappa * f0.nu).norm() <= 50.0 * h * scale * scale);
    CHECK((dnu - (-f0.kappa * f0.t + f0.tau * f0.b)).norm() <= 50.0 * h * scale * scale);
    CHECK((db + f0.tau * f0.nu).norm() <= 50.0 * h * scale * scale);
    CHECK((f0.b - cross(f0.t, f0.nu)).norm() <= 1e-14);
  }
}

TEST_CASE("arc length of circles") {
  CHECK(arc_length(ClosedCurve::circle(1.0), 1e-12) == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(arc_length(ClosedCurve::circle(2.5), 1e-12) ==
        doctest::Approx(2.5 * kTwoPi).epsilon(1e-12));
}

TEST_CASE("arc length of the 2:1 ellipse") {
  // Independent oracle: adaptive Simpson on |g'| refined to machine precision,
  // frozen. 4 a E(e) with e^2 = 3/4.
  const double frozen = 4.8442241102738395;
  const ClosedCurve e = ClosedCurve::ellipse(1.0, 0.5);
  CHECK(arc_length(e, 1e-12) == doctest::Approx(frozen).epsilon(1e-11));

  // Cross-check adaptive result against a doubled-order fixed rule.
  double simpson = 0.0;
  const int n = 1 << 14;
  for (int i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n, m = (i + 0.5) / n, b = static_cast<double>(i + 1) / n;
    simpson += (e.d1(a).norm() + 4.0 * e.d1(m).norm() + e.d1(b).norm()) / (6.0 * n);
  }
  CHECK(simpson == doctest::Approx(frozen).epsilon(1e-11));
}

TEST_CASE("arc length rejects non-positive tolerances") {
  CHECK_THROWS_AS(arc_length(ClosedCurve::ellipse(1.0, 0.5), 0.0), ToleranceNotReached);
}

TEST_CASE("frame scalar derivatives") {
  SUBCASE("circle: all constant") {
    const auto d = frame_scalar_derivatives(ClosedCurve::circle(1.0), 0.3);
    CHECK(std::abs(d.dkappa_ds) <= 1e-7);
    CHECK(std::abs(d.dtau_ds) <= 1e-7);
    CHECK(std::abs(d.dgprime_ds) <= 1e-7);
  }
  SUBCASE("ellipse apex is a curvature extremum") {
    const auto d = frame_scalar_derivatives(ClosedCurve::ellipse(1.0, 0.5), 0.0);
    CHECK(std::abs(d.dkappa_ds) <= 1e-6);
  }
  SUBCASE("torus knot values are Richardson-stable") {
    const ClosedCurve k = ClosedCurve::torus_knot(2, 3, 2.0, 0.5);
    const auto dh = frame_scalar_derivatives(k, 0.2, 1e-5);
    const auto dh2 = frame_scalar_derivatives(k, 0.2, 5e-6);
    CHECK(std::abs(dh.dkappa_ds - dh2.dkappa_ds) <= 1e-6 * std::max(1.0, std::abs(dh.dkappa_ds)));
    CHECK(std::abs(dh.dtau_ds - dh2.dtau_ds) <= 1e-6 * std::max(1.0, std::abs(dh.dtau_ds)));
    CHECK(std::abs(dh.dgprime_ds - dh2.dgprime_ds) <=
          1e-6 * std::max(1.0, std::abs(dh.dgprime_ds)));
  }
  SUBCASE("h out of range") {
    CHECK_THROWS(frame_scalar_derivatives(ClosedCurve::circle(1.0), 0.0, 2e-3));
  }
}

TEST_CASE("curve extrema") {
  SUBCASE("unit circle") {
    const auto e = curve_extrema(ClosedCurve::circle(1.0), 512);
    CHECK(e.min_gprime == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(e.max_gprime == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(e.max_kappa == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(e.max_kappa_over_gprime == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("radius scaling") {
    const auto e = curve_extrema(ClosedCurve::circle(3.0), 512);
    CHECK(e.max_kappa_over_gprime == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("ellipse peak curvature sits at the apices") {
    // Dense grid oracle: max kappa_arc = a / b^2 = 4 at s = 0, 1/2.
    const ClosedCurve ell = ClosedCurve::ellipse(1.0, 0.5);
    double dense = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const FrenetData fr = evaluate_frame(ell, static_cast<double>(i) / n);
      dense = std::max(dense, fr.kappa / fr.gprime_norm);
    }
    const auto e = curve_extrema(ell, 2048);
    CHECK(e.max_kappa_over_gprime == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(e.max_kappa_over_gprime >= dense - 1e-12);
  }
}

TEST_CASE("validation flags degenerate curves") {
  SUBCASE("presets are closed, regular, curved") {
    for (const ClosedCurve& c :
         {ClosedCurve::circle(1.0), ClosedCurve::ellipse(1.0, 0.5),
          ClosedCurve::torus_knot(2, 3, 2.0, 0.5)}) {
      const auto v = c.validate();
      CHECK(v.ok());
    }
  }
  SUBCASE("a straight segment traced back and forth fails") {
    // fourier with a single cos harmonic: g = (cos 2 pi s, 0, 0).
    const ClosedCurve seg = ClosedCurve::fourier({0, 0, 0}, {{1, 0, 0}}, {});
    const auto v = seg.validate();
    CHECK(v.closed());
    CHECK_FALSE(v.regular());
    CHECK_FALSE(v.curvature_ok());
    CHECK_THROWS_AS(evaluate_frame(seg, 0.1), CurvatureVanishes);
  }
  SUBCASE("fourier ellipse matches the ellipse preset") {
    const ClosedCurve f = ClosedCurve::fourier({0, 0, 0}, {{1, 0, 0}}, {{0, 0.5, 0}});
    CHECK(f.validate().ok());
    CHECK(distance(f.position(0.3), ClosedCurve::ellipse(1.0, 0.5).position(0.3)) <= 1e-15);
  }
}
