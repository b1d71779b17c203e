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

#include "thin_inductor/errors.hpp"
#include "thin_inductor/montecarlo.hpp"
#include "thin_inductor/quadrature.hpp"
#include "thin_inductor/rng.hpp"
#include "thin_inductor/tube.hpp"

using namespace thin_inductor;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double a) { return a - std::floor(a); }
}  // namespace

TEST_CASE("auto delta from the curvature bound") {
  SUBCASE("unit circle, eta 0.5") {
    const auto tube = TubeGeometry::with_auto_delta(ClosedCurve::circle(1.0), 0.5);
    CHECK(tube.delta() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tube.validity().margin >= 0.05);
  }
  SUBCASE("radius scaling") {
    const auto tube = TubeGeometry::with_auto_delta(ClosedCurve::circle(2.0), 0.4);
    CHECK(tube.delta() == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("ellipse: half the minimal radius of curvature") {
    const auto tube = TubeGeometry::with_auto_delta(ClosedCurve::ellipse(1.0, 0.5), 0.5);
    CHECK(tube.delta() == doctest::Approx(0.5 * 0.25).epsilon(1e-9));
  }
  SUBCASE("margin below 5% is rejected") {
    CHECK_THROWS_AS(TubeGeometry::with_auto_delta(ClosedCurve::circle(1.0), 0.99), TubeInvalid);
    CHECK_THROWS_AS(TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.96), TubeInvalid);
  }
}

TEST_CASE("map_F on the circle tube") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  SUBCASE("inner boundary point") {
    const Vec3 p = map_F(tube, 0.1, TubeCoords{0.0, 0.0, 0.0});
    CHECK((p - Vec3{0.9, 0.0, 0.0}).norm() <= 1e-14);
  }
  SUBCASE("axis at xi = 0, eps = 0") {
    for (double s : {0.0, 0.3, 0.77}) {
      const Vec3 p = map_F(tube, 0.0, TubeCoords{s, 0.0, 1.3});
      CHECK(distance(p, tube.curve().position(s)) <= 1e-14);
    }
  }
  SUBCASE("half radius along the binormal") {
    const Vec3 p = map_F(tube, 0.0, TubeCoords{0.0, 0.5, std::numbers::pi / 2});
    CHECK((p - Vec3{1.0, 0.0, 0.2}).norm() <= 1e-14);
  }
  SUBCASE("eps above delta/2 is out of range") {
    CHECK_THROWS_AS(map_F(tube, 0.21, TubeCoords{0, 0, 0}), EpsilonOutOfRange);
  }
}

TEST_CASE("a_factor values and finite-difference oracle") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  SUBCASE("arithmetic on the circle") {
    CHECK(a_factor(tube, 0.0, TubeCoords{0.2, 0.5, std::numbers::pi}) ==
          doctest::Approx(kTwoPi * 1.2).epsilon(1e-13));
    CHECK(a_factor(tube, 0.0, TubeCoords{0.6, 0.37, std::numbers::pi / 2}) ==
          doctest::Approx(kTwoPi).epsilon(1e-13));
  }
  SUBCASE("a_eps equals t . dF/ds on the torus knot") {
    const auto ktube = TubeGeometry::with_auto_delta(ClosedCurve::torus_knot(2, 3, 2.0, 0.5), 0.5);
    const CounterRng rng{3};
    for (int i = 0; i < 5; ++i) {
      const TubeCoords c{rng.uniform01(3 * i), rng.uniform01(3 * i + 1),
                         kTwoPi * rng.uniform01(3 * i + 2)};
      const double eps = 0.25 * ktube.delta();
      const double h = 1e-6;
      const Vec3 dFds =
          (map_F(ktube, eps, TubeCoords{c.s + h, c.xi, c.theta}) -
           map_F(ktube, eps, TubeCoords{c.s - h, c.xi, c.theta})) /
          (2 * h);
      const FrenetData fr = evaluate_frame(ktube.curve(), c.s);
      CHECK(std::abs(dot(dFds, fr.t) - a_factor(ktube, eps, c)) <= 1e-6);
    }
  }
}

TEST_CASE("jacobian_F against a finite-difference determinant") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  SUBCASE("arithmetic") {
    CHECK(jacobian_F(tube, 0.1, TubeCoords{0.0, 0.0, 0.0}) ==
          doctest::Approx(0.3 * (kTwoPi * 0.9) * 0.1).epsilon(1e-13));
    CHECK(jacobian_F(tube, 0.0, TubeCoords{0.3, 0.0, 1.0}) == 0.0);
  }
  SUBCASE("random samples on the knot tube, rel 1e-6") {
    const auto ktube = TubeGeometry::with_auto_delta(ClosedCurve::torus_knot(2, 3, 2.0, 0.5), 0.5);
    const CounterRng rng{11};
    for (int i = 0; i < 5; ++i) {
      const TubeCoords c{rng.uniform01(3 * i), 0.1 + 0.8 * rng.uniform01(3 * i + 1),
                         kTwoPi * rng.uniform01(3 * i + 2)};
      const double eps = 0.3 * ktube.delta();
      const double h = 1e-6;
      Vec3 cols[3];
      const auto at = [&](double ds, double dxi, double dth) {
        return map_F(ktube, eps, TubeCoords{c.s + ds, c.xi + dxi, c.theta + dth});
      };
      cols[0] = (at(h, 0, 0) - at(-h, 0, 0)) / (2 * h);
      cols[1] = (at(0, h, 0) - at(0, -h, 0)) / (2 * h);
      cols[2] = (at(0, 0, h) - at(0, 0, -h)) / (2 * h);
      const double det = dot(cols[0], cross(cols[1], cols[2]));
      const double jac = jacobian_F(ktube, eps, c);
      CHECK(std::abs(std::abs(det) - jac) <= 1e-6 * jac);
    }
  }
}

TEST_CASE("boundary map and surface measure") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  SUBCASE("G equals F at xi = 0") {
    for (double s : {0.1, 0.6}) {
      for (double th : {0.5, 4.0}) {
        CHECK(distance(map_G(tube, 0.1, s, th), map_F(tube, 0.1, TubeCoords{s, 0.0, th})) == 0.0);
      }
    }
  }
  SUBCASE("measure at theta = pi/2") {
    CHECK(surface_measure(tube, 0.1, 0.3, std::numbers::pi / 2) ==
          doctest::Approx(0.1 * kTwoPi).epsilon(1e-13));
  }
  SUBCASE("total area equals the torus area 4 pi^2 R eps") {
    const double eps = 0.1;
    QuadratureSpec spec;
    spec.axis[0] = AxisSpec{12, 4, Grading::Uniform, 2.0};
    spec.axis[1] = AxisSpec{12, 4, Grading::Uniform, 2.0};
    const double lo[2] = {0.0, 0.0}, hi[2] = {1.0, kTwoPi};
    const auto measure = integrate_box(
        [&](const double* x) { return surface_measure(tube, eps, x[0], x[1]); }, lo, hi, spec, 2);
    CHECK(measure.value == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi * eps)
                               .epsilon(1e-12));
    // Same area from the finite-difference surface element of G.
    const auto fd_element = [&](const double* x) {
      const double h = 1e-6;
      const Vec3 dGs = (map_G(tube, eps, x[0] + h, x[1]) - map_G(tube, eps, x[0] - h, x[1])) / (2 * h);
      const Vec3 dGt = (map_G(tube, eps, x[0], x[1] + h) - map_G(tube, eps, x[0], x[1] - h)) / (2 * h);
      return cross(dGs, dGt).norm();
    };
    const auto fd_area = integrate_box(fd_element, lo, hi, spec, 2);
    CHECK(fd_area.value == doctest::Approx(measure.value).epsilon(1e-8));
  }
  SUBCASE("eps = 0 has no boundary") {
    CHECK_THROWS_AS(map_G(tube, 0.0, 0.0, 0.0), EpsilonOutOfRange);
    CHECK_THROWS_AS(surface_measure(tube, 0.0, 0.0, 0.0), EpsilonOutOfRange);
  }
}

TEST_CASE("boundary normal direction and orthogonality") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  CHECK((boundary_normal(tube, 0.1, 0.0, 0.0) - Vec3{1, 0, 0}).norm() <= 1e-14);
  const FrenetData fr = evaluate_frame(tube.curve(), 0.25);
  CHECK((boundary_normal(tube, 0.1, 0.25, std::numbers::pi) - fr.nu).norm() <= 1e-14);

  const auto ktube = TubeGeometry::with_auto_delta(ClosedCurve::torus_knot(2, 3, 2.0, 0.5), 0.5);
  const CounterRng rng{23};
  for (int i = 0; i < 8; ++i) {
    const double s = rng.uniform01(2 * i);
    const double th = kTwoPi * rng.uniform01(2 * i + 1);
    const double eps = 0.2 * ktube.delta();
    const double h = 1e-6;
    const Vec3 n = boundary_normal(ktube, eps, s, th);
    const Vec3 dGs = (map_G(ktube, eps, s + h, th) - map_G(ktube, eps, s - h, th)) / (2 * h);
    const Vec3 dGt = (map_G(ktube, eps, s, th + h) - map_G(ktube, eps, s, th - h)) / (2 * h);
    CHECK(std::abs(dot(n, dGs)) <= 1e-9 * dGs.norm());
    CHECK(std::abs(dot(n, dGt)) <= 1e-9 * std::max(1.0, dGt.norm()));
  }
}

TEST_CASE("invert_F round-trips random coordinates") {
  // The knot tube uses a small eta: the curvature bound alone does not keep
  // delta below half the distance between passing strands, and inversion is
  // only single-valued while it does.
  for (const auto& tube :
       {TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4),
        TubeGeometry::with_auto_delta(ClosedCurve::torus_knot(2, 3, 2.0, 0.5), 0.25)}) {
    const CounterRng rng{77};
    for (int i = 0; i < 1000; ++i) {
      const TubeCoords c{rng.uniform01(3 * i), rng.uniform01(3 * i + 1),
                         kTwoPi * rng.uniform01(3 * i + 2)};
      const double eps = 0.25 * tube.delta();
      const Vec3 x = map_F(tube, eps, c);
      const auto back = invert_F(tube, eps, x);
      REQUIRE(back.has_value());
      CHECK(distance(map_F(tube, eps, *back), x) <= 1e-10 * tube.delta());
      CHECK(std::abs(wrap_unit(back->s - c.s + 0.5) - 0.5) <= 1e-8);
      CHECK(std::abs(back->xi - c.xi) <= 1e-8);
    }
  }
}

TEST_CASE("points off the shell are Outside") {
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  SUBCASE("center of the hole") {
    CHECK_FALSE(invert_F(tube, 0.1, Vec3{0, 0, 0}).has_value());
  }
  SUBCASE("inside the inner radius") {
    CHECK_FALSE(invert_F(tube, 0.1, Vec3{1.0 + 0.05, 0, 0}).has_value());
  }
  SUBCASE("distance above delta, verified against a dense grid") {
    const CounterRng rng{31};
    int outside_checked = 0;
    for (int i = 0; outside_checked < 20 && i < 200; ++i) {
      const Vec3 x{3.0 * rng.uniform01(3 * i) - 1.5, 3.0 * rng.uniform01(3 * i + 1) - 1.5,
                   1.2 * rng.uniform01(3 * i + 2) - 0.6};
      double dmin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < 20000; ++j) {
        dmin = std::min(dmin, distance(x, tube.curve().position(j / 20000.0)));
      }
      if (dmin <= tube.delta() * 1.001) continue;
      ++outside_checked;
      CHECK_FALSE(invert_F(tube, 0.0, x).has_value());
    }
    CHECK(outside_checked >= 10);
  }
}

TEST_CASE("near-tie projections raise AmbiguousProjection") {
  // A knot with strands passing close together: the midpoint between the two
  // nearest strand points projects ambiguously once delta exceeds half the
  // strand gap.
  const ClosedCurve knot = ClosedCurve::torus_knot(2, 3, 1.0, 0.3);
  double best_gap = std::numeric_limits<double>::infinity();
  double s1_best = 0, s2_best = 0;
  const int n = 800;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s1 = static_cast<double>(i) / n, s2 = static_cast<double>(j) / n;
      const double ds = std::abs(s1 - s2);
      if (std::min(ds, 1.0 - ds) < 0.15) continue;  // exclude the near-diagonal
      const double d = distance(knot.position(s1), knot.position(s2));
      if (d < best_gap) {
        best_gap = d;
        s1_best = s1;
        s2_best = s2;
      }
    }
  }
  const auto tube = TubeGeometry::with_auto_delta(knot, 0.9);
  REQUIRE(tube.delta() > 0.5 * best_gap);  // tube reaches past the midline
  const Vec3 mid = 0.5 * (knot.position(s1_best) + knot.position(s2_best));
  CHECK_THROWS_AS(invert_F(tube, 0.0, mid), AmbiguousProjection);
}

TEST_CASE("parametric gradient identity matches ambient Monte Carlo") {
  // Smooth u, v with analytic ambient gradients; the parametric quadrature of
  // the curvilinear gradient-product identity must agree with rejection-sampled
  // Monte Carlo of grad u . grad v over the shell.
  const auto tube = TubeGeometry::with_delta(ClosedCurve::circle(1.0), 0.4);
  const double eps = 0.1, delta = 0.4;
  const auto u = [](const Vec3& p) { return std::sin(p.x + 0.7 * p.z) + p.y * p.y; };
  const auto grad_u = [](const Vec3& p) {
    return Vec3{std::cos(p.x + 0.7 * p.z), 2.0 * p.y, 0.7 * std::cos(p.x + 0.7 * p.z)};
  };
  const auto v = [](const Vec3& p) { return std::cos(0.5 * p.x) * p.y + 0.3 * p.z * p.z; };
  const auto grad_v_fn = [](const Vec3& p) {
    return Vec3{-0.5 * std::sin(0.5 * p.x) * p.y, std::cos(0.5 * p.x), 0.6 * p.z};
  };

  // Right-hand side in tube coordinates, with the partials of u o F_eps and
  // v o F_eps taken by central differences (independent of the frame algebra).
  const auto rhs = [&](double s, double xi, double th) {
    const double h = 1e-6;
    const auto uhat = [&](double a, double b, double cc) {
      return u(map_F(tube, eps, TubeCoords{a, b, cc}));
    };
    const auto vhat = [&](double a, double b, double cc) {
      return v(map_F(tube, eps, TubeCoords{a, b, cc}));
    };
    const double us = (uhat(s + h, xi, th) - uhat(s - h, xi, th)) / (2 * h);
    const double ux = (uhat(s, xi + h, th) - uhat(s, xi - h, th)) / (2 * h);
    const double ut = (uhat(s, xi, th + h) - uhat(s, xi, th - h)) / (2 * h);
    const double vs = (vhat(s + h, xi, th) - vhat(s - h, xi, th)) / (2 * h);
    const double vx = (vhat(s, xi + h, th) - vhat(s, xi - h, th)) / (2 * h);
    const double vt = (vhat(s, xi, th + h) - vhat(s, xi, th - h)) / (2 * h);
    const FrenetData fr = evaluate_frame(tube.curve(), s);
    const double r = (delta - eps) * xi + eps;
    const double a = fr.gprime_norm - r * fr.kappa * std::cos(th);
    const double tau = fr.tau;
    return (delta - eps) *
           (r / a * us * vs + r * a / ((delta - eps) * (delta - eps)) * ux * vx +
            (a / r + tau * tau * r / a) * ut * vt - r * tau / a * (us * vt + ut * vs));
  };
  QuadratureSpec spec;
  spec.axis[0] = AxisSpec{10, 4, Grading::Uniform, 2.0};
  spec.axis[1] = AxisSpec{10, 4, Grading::Uniform, 2.0};
  spec.axis[2] = AxisSpec{10, 4, Grading::Uniform, 2.0};
  const auto parametric = integrate_3d(rhs, {0.0, 0.0, 0.0}, {1.0, 1.0, kTwoPi}, spec);

  McSpec mc;
  mc.samples = 400000;
  mc.seed = 2024;
  const auto fn = [&](const Vec3& x) {
    const auto c = invert_F(tube, eps, x);
    if (!c || c->xi >= 1.0) return 0.0;
    return dot(grad_u(x), grad_v_fn(x));
  };
  const BoxSampler box{{-1.45, -1.45, -0.45}, {1.45, 1.45, 0.45}};
  const auto sampled = mc_integrate_region(fn, box, mc);
  CHECK(std::abs(parametric.value - sampled.value) <= 3.0 * sampled.std_error);
}
