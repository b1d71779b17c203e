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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thin_inductor/curve.hpp"
#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

enum class Stage { LPrime, Sweep, Oracle, Corrections, Fit };

struct RunConfig {
  // curve
  CurvePreset preset = CurvePreset::Circle;
  double circle_r = 1.0;
  double ellipse_a = 1.0, ellipse_b = 0.5;
  int knot_p = 2, knot_q = 3;
  double knot_big_r = 2.0, knot_small_r = 0.5;
  Vec3 fourier_center;
  std::vector<Vec3> fourier_cos, fourier_sin;

  // tube radius
  bool delta_auto = true;
  double delta_eta = 0.5;
  double delta_value = 0.0;

  std::string cutoff = "quintic";  // quintic | septic

  std::vector<double> eps_list;  // empty means sweep
  int sweep_count = 5;

  // quadrature overrides (0 keeps the operation defaults)
  int quad_order = 0;
  int quad_panels = 0;
  double quad_rel_tol = 0.0;

  std::size_t mc_samples = 200000;
  std::optional<std::uint64_t> mc_seed;
  bool mc_report_variance = true;

  std::vector<Stage> stages{Stage::LPrime, Stage::Sweep, Stage::Oracle, Stage::Fit};
  std::string oracle_method = "parametric";  // parametric | cartesian_mc
  std::string output_dir = ".";
  int workers = 0;
  std::uint64_t seed = 20260809;
  double fit_tolerance = 0.05;

  bool has_stage(Stage s) const;
  ClosedCurve make_curve() const;
};

/// Strict JSON parse: unknown keys are errors (ConfigInvalid).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Fully resolved echo of the configuration, reproducible from the report.
std::string config_echo_json(const RunConfig& cfg);

struct Diagnostic {
  std::string code;
  std::string message;
};

/// Geometry and range checks without any heavy computation. Returns an empty
/// list when the configuration is runnable; echoes delta and the arc length.
struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  double delta = 0.0;
  double arc_length = 0.0;
  bool ok() const { return diagnostics.empty(); }
};
ValidationReport validate_config(const RunConfig& cfg);

}  // namespace thin_inductor
