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

#include "thin_inductor/runner.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "thin_inductor/asymptotics.hpp"
#include "thin_inductor/errors.hpp"
#include "thin_inductor/parallel.hpp"
#include "thin_inductor/potentials.hpp"
#include "thin_inductor/version.hpp"

namespace thin_inductor {

using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

class StageClock {
 public:
  StageClock() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::string>& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  artifacts.push_back(path.string());
}

QuadratureSpec apply_overrides(QuadratureSpec q, const RunConfig& cfg) {
  for (auto& axis : q.axis) {
    if (cfg.quad_order > 0) axis.order = cfg.quad_order;
    if (cfg.quad_panels > 0) axis.panels = std::max(axis.panels, cfg.quad_panels);
  }
  if (cfg.quad_rel_tol > 0.0) q.target_rel_tol = cfg.quad_rel_tol;
  return q;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  RunReport out;

  int workers = cfg.workers;
  if (const char* env = std::getenv("THIN_INDUCTOR_WORKERS")) {
    workers = std::atoi(env);
  }
  set_max_workers(workers);

  const ValidationReport validation = validate_config(cfg);
  if (!validation.ok()) {
    std::string msg = "configuration invalid:";
    for (const auto& d : validation.diagnostics) msg += " [" + d.code + "] " + d.message;
    throw ConfigInvalid(msg);
  }

  const std::filesystem::path outdir(cfg.output_dir);
  std::filesystem::create_directories(outdir);

  ordered_json report;
  report["version"] = kVersion;
  report["config"] = ordered_json::parse(config_echo_json(cfg));
  report["delta"] = validation.delta;
  report["arc_length"] = validation.arc_length;
  ordered_json stages_json = ordered_json::object();
  ordered_json timings = ordered_json::object();
  ordered_json errors = ordered_json::array();

  const ClosedCurve curve = cfg.make_curve();
  const TubeGeometry tube = TubeGeometry::with_delta(curve, validation.delta);
  const CutoffProfile cutoff =
      cfg.cutoff == "septic" ? CutoffProfile::septic() : CutoffProfile::quintic();
  const SingularField field(tube, cutoff);
  const double log_coeff = validation.arc_length / (2.0 * std::numbers::pi);

  bool any_stage_failed = false;
  const auto run_stage = [&](Stage stage, const std::string& name, auto&& body) {
    if (!cfg.has_stage(stage)) return;
    StageClock clock;
    try {
      body();
    } catch (const std::exception& e) {
      any_stage_failed = true;
      errors.push_back({{"stage", name}, {"error", e.what()}});
      stages_json[name]["failed"] = true;
      stages_json[name]["error"] = e.what();
    }
    timings[name + "_ms"] = clock.ms();
  };

  // L' is needed by the sweep's asymptotic column even when its stage is off.
  std::optional<LPrimeBreakdown> lprime;
  const auto ensure_lprime = [&]() {
    if (!lprime) lprime = compute_l_prime(field, apply_overrides(default_l_prime_quadrature(), cfg));
    return *lprime;
  };

  run_stage(Stage::LPrime, "lprime", [&] {
    const LPrimeBreakdown b = ensure_lprime();
    ordered_json j{{"term_log", b.term_log},   {"term_phi", b.term_phi},
                   {"term_tau", b.term_tau},   {"term_tail", b.term_tail},
                   {"total", b.total()},       {"arc_length", b.arc_length},
                   {"quad_error", b.quad_error}};
    stages_json["lprime"] = j;
    write_file(outdir / "lprime.json", j.dump(2) + "\n", out.artifacts);
  });

  std::optional<CorrectionResult> corrections;
  run_stage(Stage::Corrections, "corrections", [&] {
    const CutSurface surface = CutSurface::build(field);
    corrections = correction_terms(field, surface);
    ordered_json j{{"volume_term", corrections->volume_term},
                   {"surface_term", corrections->surface_term},
                   {"total", corrections->total()},
                   {"offset_h", corrections->offset_h},
                   {"max_offset_disagreement", corrections->max_offset_disagreement},
                   {"sigma_prime_refinement_delta", corrections->sigma_prime_refinement_delta},
                   {"quad_error", corrections->quad_error},
                   {"axisymmetric", corrections->axisymmetric}};
    stages_json["corrections"] = j;
    write_file(outdir / "corrections.json", j.dump(2) + "\n", out.artifacts);
  });

  std::vector<SweepRow> rows;
  run_stage(Stage::Sweep, "sweep", [&] {
    std::vector<double> eps_values = cfg.eps_list;
    if (eps_values.empty()) eps_values = default_eps_sweep(validation.delta, cfg.sweep_count);
    ExpansionInputs inputs{log_coeff, ensure_lprime().total(),
                           corrections ? std::optional<double>(corrections->total()) : std::nullopt,
                           validation.delta};
    for (double eps : eps_values) {
      SweepRow row;
      row.eps = eps;
      row.asymptotic = asymptotic_total(inputs, eps);
      rows.push_back(row);
    }

    if (cfg.has_stage(Stage::Oracle)) {
      const EnergyMethod method = cfg.oracle_method == "cartesian_mc" ? EnergyMethod::CartesianMc
                                                                      : EnergyMethod::Parametric;
      McSpec mc;
      mc.samples = cfg.mc_samples;
      mc.seed = cfg.mc_seed.value_or(cfg.seed);
      mc.report_variance = cfg.mc_report_variance;
      for (SweepRow& row : rows) {
        const QuadratureSpec quad =
            apply_overrides(default_energy_quadrature(row.eps / validation.delta), cfg);
        const EnergyResult oracle = direct_singular_energy(field, row.eps, method, quad, mc);
        row.oracle = oracle.value;
        row.residual = oracle.value - row.asymptotic;
        row.oracle_stderr = oracle.error;
      }
    }

    std::string csv = "eps,asymptotic,oracle,residual,oracle_stderr\n";
    for (const SweepRow& row : rows) {
      csv += format_number(row.eps) + "," + format_number(row.asymptotic) + ",";
      csv += row.oracle ? format_number(*row.oracle) : std::string();
      csv += ",";
      csv += row.residual ? format_number(*row.residual) : std::string();
      csv += ",";
      csv += row.oracle_stderr ? format_number(*row.oracle_stderr) : std::string();
      csv += "\n";
    }
    write_file(outdir / "sweep.csv", csv, out.artifacts);

    ordered_json sweep_json = ordered_json::array();
    for (const SweepRow& row : rows) {
      ordered_json r{{"eps", row.eps}, {"asymptotic", row.asymptotic}};
      if (row.oracle) r["oracle"] = *row.oracle;
      if (row.residual) r["residual"] = *row.residual;
      if (row.oracle_stderr) r["oracle_stderr"] = *row.oracle_stderr;
      sweep_json.push_back(r);
    }
    stages_json["sweep"] = {{"rows", sweep_json},
                            {"log_coeff", log_coeff},
                            {"oracle_enabled", cfg.has_stage(Stage::Oracle)}};
  });

  run_stage(Stage::Fit, "fit", [&] {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& row : rows) {
      if (row.oracle) pts.emplace_back(row.eps, *row.oracle);
    }
    if (pts.size() < 2) {
      throw Error("fit stage needs sweep+oracle results (enable stages sweep and oracle)");
    }
    const FitResult fit = fit_log_slope(pts);
    stages_json["fit"] = {{"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"max_residual", fit.max_residual},
                          {"log_coeff", log_coeff},
                          {"slope_matches_log_coeff",
                           std::abs(fit.slope - log_coeff) <= cfg.fit_tolerance}};
  });

  report["stages"] = stages_json;
  report["timings"] = timings;
  report["errors"] = errors;
  report["workers"] = max_workers();
  out.exit_code = any_stage_failed ? 3 : 0;
  report["exit_code"] = out.exit_code;

  out.report_json = report.dump(2) + "\n";
  write_file(outdir / "report.json", out.report_json, out.artifacts);
  return out;
}

}  // namespace thin_inductor
