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

#include "thin_inductor/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thin_inductor/errors.hpp"
#include "thin_inductor/tube.hpp"

namespace thin_inductor {

using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key)) {
      throw ConfigInvalid("unknown key '" + key + "' in " + where);
    }
  }
}

Vec3 parse_vec3(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigInvalid(where + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Stage parse_stage(const std::string& name) {
  if (name == "lprime") return Stage::LPrime;
  if (name == "sweep") return Stage::Sweep;
  if (name == "oracle") return Stage::Oracle;
  if (name == "corrections") return Stage::Corrections;
  if (name == "fit") return Stage::Fit;
  throw ConfigInvalid("unknown stage '" + name + "'");
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::LPrime: return "lprime";
    case Stage::Sweep: return "sweep";
    case Stage::Oracle: return "oracle";
    case Stage::Corrections: return "corrections";
    case Stage::Fit: return "fit";
  }
  return "?";
}

}  // namespace

bool RunConfig::has_stage(Stage s) const {
  return std::find(stages.begin(), stages.end(), s) != stages.end();
}

ClosedCurve RunConfig::make_curve() const {
  switch (preset) {
    case CurvePreset::Circle: return ClosedCurve::circle(circle_r);
    case CurvePreset::Ellipse: return ClosedCurve::ellipse(ellipse_a, ellipse_b);
    case CurvePreset::TorusKnot:
      return ClosedCurve::torus_knot(knot_p, knot_q, knot_big_r, knot_small_r);
    case CurvePreset::Fourier: return ClosedCurve::fourier(fourier_center, fourier_cos, fourier_sin);
  }
  throw ConfigInvalid("unknown curve preset");
}

RunConfig parse_config_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config root must be an object");
  reject_unknown_keys(j,
                      {"curve", "delta", "cutoff", "eps", "quadrature", "mc", "stages",
                       "oracle_method", "output_dir", "workers", "seed", "fit_tolerance"},
                      "config root");

  RunConfig cfg;
  if (!j.contains("curve")) throw ConfigInvalid("config requires a 'curve' object");
  {
    const auto& c = j["curve"];
    if (!c.is_object() || !c.contains("preset")) throw ConfigInvalid("curve requires 'preset'");
    const std::string preset = c["preset"].get<std::string>();
    if (preset == "circle") {
      reject_unknown_keys(c, {"preset", "R"}, "curve");
      cfg.preset = CurvePreset::Circle;
      if (c.contains("R")) cfg.circle_r = c["R"].get<double>();
    } else if (preset == "ellipse") {
      reject_unknown_keys(c, {"preset", "a", "b"}, "curve");
      cfg.preset = CurvePreset::Ellipse;
      if (c.contains("a")) cfg.ellipse_a = c["a"].get<double>();
      if (c.contains("b")) cfg.ellipse_b = c["b"].get<double>();
    } else if (preset == "torus_knot") {
      reject_unknown_keys(c, {"preset", "p", "q", "R", "r"}, "curve");
      cfg.preset = CurvePreset::TorusKnot;
      if (c.contains("p")) cfg.knot_p = c["p"].get<int>();
      if (c.contains("q")) cfg.knot_q = c["q"].get<int>();
      if (c.contains("R")) cfg.knot_big_r = c["R"].get<double>();
      if (c.contains("r")) cfg.knot_small_r = c["r"].get<double>();
    } else if (preset == "fourier") {
      reject_unknown_keys(c, {"preset", "center", "cos", "sin"}, "curve");
      cfg.preset = CurvePreset::Fourier;
      if (c.contains("center")) cfg.fourier_center = parse_vec3(c["center"], "curve.center");
      for (const char* key : {"cos", "sin"}) {
        if (!c.contains(key)) continue;
        auto& dst = std::string(key) == "cos" ? cfg.fourier_cos : cfg.fourier_sin;
        for (std::size_t i = 0; i < c[key].size(); ++i) {
          dst.push_back(parse_vec3(c[key][i], std::string("curve.") + key));
        }
      }
    } else {
      throw ConfigInvalid("unknown curve preset '" + preset + "'");
    }
  }

  if (j.contains("delta")) {
    const auto& d = j["delta"];
    reject_unknown_keys(d, {"mode", "eta", "value"}, "delta");
    const std::string mode = d.contains("mode") ? d["mode"].get<std::string>() : "auto";
    if (mode == "auto") {
      cfg.delta_auto = true;
      if (d.contains("eta")) cfg.delta_eta = d["eta"].get<double>();
      if (d.contains("value")) throw ConfigInvalid("delta.value not allowed in auto mode");
    } else if (mode == "explicit") {
      cfg.delta_auto = false;
      if (!d.contains("value")) throw ConfigInvalid("delta.value required in explicit mode");
      cfg.delta_value = d["value"].get<double>();
      if (d.contains("eta")) throw ConfigInvalid("delta.eta not allowed in explicit mode");
    } else {
      throw ConfigInvalid("delta.mode must be 'auto' or 'explicit'");
    }
  }

  if (j.contains("cutoff")) {
    cfg.cutoff = j["cutoff"].get<std::string>();
    if (cfg.cutoff != "quintic" && cfg.cutoff != "septic") {
      throw ConfigInvalid("cutoff must be 'quintic' or 'septic'");
    }
  }

  if (j.contains("eps")) {
    const auto& e = j["eps"];
    reject_unknown_keys(e, {"list", "sweep"}, "eps");
    if (e.contains("list") && e.contains("sweep")) {
      throw ConfigInvalid("eps: give either 'list' or 'sweep', not both");
    }
    if (e.contains("list")) {
      for (const auto& v : e["list"]) cfg.eps_list.push_back(v.get<double>());
      if (cfg.eps_list.empty()) throw ConfigInvalid("eps.list must not be empty");
    }
    if (e.contains("sweep")) {
      reject_unknown_keys(e["sweep"], {"count"}, "eps.sweep");
      if (e["sweep"].contains("count")) cfg.sweep_count = e["sweep"]["count"].get<int>();
      if (cfg.sweep_count < 1) throw ConfigInvalid("eps.sweep.count must be >= 1");
    }
  }

  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    reject_unknown_keys(q, {"order", "panels", "rel_tol"}, "quadrature");
    if (q.contains("order")) cfg.quad_order = q["order"].get<int>();
    if (q.contains("panels")) cfg.quad_panels = q["panels"].get<int>();
    if (q.contains("rel_tol")) cfg.quad_rel_tol = q["rel_tol"].get<double>();
  }

  if (j.contains("mc")) {
    const auto& m = j["mc"];
    reject_unknown_keys(m, {"samples", "seed", "report_variance"}, "mc");
    if (m.contains("samples")) cfg.mc_samples = m["samples"].get<std::size_t>();
    if (m.contains("seed")) cfg.mc_seed = m["seed"].get<std::uint64_t>();
    if (m.contains("report_variance")) cfg.mc_report_variance = m["report_variance"].get<bool>();
  }

  if (j.contains("stages")) {
    cfg.stages.clear();
    for (const auto& s : j["stages"]) cfg.stages.push_back(parse_stage(s.get<std::string>()));
    if (cfg.stages.empty()) throw ConfigInvalid("stages must enable at least one stage");
  }

  if (j.contains("oracle_method")) {
    cfg.oracle_method = j["oracle_method"].get<std::string>();
    if (cfg.oracle_method != "parametric" && cfg.oracle_method != "cartesian_mc") {
      throw ConfigInvalid("oracle_method must be 'parametric' or 'cartesian_mc'");
    }
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("fit_tolerance")) cfg.fit_tolerance = j["fit_tolerance"].get<double>();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_echo_json(const RunConfig& cfg) {
  ordered_json j;
  ordered_json curve;
  switch (cfg.preset) {
    case CurvePreset::Circle:
      curve = {{"preset", "circle"}, {"R", cfg.circle_r}};
      break;
    case CurvePreset::Ellipse:
      curve = {{"preset", "ellipse"}, {"a", cfg.ellipse_a}, {"b", cfg.ellipse_b}};
      break;
    case CurvePreset::TorusKnot:
      curve = {{"preset", "torus_knot"},
               {"p", cfg.knot_p},
               {"q", cfg.knot_q},
               {"R", cfg.knot_big_r},
               {"r", cfg.knot_small_r}};
      break;
    case CurvePreset::Fourier: {
      curve["preset"] = "fourier";
      curve["center"] = {cfg.fourier_center.x, cfg.fourier_center.y, cfg.fourier_center.z};
      for (const auto& v : cfg.fourier_cos) curve["cos"].push_back({v.x, v.y, v.z});
      for (const auto& v : cfg.fourier_sin) curve["sin"].push_back({v.x, v.y, v.z});
      break;
    }
  }
  j["curve"] = curve;
  if (cfg.delta_auto) {
    j["delta"] = {{"mode", "auto"}, {"eta", cfg.delta_eta}};
  } else {
    j["delta"] = {{"mode", "explicit"}, {"value", cfg.delta_value}};
  }
  j["cutoff"] = cfg.cutoff;
  if (!cfg.eps_list.empty()) {
    j["eps"] = {{"list", cfg.eps_list}};
  } else {
    j["eps"] = {{"sweep", {{"count", cfg.sweep_count}}}};
  }
  j["quadrature"] = {{"order", cfg.quad_order}, {"panels", cfg.quad_panels},
                     {"rel_tol", cfg.quad_rel_tol}};
  j["mc"] = {{"samples", cfg.mc_samples},
             {"seed", cfg.mc_seed.value_or(cfg.seed)},
             {"report_variance", cfg.mc_report_variance}};
  std::vector<std::string> stages;
  for (Stage s : cfg.stages) stages.push_back(stage_name(s));
  j["stages"] = stages;
  j["oracle_method"] = cfg.oracle_method;
  j["output_dir"] = cfg.output_dir;
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  j["fit_tolerance"] = cfg.fit_tolerance;
  return j.dump(2);
}

ValidationReport validate_config(const RunConfig& cfg) {
  ValidationReport report;
  ClosedCurve curve = cfg.make_curve();

  const auto v = curve.validate();
  if (!v.closed()) {
    report.diagnostics.push_back({"curve_not_closed", "g(0) != g(1) or g'(0) != g'(1)"});
  }
  if (!v.regular()) {
    report.diagnostics.push_back({"curve_regularity", "|g'| vanishes on the sample grid"});
  }
  if (!v.curvature_ok()) {
    report.diagnostics.push_back({"curvature_vanishes", "|g' x g''| vanishes on the sample grid"});
    return report;  // no frame, nothing else is well defined
  }

  double delta = cfg.delta_value;
  if (cfg.delta_auto) {
    if (!(cfg.delta_eta > 0.0) || cfg.delta_eta > 0.95) {
      report.diagnostics.push_back({"delta_eta_out_of_range", "delta.eta must be in (0, 0.95]"});
      return report;
    }
    const CurveExtrema e = curve_extrema(curve, 2048);
    delta = cfg.delta_eta / e.max_kappa_over_gprime;
  }
  try {
    (void)TubeGeometry::with_delta(curve, delta);
  } catch (const TubeInvalid& e) {
    report.diagnostics.push_back({"delta_invalid", e.what()});
    return report;
  }
  report.delta = delta;
  report.arc_length = arc_length(curve, 1e-10);

  for (double eps : cfg.eps_list) {
    if (!(eps > 0.0) || eps > 0.5 * delta) {
      std::ostringstream msg;
      msg << "eps = " << eps << " outside (0, delta/2] with delta = " << delta;
      report.diagnostics.push_back({"eps_out_of_range", msg.str()});
    }
  }
  if (cfg.has_stage(Stage::Corrections) && cfg.preset == CurvePreset::TorusKnot) {
    report.diagnostics.push_back(
        {"corrections_need_planar_curve", "corrections stage requires a planar curve preset"});
  }
  return report;
}

}  // namespace thin_inductor
