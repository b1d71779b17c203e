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

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "thin_inductor/config.hpp"
#include "thin_inductor/errors.hpp"
#include "thin_inductor/runner.hpp"
#include "thin_inductor/version.hpp"

namespace {

int do_run(const std::string& config_path) {
  using namespace thin_inductor;
  try {
    const RunConfig cfg = parse_config_file(config_path);
    const RunReport report = run(cfg);
    std::printf("%s\n", report.exit_code == 0 ? "ok" : "stage failure (see report.json)");
    for (const auto& artifact : report.artifacts) std::printf("wrote %s\n", artifact.c_str());
    return report.exit_code;
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

int do_validate(const std::string& config_path) {
  using namespace thin_inductor;
  nlohmann::ordered_json out;
  try {
    const RunConfig cfg = parse_config_file(config_path);
    const ValidationReport report = validate_config(cfg);
    out["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : report.diagnostics) {
      out["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
    }
    if (report.ok()) {
      out["delta"] = report.delta;
      out["arc_length"] = report.arc_length;
    }
    std::printf("%s\n", out.dump(2).c_str());
    return report.ok() ? 0 : 2;
  } catch (const ConfigInvalid& e) {
    out["diagnostics"] = {{{"code", "config_invalid"}, {"message", e.what()}}};
    std::printf("%s\n", out.dump(2).c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-inductor: self-inductance asymptotics of thin tubular conductors"};
  app.set_version_flag("--version", std::string(thin_inductor::kVersion));

  std::string run_config, validate_config_path;
  CLI::App* cmd_run = app.add_subcommand("run", "run the configured stages and write artifacts");
  cmd_run->add_option("config", run_config, "JSON configuration file")->required();
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "check a configuration without computing");
  cmd_validate->add_option("config", validate_config_path, "JSON configuration file")->required();
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);
  if (cmd_run->parsed()) return do_run(run_config);
  return do_validate(validate_config_path);
}
