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

#include <string>
#include <vector>

#include "thin_inductor/config.hpp"

namespace thin_inductor {

struct RunReport {
  int exit_code = 0;  // 0 success, 3 when a stage failed
  std::string report_json;
  std::vector<std::string> artifacts;  // paths written, report.json included
};

/// Run all enabled stages, write report.json plus per-stage artifacts into
/// cfg.output_dir. Throws ConfigInvalid for unrunnable configurations (exit 2
/// at the command line); stage failures are recorded in the report and lead to
/// exit code 3 with the report still written. Deterministic for a fixed
/// (config, seed) pair, independent of the worker count.
RunReport run(const RunConfig& cfg);

/// Number formatting shared by the CSV artifacts: shortest-of-17-significant
/// digits, locale-independent.
std::string format_number(double v);

}  // namespace thin_inductor
