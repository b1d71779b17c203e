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

#include <cstddef>
#include <functional>

namespace thin_inductor {

/// 0 means auto (hardware concurrency). Worker count never changes results:
/// callers write into per-index slots and reduce in fixed order.
void set_max_workers(int n);
int max_workers();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace thin_inductor
