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

#include <stdexcept>
#include <string>

namespace thin_inductor {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurvatureVanishes : Error {
  using Error::Error;
};
struct ToleranceNotReached : Error {
  using Error::Error;
};
struct EpsilonOutOfRange : Error {
  using Error::Error;
};
struct NonPositiveMetric : Error {
  using Error::Error;
};
struct TubeInvalid : Error {
  using Error::Error;
};
struct AmbiguousProjection : Error {
  using Error::Error;
};
struct OnCutSurface : Error {
  using Error::Error;
};
struct AxisSingularity : Error {
  using Error::Error;
};
struct OffsetSelfIntersects : Error {
  using Error::Error;
};
struct MeshBoundaryMismatch : Error {
  using Error::Error;
};
struct TooCloseToSurface : Error {
  using Error::Error;
};
struct OffsetUnstable : Error {
  using Error::Error;
};
struct DegenerateFit : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};

}  // namespace thin_inductor
