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

#include "thin_inductor/cutoff.hpp"

namespace thin_inductor {

CutoffValues CutoffProfile::eval(double xi) const {
  if (xi <= 0.5) return {1.0, 0.0, 0.0};
  if (xi >= 0.75) return {0.0, 0.0, 0.0};
  const double u = (xi - 0.5) * 4.0;  // transition variable on (0, 1)
  double s, s1, s2;
  if (kind_ == Kind::Quintic) {
    s = ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
    s1 = ((30.0 * u - 60.0) * u + 30.0) * u * u;
    s2 = ((120.0 * u - 180.0) * u + 60.0) * u;
  } else {
    s = (((-20.0 * u + 70.0) * u - 84.0) * u + 35.0) * u * u * u * u;
    s1 = (((-140.0 * u + 420.0) * u - 420.0) * u + 140.0) * u * u * u;
    s2 = (((-840.0 * u + 2100.0) * u - 1680.0) * u + 420.0) * u * u;
  }
  // d/dxi = 4 d/du
  return {1.0 - s, -4.0 * s1, -16.0 * s2};
}

}  // namespace thin_inductor
