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

#include <string_view>

namespace thin_inductor {

struct CutoffValues {
  double phi = 0.0;
  double dphi = 0.0;
  double d2phi = 0.0;
};

/// C^2 radial profile: identically 1 on [0, 1/2], identically 0 on [3/4, inf),
/// smoothstep transition in between. Quintic is the default; septic is a C^3
/// alternative used to confirm profile-independence of the log slope.
class CutoffProfile {
 public:
  enum class Kind { Quintic, Septic };

  static CutoffProfile quintic() { return CutoffProfile(Kind::Quintic); }
  static CutoffProfile septic() { return CutoffProfile(Kind::Septic); }

  CutoffValues eval(double xi) const;
  Kind kind() const { return kind_; }
  std::string_view name() const { return kind_ == Kind::Quintic ? "quintic" : "septic"; }

 private:
  explicit CutoffProfile(Kind k) : kind_(k) {}
  Kind kind_;
};

inline CutoffValues phi_hat(const CutoffProfile& cutoff, double xi) { return cutoff.eval(xi); }

}  // namespace thin_inductor
