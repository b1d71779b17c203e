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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thin_inductor/montecarlo.hpp"
#include "thin_inductor/quadrature.hpp"
#include "thin_inductor/singular_field.hpp"

namespace thin_inductor {

/// The constant term of the tube energy expansion, split the way it is derived:
///   L' = term_log + term_phi + term_tau + term_tail,
///   term_log  = (l_gamma / 2pi) ln(delta/2)
///   term_phi  = (1/4pi^2) int a_0 xi theta^2 phi'^2
///   term_tau  = (1/4pi^2) int (delta^2 xi tau^2 / a_0) phi^2
///   term_tail = (l_gamma / 2pi) int_{1/2}^{1} phi^2 / xi dxi.
struct LPrimeBreakdown {
  double term_log = 0.0;
  double term_phi = 0.0;
  double term_tau = 0.0;
  double term_tail = 0.0;
  double arc_length = 0.0;
  double quad_error = 0.0;
  double total() const { return term_log + term_phi + term_tau + term_tail; }
};

QuadratureSpec default_l_prime_quadrature();

/// Throws ToleranceNotReached when the quadrature error estimate exceeds
/// target_rel_tol (default 1e-8) relative to the total.
LPrimeBreakdown compute_l_prime(const SingularField& field,
                                const QuadratureSpec& quad = default_l_prime_quadrature());

struct ExpansionInputs {
  double log_coeff = 0.0;  // l_gamma / 2pi
  double l_prime = 0.0;
  std::optional<double> correction;
  double delta = 0.0;
};

/// -(l_gamma/2pi) ln(eps) + L' [+ correction]. Requires 0 < eps <= delta/2.
double asymptotic_total(const ExpansionInputs& inputs, double eps);

enum class EnergyMethod { Parametric, CartesianMc };

struct EnergyResult {
  double value = 0.0;
  double error = 0.0;  // quadrature estimate or MC standard error
};

QuadratureSpec default_energy_quadrature(double eps_over_delta);

/// Energy of the singular field over the shell eps < r < delta:
/// parametric tensor quadrature in tube coordinates (xi graded toward
/// eps/delta), or ambient-space Monte Carlo with rejection sampling through
/// the tube inversion. Two independent paths through the geometry.
EnergyResult direct_singular_energy(const SingularField& field, double eps, EnergyMethod method,
                                    const QuadratureSpec& quad, const McSpec& mc = {});

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least squares of L against ln(1/eps). Throws DegenerateFit when fewer than
/// two distinct eps values are given.
FitResult fit_log_slope(const std::vector<std::pair<double, double>>& points);

struct SweepRow {
  double eps = 0.0;
  double asymptotic = 0.0;
  std::optional<double> oracle;
  std::optional<double> residual;
  std::optional<double> oracle_stderr;
};

struct InductanceExpansion {
  double log_coeff = 0.0;
  LPrimeBreakdown breakdown;
  std::optional<double> correction;
  std::string correction_method;
  std::vector<SweepRow> table;
  std::optional<FitResult> fit;

  double l_prime() const { return breakdown.total(); }
  /// log_coeff > 0 and, when a fit is present, |slope - log_coeff| <= fit_tol.
  bool consistent(double fit_tol) const;
};

/// Default sweep: eps_k = delta / 2^{k+1}, k = 0..count-1.
std::vector<double> default_eps_sweep(double delta, int count);

}  // namespace thin_inductor
