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

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "thin_inductor/singular_field.hpp"
#include "thin_inductor/vec3.hpp"

namespace thin_inductor {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Strict reader of the spanning-surface mesh format:
///   sigma_prime v=<nv> f=<nf>
///   x y z                (nv lines)
///   i j k                (nf lines, 0-based, counterclockwise from the +n side)
/// Any deviation is rejected.
TriMesh parse_sigma_prime_mesh(std::istream& in);
void write_sigma_prime_mesh(const TriMesh& mesh, std::ostream& out);

/// The cut Sigma = Sigma_0 u Sigma': the theta = 0 leaf of the tube carrying
/// dipole density 1 - phi(xi), plus a spanning surface of the inner boundary
/// curve g + delta nu carrying density 1. The unit normal n points to the
/// theta = 0+ side; jumps are taken as (theta = 2pi- side) - (theta = 0+ side),
/// matching the jump convention of the singular field.
class CutSurface {
 public:
  /// Planar curves only: Sigma' is the flat region bounded by the inward
  /// offset, triangulated in rings. Throws OffsetSelfIntersects when the
  /// offset curve is not simple, Error when the curve is not planar.
  static CutSurface build(const SingularField& field);
  /// General curves with a user-supplied spanning mesh. Boundary vertices must
  /// lie within 1e-6 delta of the offset curve (MeshBoundaryMismatch) and
  /// normals must match Sigma_0's orientation at the junction.
  static CutSurface build_with_mesh(const SingularField& field, TriMesh sigma_prime);

  const SingularField& field() const { return field_; }
  const TriMesh& sigma_prime() const { return mesh_; }
  bool planar() const { return planar_; }
  Vec3 plane_normal() const { return plane_normal_; }
  Vec3 region_centroid() const { return centroid_; }

  Vec3 sigma0_point(double s, double xi) const;
  /// Unit normal on Sigma_0: ((|g'| - delta xi kappa) b - delta xi tau t) normalized.
  Vec3 sigma0_normal(double s, double xi) const;
  /// Area element of Sigma_0 in (s, xi): delta sqrt((|g'|-delta xi kappa)^2 + (delta xi tau)^2).
  double sigma0_measure(double s, double xi) const;
  double density(double xi) const;  // 1 - phi(xi)

  Vec3 offset_point(double s) const;     // g + delta nu
  Vec3 offset_velocity(double s) const;  // (|g'| - delta kappa) t for planar curves

  /// Exact for planar surfaces; conservative sample-based estimate otherwise.
  double distance_to_surface(const Vec3& x) const;

  struct SourceNode {
    Vec3 y;
    Vec3 n;
    double weight;  // density * measure * quadrature weight
  };
  // Base-resolution source quadrature (refined locally near the target).
  const std::vector<SourceNode>& sigma0_nodes() const { return cache_sigma0_; }
  const std::vector<SourceNode>& tri_nodes() const { return cache_tri_; }
  const std::vector<std::array<double, 4>>& sigma0_panels() const { return sigma0_panels_; }

 private:
  explicit CutSurface(const SingularField& field);
  void build_source_cache();

  SingularField field_;
  TriMesh mesh_;
  bool planar_ = false;
  Vec3 plane_normal_;
  Vec3 centroid_;

  std::vector<SourceNode> cache_sigma0_;
  std::vector<SourceNode> cache_tri_;
  std::vector<std::array<double, 4>> sigma0_panels_;  // s0, s1, xi0, xi1
};

/// Double-layer potential with density (1 - phi):
///   w1(x) = (1/4pi) int (1 - phi(y)) n(y) . (y - x) / |y - x|^3 dsigma(y),
/// the sign for which w1(x - h n) - w1(x + h n) -> 1 - phi, i.e. the jump
/// matches the singular field's orientation. Throws TooCloseToSurface below
/// 0.02 delta.
double w1_value(const CutSurface& surface, const Vec3& x);

/// Kernel-differentiated gradient, defined off the surface (no distance guard;
/// accuracy degrades like the local panel resolution as x approaches Sigma).
Vec3 grad_w1(const CutSurface& surface, const Vec3& x);

/// w1 without the distance guard, for volume quadratures whose nodes approach
/// the cut; the adaptive source refinement keeps the value bounded and the
/// residual error integrable.
double w1_value_unchecked(const CutSurface& surface, const Vec3& x);

struct PotentialSpec {
  int base_s = 4;
  int base_xi = 2;   // per segment; segments split at the cutoff seams
  int base_theta = 8;
  int leaf_order = 6;
  double refine_beta = 2.0;
  double size_floor_rel = 1e-5;  // stop refining below this fraction of delta
};

/// Newtonian potential of f: w2(x) = (1/4pi) int f(y) / |x - y| dy, evaluated
/// parametrically (the tube Jacobian cancels the axis singularity of f) with
/// binary-tree refinement toward the target's preimage.
double w2_value(const SingularField& field, const Vec3& x, const PotentialSpec& spec = {});
Vec3 grad_w2(const SingularField& field, const Vec3& x, const PotentialSpec& spec = {});

/// Persistent evaluator reusing base-level f J_0 node values across targets.
class W2Evaluator {
 public:
  W2Evaluator(const SingularField& field, const PotentialSpec& spec = {});
  ~W2Evaluator();
  W2Evaluator(const W2Evaluator&) = delete;
  W2Evaluator& operator=(const W2Evaluator&) = delete;
  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;

 private:
  template <typename T, typename Kernel>
  T integrate(const Vec3& x, const Kernel& kernel) const;
  const SingularField& field_;
  PotentialSpec spec_;
  struct BaseBox;
  std::vector<BaseBox> boxes_;
};

struct CorrectionResult {
  double volume_term = 0.0;   // - int f (w1 + w2)
  double surface_term = 0.0;  // int (1-phi)(dw1/dn + dw2/dn + 2 dv/dn)
  double total() const { return volume_term + surface_term; }
  // diagnostics
  double offset_h = 0.0;               // coarse Richardson offset actually used
  double max_offset_disagreement = 0.0;
  double quad_error = 0.0;
  double sigma_prime_refinement_delta = 0.0;  // surface-term shift under refinement
  bool axisymmetric = false;
};

struct CorrectionSpec {
  int sigma0_xi_panels = 6;
  int sigma_prime_u_panels = 6;
  int surface_order = 10;
  int volume_xi_panels = 4;
  int volume_theta_panels = 10;
  int volume_order = 8;
  int s_panels = 8;           // collapsed to 1 when the integrands are axisymmetric
  int s_order = 8;
  double offset_scale = 0.05; // h = offset_scale * local panel size, Richardson with h/2
  PotentialSpec w2;
};

/// The two optional correction integrals of the energy expansion. dw1/dn is
/// evaluated by two-sided offsets Richardson-combined (its jump across Sigma
/// vanishes); dv/dn contributes only on Sigma_0.
CorrectionResult correction_terms(const SingularField& field, const CutSurface& surface,
                                  const CorrectionSpec& spec = {});

/// Classical mutual-inductance double line integral between the curve and its
/// inward nu-offset at distance eps, trapezoid in both parameters with the
/// near-diagonal 1/distance peak subtracted and integrated in closed form.
/// Planar simple curves only; n_points >= 512.
double neumann_filament_oracle(const ClosedCurve& curve, double eps, int n_points);

}  // namespace thin_inductor
