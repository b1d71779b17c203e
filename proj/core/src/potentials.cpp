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

#include "thin_inductor/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "thin_inductor/errors.hpp"
#include "thin_inductor/quadrature.hpp"

namespace thin_inductor {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

constexpr double kRefineBeta = 2.5;
constexpr double kTriRefineBeta = 3.0;
constexpr double kSurfaceFloorRel = 3e-6;  // refinement floor as a fraction of delta

// Degree-5 rule on a triangle (7 points); weights sum to 1.
struct TriRulePoint {
  double l1, l2, w;
};
constexpr TriRulePoint kTriRule7[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.125939180544827},
};

bool curve_is_planar(const ClosedCurve& curve, Vec3* normal_out) {
  const FrenetData f0 = evaluate_frame(curve, 0.0);
  const Vec3 n = f0.b;
  const Vec3 p0 = curve.position(0.0);
  double scale = 0.0;
  for (int i = 0; i < 64; ++i) {
    scale = std::max(scale, (curve.position(i / 64.0) - p0).norm());
  }
  for (int i = 0; i < 128; ++i) {
    const double s = i / 128.0;
    if (std::abs(evaluate_frame(curve, s).tau) > 1e-9) return false;
    if (std::abs(dot(curve.position(s) - p0, n)) > 1e-9 * std::max(scale, 1.0)) return false;
  }
  if (normal_out) *normal_out = n;
  return true;
}

}  // namespace

TriMesh parse_sigma_prime_mesh(std::istream& in) {
  TriMesh mesh;
  std::string header;
  if (!std::getline(in, header)) throw MeshBoundaryMismatch("mesh: empty input");
  std::istringstream hs(header);
  std::string tag, vdecl, fdecl;
  hs >> tag >> vdecl >> fdecl;
  std::string trailing;
  if (tag != "sigma_prime" || vdecl.rfind("v=", 0) != 0 || fdecl.rfind("f=", 0) != 0 ||
      (hs >> trailing)) {
    throw MeshBoundaryMismatch("mesh: header must be 'sigma_prime v=<nv> f=<nf>'");
  }
  std::size_t nv = 0, nf = 0;
  try {
    nv = std::stoul(vdecl.substr(2));
    nf = std::stoul(fdecl.substr(2));
  } catch (const std::exception&) {
    throw MeshBoundaryMismatch("mesh: malformed vertex/face counts");
  }
  std::string line;
  for (std::size_t i = 0; i < nv; ++i) {
    if (!std::getline(in, line)) throw MeshBoundaryMismatch("mesh: truncated vertex list");
    std::istringstream ls(line);
    Vec3 v;
    if (!(ls >> v.x >> v.y >> v.z) || (ls >> trailing)) {
      throw MeshBoundaryMismatch("mesh: malformed vertex line");
    }
    mesh.vertices.push_back(v);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    if (!std::getline(in, line)) throw MeshBoundaryMismatch("mesh: truncated face list");
    std::istringstream ls(line);
    long a, b, c;
    if (!(ls >> a >> b >> c) || (ls >> trailing)) {
      throw MeshBoundaryMismatch("mesh: malformed face line");
    }
    const long n = static_cast<long>(mesh.vertices.size());
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) {
      throw MeshBoundaryMismatch("mesh: face index out of range");
    }
    mesh.faces.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }
  if (std::getline(in, line)) {
    std::istringstream ls(line);
    if (ls >> trailing) throw MeshBoundaryMismatch("mesh: trailing content");
  }
  return mesh;
}

void write_sigma_prime_mesh(const TriMesh& mesh, std::ostream& out) {
  out << "sigma_prime v=" << mesh.vertices.size() << " f=" << mesh.faces.size() << "\n";
  out.precision(17);
  for (const Vec3& v : mesh.vertices) out << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& f : mesh.faces) out << f[0] << " " << f[1] << " " << f[2] << "\n";
}

CutSurface::CutSurface(const SingularField& field) : field_(field) {}

Vec3 CutSurface::sigma0_point(double s, double xi) const {
  const FrenetData fr = evaluate_frame(field_.tube().curve(), s);
  return field_.tube().curve().position(s) + field_.delta() * xi * fr.nu;
}

Vec3 CutSurface::sigma0_normal(double s, double xi) const {
  const FrenetData fr = evaluate_frame(field_.tube().curve(), s);
  const double delta = field_.delta();
  const double A = fr.gprime_norm - delta * xi * fr.kappa;
  return (A * fr.b - delta * xi * fr.tau * fr.t).normalized();
}

double CutSurface::sigma0_measure(double s, double xi) const {
  const FrenetData fr = evaluate_frame(field_.tube().curve(), s);
  const double delta = field_.delta();
  const double A = fr.gprime_norm - delta * xi * fr.kappa;
  const double tt = delta * xi * fr.tau;
  return delta * std::sqrt(A * A + tt * tt);
}

double CutSurface::density(double xi) const { return 1.0 - field_.cutoff().eval(xi).phi; }

Vec3 CutSurface::offset_point(double s) const {
  const FrenetData fr = evaluate_frame(field_.tube().curve(), s);
  return field_.tube().curve().position(s) + field_.delta() * fr.nu;
}

Vec3 CutSurface::offset_velocity(double s) const {
  const FrenetData fr = evaluate_frame(field_.tube().curve(), s);
  return (fr.gprime_norm - field_.delta() * fr.kappa) * fr.t;
}

namespace {

TriMesh triangulate_offset_region(const CutSurface& cs, int n_seg, int n_rings) {
  TriMesh mesh;
  Vec3 ctr{};
  for (int i = 0; i < n_seg; ++i) ctr += cs.offset_point(static_cast<double>(i) / n_seg);
  ctr = ctr / n_seg;
  mesh.vertices.push_back(ctr);
  for (int r = 1; r <= n_rings; ++r) {
    const double u = static_cast<double>(r) / n_rings;
    for (int i = 0; i < n_seg; ++i) {
      const Vec3 rim = cs.offset_point(static_cast<double>(i) / n_seg);
      mesh.vertices.push_back(ctr + u * (rim - ctr));
    }
  }
  const auto vid = [&](int r, int i) { return r == 0 ? 0 : 1 + (r - 1) * n_seg + (i % n_seg); };
  for (int i = 0; i < n_seg; ++i) mesh.faces.push_back({vid(0, 0), vid(1, i), vid(1, i + 1)});
  for (int r = 1; r < n_rings; ++r) {
    for (int i = 0; i < n_seg; ++i) {
      mesh.faces.push_back({vid(r, i), vid(r + 1, i), vid(r + 1, i + 1)});
      mesh.faces.push_back({vid(r, i), vid(r + 1, i + 1), vid(r, i + 1)});
    }
  }
  return mesh;
}

Vec3 triangle_normal(const TriMesh& mesh, const std::array<int, 3>& f) {
  const Vec3 a = mesh.vertices[f[0]], b = mesh.vertices[f[1]], c = mesh.vertices[f[2]];
  return cross(b - a, c - a);  // twice the area vector
}

}  // namespace

CutSurface CutSurface::build(const SingularField& field) {
  CutSurface cs(field);
  Vec3 n;
  if (!curve_is_planar(field.tube().curve(), &n)) {
    throw Error("build_cut_surface: non-planar curve needs a user-supplied spanning mesh");
  }
  cs.planar_ = true;
  cs.plane_normal_ = n;

  // Simple inward offset: the curvature bound rules out cusps, a coarse
  // pairwise scan rules out global self-intersection.
  constexpr int kScan = 512;
  std::vector<Vec3> off(kScan);
  for (int i = 0; i < kScan; ++i) {
    const double s = static_cast<double>(i) / kScan;
    const FrenetData fr = evaluate_frame(field.tube().curve(), s);
    if (fr.gprime_norm - field.delta() * fr.kappa <= 0.0) {
      throw OffsetSelfIntersects("offset curve develops a cusp at distance delta");
    }
    off[i] = cs.offset_point(s);
  }
  double min_seg = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) min_seg = std::min(min_seg, distance(off[i], off[(i + 1) % kScan]));
  for (int i = 0; i < kScan; ++i) {
    for (int j = i + 8; j < kScan && (kScan - (j - i)) >= 8; ++j) {
      if (distance(off[i], off[j]) < 0.5 * min_seg) {
        throw OffsetSelfIntersects("offset curve self-intersects");
      }
    }
  }

  cs.mesh_ = triangulate_offset_region(cs, 256, 40);
  cs.centroid_ = cs.mesh_.vertices[0];
  // Orient triangles so their normals agree with Sigma_0's at the junction.
  const Vec3 n_junction = cs.sigma0_normal(0.0, 1.0);
  for (auto& f : cs.mesh_.faces) {
    if (dot(triangle_normal(cs.mesh_, f), n_junction) < 0.0) std::swap(f[1], f[2]);
  }
  cs.build_source_cache();
  return cs;
}

CutSurface CutSurface::build_with_mesh(const SingularField& field, TriMesh sigma_prime) {
  CutSurface cs(field);
  cs.planar_ = curve_is_planar(field.tube().curve(), &cs.plane_normal_);
  cs.mesh_ = std::move(sigma_prime);
  if (cs.mesh_.vertices.empty() || cs.mesh_.faces.empty()) {
    throw MeshBoundaryMismatch("mesh: empty spanning surface");
  }

  // Boundary edges (used once) must lie on the offset curve g + delta nu.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& f : cs.mesh_.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  // A dense scan plus one local parabolic refinement resolves the curve to
  // well below the 1e-6 delta tolerance.
  const double tol = 1e-6 * field.delta();
  for (const auto& [edge, count] : edge_count) {
    if (count != 1) continue;
    for (int v : {edge.first, edge.second}) {
      const Vec3 p = cs.mesh_.vertices[v];
      constexpr int kScan = 4096;
      double best = std::numeric_limits<double>::infinity();
      int ibest = 0;
      for (int i = 0; i < kScan; ++i) {
        const double d = distance(p, cs.offset_point(static_cast<double>(i) / kScan));
        if (d < best) { best = d; ibest = i; }
      }
      const double h = 1.0 / kScan;
      const double s0 = static_cast<double>(ibest) / kScan;
      const double dm = distance(p, cs.offset_point(s0 - h));
      const double dp = distance(p, cs.offset_point(s0 + h));
      const double denom = dm - 2.0 * best + dp;
      const double s_ref = denom > 0.0 ? s0 + 0.5 * h * (dm - dp) / denom : s0;
      best = std::min(best, distance(p, cs.offset_point(s_ref)));
      if (best > tol) throw MeshBoundaryMismatch("mesh: boundary vertex off the offset curve");
    }
  }

  Vec3 ctr{};
  for (const Vec3& v : cs.mesh_.vertices) ctr += v;
  cs.centroid_ = ctr / static_cast<double>(cs.mesh_.vertices.size());

  const Vec3 n_junction = cs.sigma0_normal(0.0, 1.0);
  int agree = 0, disagree = 0;
  for (const auto& f : cs.mesh_.faces) {
    (dot(triangle_normal(cs.mesh_, f), n_junction) >= 0.0 ? agree : disagree)++;
  }
  if (agree != 0 && disagree != 0) {
    throw MeshBoundaryMismatch("mesh: inconsistent triangle orientation");
  }
  if (disagree > 0) {
    for (auto& f : cs.mesh_.faces) std::swap(f[1], f[2]);
  }
  cs.build_source_cache();
  return cs;
}

namespace {

struct GaussNodes1d {
  std::vector<double> x, w;  // on (0,1)
};

GaussNodes1d unit_rule(int order) {
  const GaussRule& r = gauss_legendre(order);
  GaussNodes1d out;
  for (int i = 0; i < order; ++i) {
    out.x.push_back(0.5 * (1.0 + r.nodes[i]));
    out.w.push_back(0.5 * r.weights[i]);
  }
  return out;
}

}  // namespace

void CutSurface::build_source_cache() {
  // Sigma_0 base panels: s x xi grid over (0,1) x (1/2, 1), 4x4 nodes each.
  const int ns = 24, nxi = 6;
  const GaussNodes1d rule = unit_rule(4);
  for (int is = 0; is < ns; ++is) {
    for (int ix = 0; ix < nxi; ++ix) {
      const double s0 = static_cast<double>(is) / ns, s1 = static_cast<double>(is + 1) / ns;
      const double x0 = 0.5 + 0.5 * ix / nxi, x1 = 0.5 + 0.5 * (ix + 1) / nxi;
      sigma0_panels_.push_back({s0, s1, x0, x1});
      for (std::size_t a = 0; a < rule.x.size(); ++a) {
        for (std::size_t b = 0; b < rule.x.size(); ++b) {
          const double s = s0 + (s1 - s0) * rule.x[a];
          const double xi = x0 + (x1 - x0) * rule.x[b];
          SourceNode node;
          node.y = sigma0_point(s, xi);
          node.n = sigma0_normal(s, xi);
          node.weight = density(xi) * sigma0_measure(s, xi) * rule.w[a] * rule.w[b] * (s1 - s0) *
                        (x1 - x0);
          cache_sigma0_.push_back(node);
        }
      }
    }
  }
  // Triangles: degree-5 seven-point rule.
  for (const auto& f : mesh_.faces) {
    const Vec3 a = mesh_.vertices[f[0]], b = mesh_.vertices[f[1]], c = mesh_.vertices[f[2]];
    const Vec3 nn = cross(b - a, c - a);
    const double area2 = nn.norm();
    if (area2 == 0.0) continue;
    const Vec3 n = nn / area2;
    for (const TriRulePoint& p : kTriRule7) {
      const Vec3 y = a + p.l1 * (b - a) + p.l2 * (c - a);
      cache_tri_.push_back({y, n, 0.5 * area2 * p.w});
    }
  }
}

double CutSurface::distance_to_surface(const Vec3& x) const {
  if (planar_) {
    const Vec3 rel = x - centroid_;
    const double h = dot(rel, plane_normal_);
    const Vec3 p = x - h * plane_normal_;
    // Nearest curve point decides whether the in-plane projection is inside
    // the region bounded by the curve (nu points inward).
    double best = std::numeric_limits<double>::infinity();
    double s_best = 0.0;
    const auto& coarse = field_.tube().coarse_points();
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double d = (coarse[i] - p).norm2();
      if (d < best) {
        best = d;
        s_best = static_cast<double>(i) / static_cast<double>(coarse.size());
      }
    }
    const ClosedCurve& curve = field_.tube().curve();
    for (int it = 0; it < 40; ++it) {
      const Vec3 d = p - curve.position(s_best);
      const Vec3 g1 = curve.d1(s_best);
      const double hp = dot(d, curve.d2(s_best)) - g1.norm2();
      if (hp == 0.0) break;
      const double step = dot(d, g1) / hp;
      s_best -= step;
      if (std::abs(step) < 1e-14) break;
    }
    s_best -= std::floor(s_best);
    const FrenetData fr = evaluate_frame(curve, s_best);
    const Vec3 dp = p - curve.position(s_best);
    if (dot(dp, fr.nu) >= 0.0) return std::abs(h);
    return std::sqrt(h * h + dp.norm2());
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& node : cache_sigma0_) best = std::min(best, distance(x, node.y));
  for (const auto& node : cache_tri_) best = std::min(best, distance(x, node.y));
  return best;
}

namespace {

// Double-layer kernels with d = y - x (the sign for which the jump matches
// the singular field's orientation).
struct W1ValueKernel {
  using result_type = double;
  Vec3 x;
  double operator()(const Vec3& y, const Vec3& n) const {
    const Vec3 d = y - x;
    const double r2 = d.norm2();
    const double r = std::sqrt(r2);
    return dot(n, d) / (r2 * r * kFourPi);
  }
};

struct W1GradKernel {
  using result_type = Vec3;
  Vec3 x;
  Vec3 operator()(const Vec3& y, const Vec3& n) const {
    const Vec3 d = y - x;
    const double r2 = d.norm2();
    const double r = std::sqrt(r2);
    const double r3 = r2 * r;
    return (-1.0 / r3 * n + 3.0 * dot(n, d) / (r3 * r2) * d) * (1.0 / kFourPi);
  }
};

template <typename T>
void accumulate(T& acc, const T& v) {
  acc += v;
}

// Adaptive Sigma_0 panel integration: binary split of the longest ambient
// extent while the target is within kRefineBeta panel diameters.
template <typename Kernel>
void sigma0_adaptive(const CutSurface& cs, const Kernel& kernel, double s0, double s1, double x0,
                     double x1, double s_metric, double floor_len,
                     typename Kernel::result_type& acc) {
  const double delta = cs.field().delta();
  const double ws = (s1 - s0) * s_metric;
  const double wxi = (x1 - x0) * delta;
  const double diam = std::sqrt(ws * ws + wxi * wxi);
  const Vec3 center = cs.sigma0_point(0.5 * (s0 + s1), 0.5 * (x0 + x1));
  const double dist = distance(kernel.x, center);
  if (dist < kRefineBeta * diam && diam > floor_len) {
    if (ws >= wxi) {
      const double sm = 0.5 * (s0 + s1);
      sigma0_adaptive(cs, kernel, s0, sm, x0, x1, s_metric, floor_len, acc);
      sigma0_adaptive(cs, kernel, sm, s1, x0, x1, s_metric, floor_len, acc);
    } else {
      const double xm = 0.5 * (x0 + x1);
      sigma0_adaptive(cs, kernel, s0, s1, x0, xm, s_metric, floor_len, acc);
      sigma0_adaptive(cs, kernel, s0, s1, xm, x1, s_metric, floor_len, acc);
    }
    return;
  }
  const int order = dist < 4.0 * diam ? 6 : 4;
  const GaussNodes1d rule = unit_rule(order);
  for (std::size_t a = 0; a < rule.x.size(); ++a) {
    for (std::size_t b = 0; b < rule.x.size(); ++b) {
      const double s = s0 + (s1 - s0) * rule.x[a];
      const double xi = x0 + (x1 - x0) * rule.x[b];
      const double w =
          cs.density(xi) * cs.sigma0_measure(s, xi) * rule.w[a] * rule.w[b] * (s1 - s0) * (x1 - x0);
      if (w == 0.0) continue;
      accumulate(acc, kernel(cs.sigma0_point(s, xi), cs.sigma0_normal(s, xi)) * w);
    }
  }
}

template <typename Kernel>
void triangle_adaptive(const Kernel& kernel, const Vec3& a, const Vec3& b, const Vec3& c,
                       double floor_len, int depth, typename Kernel::result_type& acc) {
  const Vec3 nn = cross(b - a, c - a);
  const double area2 = nn.norm();
  if (area2 == 0.0) return;
  const double diam = std::sqrt(area2);
  const Vec3 centroid = (a + b + c) / 3.0;
  const double dist = distance(kernel.x, centroid);
  if (dist < kTriRefineBeta * diam && diam > floor_len && depth < 32) {
    const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    triangle_adaptive(kernel, a, ab, ca, floor_len, depth + 1, acc);
    triangle_adaptive(kernel, ab, b, bc, floor_len, depth + 1, acc);
    triangle_adaptive(kernel, ca, bc, c, floor_len, depth + 1, acc);
    triangle_adaptive(kernel, ab, bc, ca, floor_len, depth + 1, acc);
    return;
  }
  const Vec3 n = nn / area2;
  for (const TriRulePoint& p : kTriRule7) {
    accumulate(acc, kernel(a + p.l1 * (b - a) + p.l2 * (c - a), n) * (0.5 * area2 * p.w));
  }
}

template <typename Kernel>
typename Kernel::result_type w1_integrate(const CutSurface& cs, const Kernel& kernel) {
  using T = typename Kernel::result_type;
  T acc{};
  const auto& tube = cs.field().tube();
  const double delta = cs.field().delta();
  const double s_metric = tube.validity().max_a0 + delta;  // upper bound on |d sigma0 / ds|
  const double floor_len = std::max(kSurfaceFloorRel * delta,
                                    0.15 * cs.distance_to_surface(kernel.x));

  // Sigma_0: cached far panels, adaptive near panels.
  const auto& panels = cs.sigma0_panels();
  const auto& nodes = cs.sigma0_nodes();
  const std::size_t nodes_per_panel = nodes.size() / panels.size();
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& [s0, s1, x0, x1] = panels[p];
    const double ws = (s1 - s0) * s_metric;
    const double wxi = (x1 - x0) * delta;
    const double diam = std::sqrt(ws * ws + wxi * wxi);
    const Vec3 center = cs.sigma0_point(0.5 * (s0 + s1), 0.5 * (x0 + x1));
    if (distance(kernel.x, center) < kRefineBeta * diam) {
      sigma0_adaptive(cs, kernel, s0, s1, x0, x1, s_metric, floor_len, acc);
    } else {
      for (std::size_t i = p * nodes_per_panel; i < (p + 1) * nodes_per_panel; ++i) {
        accumulate(acc, kernel(nodes[i].y, nodes[i].n) * nodes[i].weight);
      }
    }
  }

  // Sigma': cached triangles unless the target is near.
  const auto& mesh = cs.sigma_prime();
  const auto& tri_nodes = cs.tri_nodes();
  const std::size_t nodes_per_tri = tri_nodes.size() / mesh.faces.size();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Vec3 a = mesh.vertices[mesh.faces[f][0]];
    const Vec3 b = mesh.vertices[mesh.faces[f][1]];
    const Vec3 c = mesh.vertices[mesh.faces[f][2]];
    const double diam = std::sqrt(cross(b - a, c - a).norm());
    const Vec3 centroid = (a + b + c) / 3.0;
    if (distance(kernel.x, centroid) < kTriRefineBeta * diam) {
      triangle_adaptive(kernel, a, b, c, floor_len, 0, acc);
    } else {
      for (std::size_t i = nodes_per_tri * f; i < nodes_per_tri * (f + 1); ++i) {
        accumulate(acc, kernel(tri_nodes[i].y, tri_nodes[i].n) * tri_nodes[i].weight);
      }
    }
  }
  return acc;
}

}  // namespace

double w1_value(const CutSurface& surface, const Vec3& x) {
  if (surface.distance_to_surface(x) < 0.02 * surface.field().delta()) {
    throw TooCloseToSurface("w1_value: accuracy not guaranteed this close to the cut surface");
  }
  return w1_integrate(surface, W1ValueKernel{x});
}

double w1_value_unchecked(const CutSurface& surface, const Vec3& x) {
  return w1_integrate(surface, W1ValueKernel{x});
}

Vec3 grad_w1(const CutSurface& surface, const Vec3& x) {
  return w1_integrate(surface, W1GradKernel{x});
}

// ---------------------------------------------------------------------------
// Newtonian potential of f
// ---------------------------------------------------------------------------

namespace {

double f_times_jacobian(const SingularField& field, const TubeCoords& c) {
  const double delta = field.delta();
  const double a0 = a_factor(field.tube(), 0.0, c);
  return f_value(field, c) * delta * delta * a0 * c.xi;
}

struct W2ValueKernel {
  using result_type = double;
  Vec3 x;
  double operator()(const Vec3& y) const { return 1.0 / (kFourPi * distance(x, y)); }
};

struct W2GradKernel {
  using result_type = Vec3;
  Vec3 x;
  Vec3 operator()(const Vec3& y) const {
    const Vec3 d = y - x;
    const double r = d.norm();
    return d * (1.0 / (kFourPi * r * r * r));
  }
};

}  // namespace

struct W2Evaluator::BaseBox {
  std::array<double, 3> lo, hi;
  Vec3 center;
  double diam = 0.0;
  std::vector<Vec3> pts;
  std::vector<double> fjw;  // f J_0 times quadrature weight
};

W2Evaluator::W2Evaluator(const SingularField& field, const PotentialSpec& spec)
    : field_(field), spec_(spec) {
  const TubeGeometry& tube = field.tube();
  const double delta = field.delta();
  double tau_max = 0.0;
  for (int i = 0; i < 128; ++i) {
    tau_max = std::max(tau_max, std::abs(evaluate_frame(tube.curve(), i / 128.0).tau));
  }
  const double s_metric =
      std::sqrt(tube.validity().max_a0 * tube.validity().max_a0 + delta * delta * tau_max * tau_max);

  // xi edges aligned with the cutoff seams at 1/2 and 3/4 (f has C^2 kinks
  // there; a box straddling a seam would converge slowly).
  std::vector<double> xi_edges;
  for (int i = 0; i <= spec.base_xi; ++i) xi_edges.push_back(0.5 * i / spec.base_xi);
  for (int i = 1; i <= std::max(1, spec.base_xi / 2); ++i) {
    xi_edges.push_back(0.5 + 0.25 * i / std::max(1, spec.base_xi / 2));
  }

  const GaussNodes1d rule = unit_rule(spec.leaf_order);
  for (int is = 0; is < spec.base_s; ++is) {
    for (std::size_t ix = 0; ix + 1 < xi_edges.size(); ++ix) {
      for (int it = 0; it < spec.base_theta; ++it) {
        BaseBox box;
        box.lo = {static_cast<double>(is) / spec.base_s, xi_edges[ix],
                  kTwoPi * it / spec.base_theta};
        box.hi = {static_cast<double>(is + 1) / spec.base_s, xi_edges[ix + 1],
                  kTwoPi * (it + 1) / spec.base_theta};
        const double ws = (box.hi[0] - box.lo[0]) * s_metric;
        const double wxi = (box.hi[1] - box.lo[1]) * delta;
        const double wth = (box.hi[2] - box.lo[2]) * delta * box.hi[1];
        box.diam = std::sqrt(ws * ws + wxi * wxi + wth * wth);
        box.center = map_F(tube, 0.0, TubeCoords{0.5 * (box.lo[0] + box.hi[0]),
                                                 0.5 * (box.lo[1] + box.hi[1]),
                                                 0.5 * (box.lo[2] + box.hi[2])});
        const double vol = (box.hi[0] - box.lo[0]) * (box.hi[1] - box.lo[1]) * (box.hi[2] - box.lo[2]);
        for (double us : rule.x) {
          for (double ux : rule.x) {
            for (double ut : rule.x) {
              const TubeCoords c{box.lo[0] + (box.hi[0] - box.lo[0]) * us,
                                 box.lo[1] + (box.hi[1] - box.lo[1]) * ux,
                                 box.lo[2] + (box.hi[2] - box.lo[2]) * ut};
              box.pts.push_back(map_F(tube, 0.0, c));
            }
          }
        }
        std::size_t k = 0;
        for (std::size_t a = 0; a < rule.x.size(); ++a) {
          for (std::size_t b = 0; b < rule.x.size(); ++b) {
            for (std::size_t cth = 0; cth < rule.x.size(); ++cth, ++k) {
              const TubeCoords c{box.lo[0] + (box.hi[0] - box.lo[0]) * rule.x[a],
                                 box.lo[1] + (box.hi[1] - box.lo[1]) * rule.x[b],
                                 box.lo[2] + (box.hi[2] - box.lo[2]) * rule.x[cth]};
              box.fjw.push_back(f_times_jacobian(field, c) * rule.w[a] * rule.w[b] * rule.w[cth] *
                                vol);
            }
          }
        }
        boxes_.push_back(std::move(box));
      }
    }
  }
}

namespace {

struct W2RefineContext {
  const SingularField* field;
  double s_metric;
  double delta;
  double floor_len;
  double beta;
  const GaussNodes1d* rule;
};

template <typename T, typename Kernel>
void w2_refine(const W2RefineContext& ctx, const Kernel& kernel, const std::array<double, 3>& lo,
               const std::array<double, 3>& hi, T& acc) {
  const double ws = (hi[0] - lo[0]) * ctx.s_metric;
  const double wxi = (hi[1] - lo[1]) * ctx.delta;
  const double wth = (hi[2] - lo[2]) * ctx.delta * hi[1];
  const double diam = std::sqrt(ws * ws + wxi * wxi + wth * wth);
  const TubeCoords mid{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  const Vec3 center = map_F(ctx.field->tube(), 0.0, mid);
  const double dist = distance(kernel.x, center);
  if (dist < ctx.beta * diam && diam > ctx.floor_len) {
    std::array<double, 3> alo = lo, ahi = hi, blo = lo, bhi = hi;
    int axis = 0;
    double wmax = ws;
    if (wxi > wmax) { axis = 1; wmax = wxi; }
    if (wth > wmax) axis = 2;
    const double m = 0.5 * (lo[axis] + hi[axis]);
    ahi[axis] = m;
    blo[axis] = m;
    w2_refine(ctx, kernel, alo, ahi, acc);
    w2_refine(ctx, kernel, blo, bhi, acc);
    return;
  }
  if (diam <= ctx.floor_len && dist < 0.75 * diam) {
    return;  // singular core: contribution O(diam^2)
  }
  const GaussNodes1d& rule = *ctx.rule;
  const double vol = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  for (std::size_t a = 0; a < rule.x.size(); ++a) {
    for (std::size_t b = 0; b < rule.x.size(); ++b) {
      for (std::size_t cth = 0; cth < rule.x.size(); ++cth) {
        const TubeCoords c{lo[0] + (hi[0] - lo[0]) * rule.x[a], lo[1] + (hi[1] - lo[1]) * rule.x[b],
                           lo[2] + (hi[2] - lo[2]) * rule.x[cth]};
        const double fj = f_times_jacobian(*ctx.field, c);
        const double w = rule.w[a] * rule.w[b] * rule.w[cth] * vol;
        accumulate(acc, kernel(map_F(ctx.field->tube(), 0.0, c)) * (fj * w));
      }
    }
  }
}

}  // namespace

template <typename T, typename Kernel>
T W2Evaluator::integrate(const Vec3& x, const Kernel& kernel) const {
  const TubeGeometry& tube = field_.tube();
  const double delta = field_.delta();
  double tau_max = 0.0;
  for (int i = 0; i < 16; ++i) {
    tau_max = std::max(tau_max, std::abs(evaluate_frame(tube.curve(), i / 16.0).tau));
  }
  const GaussNodes1d rule = unit_rule(spec_.leaf_order);
  W2RefineContext ctx{&field_,
                      std::sqrt(tube.validity().max_a0 * tube.validity().max_a0 +
                                delta * delta * tau_max * tau_max),
                      delta, spec_.size_floor_rel * delta, spec_.refine_beta, &rule};
  T acc{};
  for (const BaseBox& box : boxes_) {
    if (distance(x, box.center) >= spec_.refine_beta * box.diam) {
      for (std::size_t i = 0; i < box.pts.size(); ++i) {
        accumulate(acc, kernel(box.pts[i]) * box.fjw[i]);
      }
    } else {
      w2_refine(ctx, kernel, box.lo, box.hi, acc);
    }
  }
  return acc;
}

W2Evaluator::~W2Evaluator() = default;

double W2Evaluator::value(const Vec3& x) const { return integrate<double>(x, W2ValueKernel{x}); }

Vec3 W2Evaluator::gradient(const Vec3& x) const { return integrate<Vec3>(x, W2GradKernel{x}); }

double w2_value(const SingularField& field, const Vec3& x, const PotentialSpec& spec) {
  return W2Evaluator(field, spec).value(x);
}

Vec3 grad_w2(const SingularField& field, const Vec3& x, const PotentialSpec& spec) {
  return W2Evaluator(field, spec).gradient(x);
}

// ---------------------------------------------------------------------------
// Correction terms
// ---------------------------------------------------------------------------

namespace {

struct Axis1d {
  std::vector<double> x, w;
};

Axis1d make_axis(double a, double b, int panels, int order,
                 Grading grading = Grading::Uniform, double ratio = 2.0) {
  AxisSpec spec;
  spec.order = order;
  spec.panels = panels;
  spec.grading = grading;
  spec.ratio = ratio;
  const auto edges = panel_edges(a, b, spec);
  const GaussRule& rule = gauss_legendre(order);
  Axis1d axis;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]);
    const double hw = 0.5 * (edges[p + 1] - edges[p]);
    for (int i = 0; i < order; ++i) {
      axis.x.push_back(c + hw * rule.nodes[i]);
      axis.w.push_back(hw * rule.weights[i]);
    }
  }
  return axis;
}

}  // namespace

CorrectionResult correction_terms(const SingularField& field, const CutSurface& surface,
                                  const CorrectionSpec& spec) {
  const TubeGeometry& tube = field.tube();
  const double delta = field.delta();
  W2Evaluator w2(field, spec.w2);

  // Surfaces of revolution make every integrand below independent of s; probe
  // and collapse the s axis when that holds.
  bool axisym = true;
  {
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    double fmin = vmin, fmax = vmax;
    for (int i = 0; i < 8; ++i) {
      const TubeCoords c{i / 8.0, 0.35, 2.4};
      const Vec3 y = map_F(tube, 0.0, c);
      const double v = w2.value(y) + w1_value_unchecked(surface, y);
      const double fj = f_times_jacobian(field, c);
      vmin = std::min(vmin, v); vmax = std::max(vmax, v);
      fmin = std::min(fmin, fj); fmax = std::max(fmax, fj);
    }
    const double vscale = std::max(std::abs(vmin), std::abs(vmax)) + 1e-30;
    const double fscale = std::max(std::abs(fmin), std::abs(fmax)) + 1e-30;
    axisym = (vmax - vmin) <= 3e-6 * vscale && (fmax - fmin) <= 3e-6 * fscale;
  }

  Axis1d s_axis;
  if (axisym) {
    s_axis.x = {0.1234};
    s_axis.w = {1.0};
  } else {
    s_axis = make_axis(0.0, 1.0, spec.s_panels, spec.s_order);
  }

  CorrectionResult out;
  out.axisymmetric = axisym;

  // volume term: - int f (w1 + w2)
  {
    const Axis1d xi_axis = make_axis(0.0, 0.75, spec.volume_xi_panels, spec.volume_order);
    const Axis1d th_axis =
        make_axis(0.0, kTwoPi, spec.volume_theta_panels, spec.volume_order, Grading::GeometricBoth);
    double acc = 0.0;
    for (std::size_t is = 0; is < s_axis.x.size(); ++is) {
      for (std::size_t ix = 0; ix < xi_axis.x.size(); ++ix) {
        for (std::size_t it = 0; it < th_axis.x.size(); ++it) {
          const TubeCoords c{s_axis.x[is], xi_axis.x[ix], th_axis.x[it]};
          const double fj = f_times_jacobian(field, c);
          if (fj == 0.0) continue;
          const Vec3 y = map_F(tube, 0.0, c);
          const double w = w1_value_unchecked(surface, y) + w2.value(y);
          acc += s_axis.w[is] * xi_axis.w[ix] * th_axis.w[it] * fj * w;
        }
      }
    }
    out.volume_term = -acc;
  }

  // surface term: int (1 - phi) (dw1/dn + dw2/dn + 2 dv/dn)
  const auto dw1_dn = [&](const Vec3& x, const Vec3& n, double h1) {
    const auto D = [&](double h) {
      return 0.5 * dot(grad_w1(surface, x + h * n) + grad_w1(surface, x - h * n), n);
    };
    const double d1 = D(h1);
    const double d2 = D(0.5 * h1);
    const double mag = std::max(std::abs(d1), std::abs(d2));
    if (mag > 1e-6 / delta && std::abs(d1 - d2) > 0.10 * mag) {
      throw OffsetUnstable("dw1/dn offsets disagree by more than 10%");
    }
    out.max_offset_disagreement =
        std::max(out.max_offset_disagreement, mag > 0.0 ? std::abs(d1 - d2) / mag : 0.0);
    return 2.0 * d2 - d1;  // removes the O(h) term (curved density profile)
  };

  double sigma0_part = 0.0;
  {
    const Axis1d xi_axis = make_axis(0.5, 1.0, spec.sigma0_xi_panels, spec.surface_order);
    const double panel_len = 0.5 / spec.sigma0_xi_panels * delta;  // ambient xi panel size
    const double h1 = spec.offset_scale * panel_len;
    out.offset_h = h1;
    for (std::size_t is = 0; is < s_axis.x.size(); ++is) {
      for (std::size_t ix = 0; ix < xi_axis.x.size(); ++ix) {
        const double s = s_axis.x[is], xi = xi_axis.x[ix];
        const double q = surface.density(xi);
        if (q == 0.0) continue;
        const Vec3 x = surface.sigma0_point(s, xi);
        const Vec3 n = surface.sigma0_normal(s, xi);
        const double val = dw1_dn(x, n, h1) + dot(w2.gradient(x), n) +
                           2.0 * dv_dn_on_sigma0(field, xi, s);
        sigma0_part += s_axis.w[is] * xi_axis.w[ix] * q * surface.sigma0_measure(s, xi) * val;
      }
    }
  }

  const auto sigma_prime_part = [&](int u_panels) {
    const Axis1d u_axis = make_axis(0.0, 1.0, u_panels, spec.surface_order);
    const Vec3 n = surface.sigma0_normal(0.0, 1.0);
    const Vec3 ctr = surface.region_centroid();
    double acc = 0.0;
    for (std::size_t is = 0; is < s_axis.x.size(); ++is) {
      const double s = s_axis.x[is];
      const Vec3 rim = surface.offset_point(s) - ctr;
      const double span = cross(rim, surface.offset_velocity(s)).norm();
      for (std::size_t iu = 0; iu < u_axis.x.size(); ++iu) {
        const double u = u_axis.x[iu];
        const Vec3 x = ctr + u * rim;
        const double h1 = spec.offset_scale * std::max(rim.norm() / u_panels, 0.05 * delta);
        const double val = dw1_dn(x, n, h1) + dot(w2.gradient(x), n);
        acc += s_axis.w[is] * u_axis.w[iu] * u * span * val;
      }
    }
    return acc;
  };

  const double sp1 = sigma_prime_part(spec.sigma_prime_u_panels);
  const double sp2 = sigma_prime_part(2 * spec.sigma_prime_u_panels);
  out.sigma_prime_refinement_delta = std::abs(sp2 - sp1);
  out.surface_term = sigma0_part + sp2;
  out.quad_error = out.sigma_prime_refinement_delta;
  return out;
}

// ---------------------------------------------------------------------------
// Filament oracle
// ---------------------------------------------------------------------------

double neumann_filament_oracle(const ClosedCurve& curve, double eps, int n_points) {
  if (n_points < 512) throw Error("neumann_filament_oracle: n_points must be >= 512");
  if (!(eps > 0.0)) throw Error("neumann_filament_oracle: eps must be positive");
  if (!curve_is_planar(curve, nullptr)) {
    throw Error("neumann_filament_oracle: curve must be planar");
  }

  const int n = n_points;
  std::vector<Vec3> g(n), t(n), o(n);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    const FrenetData fr = evaluate_frame(curve, s);
    const double speed_off = fr.gprime_norm - eps * fr.kappa;
    if (speed_off <= 0.0) {
      throw OffsetSelfIntersects("inward offset at eps develops a cusp");
    }
    g[i] = curve.position(s);
    t[i] = fr.t;
    a[i] = fr.gprime_norm;
    b[i] = speed_off;
    o[i] = g[i] + eps * fr.nu;
  }

  // Trapezoid with the near-diagonal peak subtracted; the subtracted kernel
  // a^2 / sqrt(eps^2 + a^2 u^2) integrates to 2 a asinh(a / 2 eps) in closed
  // form over one period.
  const double inv_n = 1.0 / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double K = dot(t[i], t[j]) * a[i] * b[j] / distance(g[i], o[j]);
      double u = std::abs(i - j) * inv_n;
      u = std::min(u, 1.0 - u);
      const double Ktilde = a[i] * a[i] / std::sqrt(eps * eps + a[i] * a[i] * u * u);
      row += K - Ktilde;
    }
    total += row * inv_n + 2.0 * a[i] * std::asinh(a[i] / (2.0 * eps));
  }
  return total * inv_n / kFourPi;
}

}  // namespace thin_inductor
