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

#include "thin_inductor/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "thin_inductor/errors.hpp"
#include "thin_inductor/parallel.hpp"

namespace thin_inductor {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mutex;

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 2 || order > 66) throw std::invalid_argument("gauss_legendre: order must be in [2, 66]");
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(order);
  if (it == g_rules.end()) it = g_rules.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

std::vector<double> panel_edges(double a, double b, const AxisSpec& axis) {
  const int p = std::max(axis.panels, 1);
  std::vector<double> edges;
  edges.reserve(p + 1);
  const double len = b - a;
  switch (axis.grading) {
    case Grading::Uniform: {
      for (int i = 0; i <= p; ++i) edges.push_back(a + len * static_cast<double>(i) / p);
      break;
    }
    case Grading::GeometricLo:
    case Grading::GeometricHi: {
      // Widths w, w r, w r^2, ... with the smallest panel at the graded end.
      const double r = axis.ratio;
      double total = 0.0;
      for (int i = 0; i < p; ++i) total += std::pow(r, i);
      double pos = 0.0;
      std::vector<double> rel{0.0};
      for (int i = 0; i < p; ++i) {
        pos += std::pow(r, i) / total;
        rel.push_back(pos);
      }
      rel.back() = 1.0;
      if (axis.grading == Grading::GeometricLo) {
        for (double u : rel) edges.push_back(a + len * u);
      } else {
        for (auto it = rel.rbegin(); it != rel.rend(); ++it) edges.push_back(a + len * (1.0 - *it));
      }
      break;
    }
    case Grading::GeometricBoth: {
      AxisSpec half = axis;
      half.panels = std::max(1, (p + 1) / 2);
      half.grading = Grading::GeometricLo;
      const double mid = 0.5 * (a + b);
      auto left = panel_edges(a, mid, half);
      half.grading = Grading::GeometricHi;
      // Left half graded toward a: reverse so the small panels hug a.
      {
        std::vector<double> tmp;
        for (std::size_t i = 0; i < left.size(); ++i)
          tmp.push_back(a + (mid - a) - (left[left.size() - 1 - i] - a));
        left = tmp;
      }
      auto right = panel_edges(mid, b, half);
      edges = left;
      for (std::size_t i = 1; i < right.size(); ++i) edges.push_back(right[i]);
      break;
    }
  }
  return edges;
}

double integrate_1d(const std::function<double(double)>& fn, double a, double b, const AxisSpec& axis) {
  const GaussRule& rule = gauss_legendre(axis.order);
  const auto edges = panel_edges(a, b, axis);
  double sum = 0.0;
  for (std::size_t pnl = 0; pnl + 1 < edges.size(); ++pnl) {
    const double lo = edges[pnl], hi = edges[pnl + 1];
    const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < axis.order; ++i) acc += rule.weights[i] * fn(c + hw * rule.nodes[i]);
    sum += acc * hw;
  }
  return sum;
}

namespace {

double integrate_box_once(const std::function<double(const double*)>& fn, const double* lo,
                          const double* hi, const QuadratureSpec& spec, int dim, int order_bump) {
  std::array<std::vector<double>, 3> edges;
  std::array<const GaussRule*, 3> rules{};
  std::array<int, 3> orders{};
  for (int d = 0; d < dim; ++d) {
    edges[d] = panel_edges(lo[d], hi[d], spec.axis[d]);
    orders[d] = spec.axis[d].order + order_bump;
    rules[d] = &gauss_legendre(orders[d]);
  }
  std::array<std::size_t, 3> npanels{1, 1, 1};
  for (int d = 0; d < dim; ++d) npanels[d] = edges[d].size() - 1;
  const std::size_t total = npanels[0] * npanels[1] * npanels[2];

  std::vector<double> partial(total, 0.0);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t rem = idx;
    std::array<std::size_t, 3> pi{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      pi[d] = rem % npanels[d];
      rem /= npanels[d];
    }
    std::array<double, 3> c{}, hw{};
    for (int d = 0; d < dim; ++d) {
      const double a = edges[d][pi[d]], b = edges[d][pi[d] + 1];
      c[d] = 0.5 * (a + b);
      hw[d] = 0.5 * (b - a);
    }
    double acc = 0.0;
    double x[3];
    if (dim == 1) {
      for (int i = 0; i < orders[0]; ++i) {
        x[0] = c[0] + hw[0] * rules[0]->nodes[i];
        acc += rules[0]->weights[i] * fn(x);
      }
    } else if (dim == 2) {
      for (int i = 0; i < orders[0]; ++i) {
        x[0] = c[0] + hw[0] * rules[0]->nodes[i];
        double accj = 0.0;
        for (int j = 0; j < orders[1]; ++j) {
          x[1] = c[1] + hw[1] * rules[1]->nodes[j];
          accj += rules[1]->weights[j] * fn(x);
        }
        acc += rules[0]->weights[i] * accj;
      }
    } else {
      for (int i = 0; i < orders[0]; ++i) {
        x[0] = c[0] + hw[0] * rules[0]->nodes[i];
        double accj = 0.0;
        for (int j = 0; j < orders[1]; ++j) {
          x[1] = c[1] + hw[1] * rules[1]->nodes[j];
          double acck = 0.0;
          for (int k = 0; k < orders[2]; ++k) {
            x[2] = c[2] + hw[2] * rules[2]->nodes[k];
            acck += rules[2]->weights[k] * fn(x);
          }
          accj += rules[1]->weights[j] * acck;
        }
        acc += rules[0]->weights[i] * accj;
      }
    }
    double scale = 1.0;
    for (int d = 0; d < dim; ++d) scale *= hw[d];
    partial[idx] = acc * scale;
  });

  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum;
}

}  // namespace

QuadratureResult integrate_box(const std::function<double(const double*)>& fn, const double* lo,
                               const double* hi, const QuadratureSpec& spec, int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("integrate_box: dim must be 1..3");
  for (int d = 0; d < dim; ++d) {
    if (spec.axis[d].order < 2 || spec.axis[d].order > 64)
      throw std::invalid_argument("integrate_box: order must be in [2, 64]");
    if (spec.axis[d].grading != Grading::Uniform &&
        (spec.axis[d].ratio <= 1.0 || spec.axis[d].ratio > 4.0))
      throw std::invalid_argument("integrate_box: geometric ratio must be in (1, 4]");
  }
  QuadratureResult res;
  res.value = integrate_box_once(fn, lo, hi, spec, dim, 0);
  const double check = integrate_box_once(fn, lo, hi, spec, dim, 2);
  res.error_estimate = std::abs(res.value - check);
  if (spec.target_rel_tol > 0.0 &&
      res.error_estimate > spec.target_rel_tol * std::max(std::abs(res.value), 1e-300)) {
    throw ToleranceNotReached("integrate_box: error estimate above target_rel_tol");
  }
  return res;
}

QuadratureResult integrate_3d(const std::function<double(double, double, double)>& fn,
                              const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                              const QuadratureSpec& spec) {
  return integrate_box([&fn](const double* x) { return fn(x[0], x[1], x[2]); }, lo.data(), hi.data(),
                       spec, 3);
}

}  // namespace thin_inductor
