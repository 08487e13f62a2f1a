#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <random>

#include "wg/mesh.hpp"
#include "wg/weak_ops.hpp"

namespace wg::testing {

/// Random triangle with a minimum-angle bound and diameter rescaled into
/// [0.5, 2] so absolute coefficient tolerances on second derivatives are
/// meaningful.
inline Mesh random_shape_regular_triangle(std::mt19937& rng, double min_angle_deg = 25.0) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> size(0.5, 2.0);
  for (;;) {
    std::array<Vec2, 3> p;
    for (Vec2& v : p) v = {coord(rng), coord(rng)};
    if (cross(p[1] - p[0], p[2] - p[0]) <= 0.0) continue;
    double diam = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        diam = std::max(diam, distance(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]));
    const double scale = size(rng) / diam;
    const Vec2 centroid = (p[0] + p[1] + p[2]) / 3.0;
    const Vec2 shift{coord(rng), coord(rng)};
    std::vector<Vertex> pts;
    for (const Vec2& v : p) {
      const Vec2 w = (v - centroid) * scale + shift;
      pts.push_back({w.x, w.y});
    }
    Mesh mesh = build_mesh(pts, {{0, 1, 2}});
    if (min_angle(mesh) >= min_angle_deg * std::numbers::pi / 180.0) return mesh;
  }
}

/// Exact fields of the monomial x^a y^b.
inline ScalarField monomial_field(int a, int b) {
  auto ipow = [](double t, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= t;
    return r;
  };
  ScalarField f;
  f.value = [=](Vec2 p) { return ipow(p.x, a) * ipow(p.y, b); };
  f.gradient = [=](Vec2 p) {
    return Vec2{a > 0 ? a * ipow(p.x, a - 1) * ipow(p.y, b) : 0.0,
                b > 0 ? b * ipow(p.x, a) * ipow(p.y, b - 1) : 0.0};
  };
  f.hessian = [=](Vec2 p) {
    return std::array<double, 3>{
        a > 1 ? a * (a - 1) * ipow(p.x, a - 2) * ipow(p.y, b) : 0.0,
        (a > 0 && b > 0) ? a * b * ipow(p.x, a - 1) * ipow(p.y, b - 1) : 0.0,
        b > 1 ? b * (b - 1) * ipow(p.x, a) * ipow(p.y, b - 2) : 0.0};
  };
  return f;
}

/// Fourth-order central finite-difference Laplacian of a scalar callback.
inline double fd_laplacian(const std::function<double(Vec2)>& f, Vec2 p, double h) {
  static constexpr std::array<double, 5> c{-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0,
                                           -1.0 / 12.0};
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double d = (i - 2) * h;
    acc += c[static_cast<size_t>(i)] * (f({p.x + d, p.y}) + f({p.x, p.y + d}));
  }
  return acc / (h * h);
}

/// Richardson-extrapolated Laplacian (two fourth-order evaluations).
inline double fd_laplacian_rich(const std::function<double(Vec2)>& f, Vec2 p, double h1,
                                double h2) {
  const double l1 = fd_laplacian(f, p, h1);
  const double l2 = fd_laplacian(f, p, h2);
  // h2 = h1/2: eliminate the h^4 term.
  return (16.0 * l2 - l1) / 15.0;
}

}  // namespace wg::testing
