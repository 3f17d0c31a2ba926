#pragma once

#include "vem/polymesh.hpp"

#include <Eigen/Dense>

namespace vem {

/// Quadrature points and weights. Weights carry area (or length) units and
/// sum to |E| (or h_e).
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (int q = 0; q < size(); ++q) s += weights[q] * f(Vec2(points(q, 0), points(q, 1)));
    return s;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Rule on a polygon obtained by fanning into triangles from the centroid
/// and mapping a conical product Gauss rule of the requested exactness.
QuadratureRule element_quadrature(const PolyMesh& mesh, int cell, int exactness);

/// Same construction on an explicit star-shaped loop (fanned from its centroid).
QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int exactness);

/// Gauss-Legendre rule mapped to the segment [a, b].
QuadratureRule edge_quadrature(const Vec2& a, const Vec2& b, int exactness);
QuadratureRule edge_quadrature(const PolyMesh& mesh, int edge, int exactness);

}  // namespace vem
