#pragma once

#include "vem/polymesh.hpp"

#include <Eigen/Dense>

namespace vem {

/// Dimension of P_n in two variables.
inline int poly_dim(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }

/// Scaled monomial basis m_a(x) = ((x - x_E)/h_E)^a on an element, ordered
/// graded lexicographically: (0,0); (1,0),(0,1); (2,0),(1,1),(0,2); ...
/// The ordering is the contract for every projector matrix exchanged
/// between modules.
struct ScaledMonomialBasis {
  Vec2 center;
  double h = 1.0;
  int degree = 0;

  ScaledMonomialBasis() = default;
  ScaledMonomialBasis(const Vec2& center_, double h_, int degree_)
      : center(center_), h(h_), degree(degree_) {}
  ScaledMonomialBasis(const Cell& cell, int degree_)
      : center(cell.centroid), h(cell.diameter), degree(degree_) {}

  int dim() const { return poly_dim(degree); }
  // Exponent pair of basis member i.
  static std::pair<int, int> exponent(int i);
  static int index(int ax, int ay) { return poly_dim(ax + ay - 1) + ay; }

  double value(int i, const Vec2& x) const;
  Vec2 gradient(int i, const Vec2& x) const;
  Eigen::Matrix2d hessian(int i, const Vec2& x) const;

  /// Value table: rows = points, cols = basis members.
  Eigen::MatrixXd values(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const;
  /// Component tables of the gradient / Hessian at the given points.
  void gradients(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                 Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const;
  void hessians(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                Eigen::MatrixXd& dxx, Eigen::MatrixXd& dxy, Eigen::MatrixXd& dyy) const;
};

}  // namespace vem
