#include "vem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <stdexcept>

namespace vem {

namespace {

// Golub-Welsch from the symmetric Jacobi matrix of the three-term
// recurrence. diag/offdiag sized n and n-1, mu0 = integral of the weight.
void golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0,
                  Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::runtime_error("gauss_legendre: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(0, n - 1));
  for (int i = 1; i < n; ++i) {
    const double k = i;
    off[i - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  golub_welsch(diag, off, 2.0, nodes, weights);
}

namespace {

// Gauss-Jacobi with weight (1 - x) on [-1, 1], used by the conical
// product rule on the triangle.
void gauss_jacobi_10(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const double a = 1.0, b = 0.0;
  Eigen::VectorXd diag(n), off(std::max(0, n - 1));
  for (int i = 0; i < n; ++i) {
    const double k = i;
    const double den = (2 * k + a + b) * (2 * k + a + b + 2);
    diag[i] = den == 0 ? (b - a) / (a + b + 2) : (b * b - a * a) / den;
  }
  for (int i = 1; i < n; ++i) {
    const double k = i;
    double B;
    if (i == 1)
      B = 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
    else
      B = 4 * k * (k + a) * (k + b) * (k + a + b) /
          ((2 * k + a + b) * (2 * k + a + b) * (2 * k + a + b + 1) * (2 * k + a + b - 1));
    off[i - 1] = std::sqrt(B);
  }
  golub_welsch(diag, off, 2.0, nodes, weights);  // mu0 = int_{-1}^{1} (1-x) dx = 2
}

// Conical product rule on the reference triangle (0,0)-(1,0)-(0,1),
// exact for total degree <= 2n-1 with n^2 points.
void reference_triangle_rule(int exactness, Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                             Eigen::VectorXd& w) {
  const int n = std::max(1, (exactness + 2) / 2);
  Eigen::VectorXd xu, wu, xv, wv;
  gauss_legendre(n, xu, wu);
  gauss_jacobi_10(n, xv, wv);
  pts.resize(n * n, 2);
  w.resize(n * n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      pts(idx, 0) = u * (1.0 - v);
      pts(idx, 1) = v;
      // (1-v)/2 of the Jacobi weight is already in wv; remaining maps and
      // the Duffy Jacobian give 1/8 overall.
      w[idx] = wu[i] * wv[j] / 8.0;
      ++idx;
    }
  }
}

QuadratureRule fan_rule(const std::vector<Vec2>& loop, const Vec2& center, int exactness) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> ref_pts;
  Eigen::VectorXd ref_w;
  reference_triangle_rule(exactness, ref_pts, ref_w);
  const int nt = static_cast<int>(loop.size());
  const int nq = static_cast<int>(ref_w.size());
  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(nt * nq, 2);
  rule.weights.resize(nt * nq);
  for (int t = 0; t < nt; ++t) {
    const Vec2& p = loop[t];
    const Vec2& q = loop[(t + 1) % nt];
    const Vec2 e1 = p - center;
    const Vec2 e2 = q - center;
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();  // 2 * triangle area
    if (jac <= 0.0) throw std::runtime_error("polygon_quadrature: fan triangle with non-positive area");
    for (int i = 0; i < nq; ++i) {
      const Vec2 x = center + ref_pts(i, 0) * e1 + ref_pts(i, 1) * e2;
      rule.points.row(t * nq + i) = x.transpose();
      rule.weights[t * nq + i] = ref_w[i] * jac;
    }
  }
  return rule;
}

}  // namespace

QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int exactness) {
  if (loop.size() < 3) throw std::runtime_error("polygon_quadrature: need at least 3 points");
  double area = 0.0;
  Vec2 c = Vec2::Zero();
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = loop[i];
    const Vec2& q = loop[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    area += 0.5 * w;
    c += w * (p + q);
  }
  if (area <= 0.0) throw std::runtime_error("polygon_quadrature: non-positive area");
  return fan_rule(loop, c / (6.0 * area), exactness);
}

QuadratureRule element_quadrature(const PolyMesh& mesh, int cell, int exactness) {
  const Cell& c = mesh.cells.at(cell);
  std::vector<Vec2> loop;
  loop.reserve(c.vertices.size());
  for (int vi : c.vertices) loop.push_back(mesh.vertices[vi]);
  return fan_rule(loop, c.centroid, exactness);
}

QuadratureRule edge_quadrature(const Vec2& a, const Vec2& b, int exactness) {
  const int n = std::max(1, (exactness + 2) / 2);
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  const double len = (b - a).norm();
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (x[i] + 1.0);
    rule.points.row(i) = (a + t * (b - a)).transpose();
    rule.weights[i] = 0.5 * w[i] * len;
  }
  return rule;
}

QuadratureRule edge_quadrature(const PolyMesh& mesh, int edge, int exactness) {
  const Edge& e = mesh.edges.at(edge);
  return edge_quadrature(mesh.vertices[e.a], mesh.vertices[e.b], exactness);
}

}  // namespace vem
