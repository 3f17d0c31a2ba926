#include "vem/monomials.hpp"

#include <cmath>

namespace vem {

std::pair<int, int> ScaledMonomialBasis::exponent(int i) {
  int d = 0;
  while (poly_dim(d) <= i) ++d;
  const int ay = i - poly_dim(d - 1);
  return {d - ay, ay};
}

namespace {
double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}
}  // namespace

double ScaledMonomialBasis::value(int i, const Vec2& x) const {
  const auto [ax, ay] = exponent(i);
  const Vec2 s = (x - center) / h;
  return ipow(s.x(), ax) * ipow(s.y(), ay);
}

Vec2 ScaledMonomialBasis::gradient(int i, const Vec2& x) const {
  const auto [ax, ay] = exponent(i);
  const Vec2 s = (x - center) / h;
  Vec2 g = Vec2::Zero();
  if (ax > 0) g.x() = ax * ipow(s.x(), ax - 1) * ipow(s.y(), ay) / h;
  if (ay > 0) g.y() = ay * ipow(s.x(), ax) * ipow(s.y(), ay - 1) / h;
  return g;
}

Eigen::Matrix2d ScaledMonomialBasis::hessian(int i, const Vec2& x) const {
  const auto [ax, ay] = exponent(i);
  const Vec2 s = (x - center) / h;
  Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
  const double h2 = h * h;
  if (ax > 1) H(0, 0) = ax * (ax - 1) * ipow(s.x(), ax - 2) * ipow(s.y(), ay) / h2;
  if (ay > 1) H(1, 1) = ay * (ay - 1) * ipow(s.x(), ax) * ipow(s.y(), ay - 2) / h2;
  if (ax > 0 && ay > 0) {
    H(0, 1) = ax * ay * ipow(s.x(), ax - 1) * ipow(s.y(), ay - 1) / h2;
    H(1, 0) = H(0, 1);
  }
  return H;
}

Eigen::MatrixXd ScaledMonomialBasis::values(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const {
  Eigen::MatrixXd out(pts.rows(), dim());
  for (Eigen::Index p = 0; p < pts.rows(); ++p)
    for (int i = 0; i < dim(); ++i) out(p, i) = value(i, pts.row(p).transpose());
  return out;
}

void ScaledMonomialBasis::gradients(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                                    Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const {
  dx.resize(pts.rows(), dim());
  dy.resize(pts.rows(), dim());
  for (Eigen::Index p = 0; p < pts.rows(); ++p)
    for (int i = 0; i < dim(); ++i) {
      const Vec2 g = gradient(i, pts.row(p).transpose());
      dx(p, i) = g.x();
      dy(p, i) = g.y();
    }
}

void ScaledMonomialBasis::hessians(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                                   Eigen::MatrixXd& dxx, Eigen::MatrixXd& dxy,
                                   Eigen::MatrixXd& dyy) const {
  dxx.resize(pts.rows(), dim());
  dxy.resize(pts.rows(), dim());
  dyy.resize(pts.rows(), dim());
  for (Eigen::Index p = 0; p < pts.rows(); ++p)
    for (int i = 0; i < dim(); ++i) {
      const Eigen::Matrix2d H = hessian(i, pts.row(p).transpose());
      dxx(p, i) = H(0, 0);
      dxy(p, i) = H(0, 1);
      dyy(p, i) = H(1, 1);
    }
}

}  // namespace vem
