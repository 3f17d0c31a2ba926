#include "vem/element_forms.hpp"

#include <cmath>

namespace vem {

namespace {

// Values of the projected function / gradient / Hessian at the quadrature
// nodes, as (n_quad x n_dofs) evaluation matrices.
Eigen::MatrixXd proj_values(const LocalSpace& S) { return S.mono_vals * S.P_0; }

Eigen::MatrixXd grad_values_x(const LocalSpace& S) {
  return S.mono_vals.leftCols(poly_dim(S.k - 1)) * S.G0x;
}
Eigen::MatrixXd grad_values_y(const LocalSpace& S) {
  return S.mono_vals.leftCols(poly_dim(S.k - 1)) * S.G0y;
}

}  // namespace

Eigen::MatrixXd stab_matrix(const LocalSpace& S) {
  Eigen::MatrixXd F =
      Eigen::MatrixXd::Identity(S.n_dofs(), S.n_dofs()) - S.D * S.P_0;
  return F.transpose() * F;
}

Eigen::MatrixXd stiffness_d2(const LocalSpace& S) {
  const int nk2 = poly_dim(S.k - 2);
  const Eigen::MatrixXd V2 = S.mono_vals.leftCols(nk2);
  const Eigen::MatrixXd H11 = V2 * S.H11, H12 = V2 * S.H12, H22 = V2 * S.H22;
  const auto& w = S.quad.weights;
  Eigen::MatrixXd A = H11.transpose() * w.asDiagonal() * H11 +
                      2.0 * (H12.transpose() * w.asDiagonal() * H12) +
                      H22.transpose() * w.asDiagonal() * H22;
  const double h = S.diameter();
  A += (1.0 / (h * h)) * stab_matrix(S);
  return A;
}

Eigen::MatrixXd mass_consistency(const LocalSpace& S) {
  const Eigen::MatrixXd V = proj_values(S);
  return V.transpose() * S.quad.weights.asDiagonal() * V;
}

Eigen::MatrixXd mass_matrix(const LocalSpace& S) {
  const double h = S.diameter();
  return mass_consistency(S) + (h * h) * stab_matrix(S);
}

Eigen::MatrixXd convection_matrix(const LocalSpace& S,
                                  const std::function<Vec2(const Vec2&)>& u) {
  const Eigen::MatrixXd V = proj_values(S);
  const Eigen::MatrixXd Gx = grad_values_x(S), Gy = grad_values_y(S);
  const int nq = S.quad.size();
  Eigen::VectorXd ux(nq), uy(nq);
  for (int q = 0; q < nq; ++q) {
    const Vec2 uq = u(S.quad.points.row(q).transpose());
    ux[q] = uq.x();
    uy[q] = uq.y();
  }
  const auto& w = S.quad.weights;
  return V.transpose() * w.asDiagonal() *
         (ux.asDiagonal() * Gx + uy.asDiagonal() * Gy);
}

Eigen::VectorXd reaction_residual(const LocalSpace& S, const Eigen::VectorXd& z_dofs) {
  const Eigen::MatrixXd Gx = grad_values_x(S), Gy = grad_values_y(S);
  const Eigen::VectorXd zq = S.mono_vals * (S.P_0 * z_dofs);
  const Eigen::VectorXd gx = Gx * z_dofs, gy = Gy * z_dofs;
  const auto& w = S.quad.weights;
  Eigen::VectorXd wphi(zq.size());
  for (int q = 0; q < zq.size(); ++q) wphi[q] = w[q] * MaterialLaw::dphi(zq[q]);
  return Gx.transpose() * wphi.cwiseProduct(gx) + Gy.transpose() * wphi.cwiseProduct(gy);
}

Eigen::MatrixXd reaction_jacobian(const LocalSpace& S, const Eigen::VectorXd& z_dofs) {
  const Eigen::MatrixXd V = proj_values(S);
  const Eigen::MatrixXd Gx = grad_values_x(S), Gy = grad_values_y(S);
  const Eigen::VectorXd zq = S.mono_vals * (S.P_0 * z_dofs);
  const Eigen::VectorXd gx = Gx * z_dofs, gy = Gy * z_dofs;
  const auto& w = S.quad.weights;
  Eigen::VectorXd wphi(zq.size()), wphi2(zq.size());
  for (int q = 0; q < zq.size(); ++q) {
    wphi[q] = w[q] * MaterialLaw::dphi(zq[q]);
    wphi2[q] = w[q] * MaterialLaw::ddphi(zq[q]);
  }
  Eigen::MatrixXd J = Gx.transpose() * wphi.asDiagonal() * Gx +
                      Gy.transpose() * wphi.asDiagonal() * Gy;
  J += Gx.transpose() * (wphi2.cwiseProduct(gx)).asDiagonal() * V +
       Gy.transpose() * (wphi2.cwiseProduct(gy)).asDiagonal() * V;
  return J;
}

Eigen::VectorXd fidelity_residual(const LocalSpace& S, double f_cell, double lambda,
                                  const Eigen::VectorXd& c_dofs) {
  if (lambda == 0.0) return Eigen::VectorXd::Zero(S.n_dofs());
  const Eigen::MatrixXd V = proj_values(S);
  const Eigen::VectorXd cq = S.mono_vals * (S.P_0 * c_dofs);
  const Eigen::VectorXd residual_weight =
      S.quad.weights.cwiseProduct(Eigen::VectorXd::Constant(cq.size(), f_cell) - cq);
  return lambda * (V.transpose() * residual_weight);
}

Eigen::MatrixXd fidelity_jacobian(const LocalSpace& S, double lambda) {
  if (lambda == 0.0) return Eigen::MatrixXd::Zero(S.n_dofs(), S.n_dofs());
  return -lambda * mass_consistency(S);
}

Vec2 rotational_field(const Vec2& p, double beta, double eps) {
  const double r = (p - Vec2(0.5, 0.5)).norm();
  const double f = 0.5 * (1.0 + std::tanh(beta * (0.5 - eps - r)));
  return f * Vec2(2.0 * p.y() - 1.0, 1.0 - 2.0 * p.x());
}

}  // namespace vem
