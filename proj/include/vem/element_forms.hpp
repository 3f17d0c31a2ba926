#pragma once

#include "vem/local_space.hpp"

namespace vem {

/// Double-well potential psi(x) = (1 - x^2)^2 / 4 and its derivatives.
/// phi = psi' drives the chemical potential; phi' and phi'' feed Newton.
struct MaterialLaw {
  static double psi(double x) {
    const double s = 1.0 - x * x;
    return 0.25 * s * s;
  }
  static double phi(double x) { return x * x * x - x; }
  static double dphi(double x) { return 3.0 * x * x - 1.0; }
  static double ddphi(double x) { return 6.0 * x; }
};

/// Dofi-dofi stabilization S = (I - D P_0)^T (I - D P_0). Vanishes on the
/// DoF image of P_k by construction.
Eigen::MatrixXd stab_matrix(const LocalSpace& S);

/// a_h^{D2,E}: projected-Hessian consistency plus h_E^{-2} stabilization.
Eigen::MatrixXd stiffness_d2(const LocalSpace& S);

/// a_h^{0,E}: L2-projection consistency plus h_E^2 stabilization.
Eigen::MatrixXd mass_matrix(const LocalSpace& S);

/// Consistency part of the mass form alone (no stabilization); also the
/// building block of the fidelity Jacobian and of mass diagnostics.
Eigen::MatrixXd mass_consistency(const LocalSpace& S);

/// b_h^E with the velocity sampled pointwise at the quadrature nodes:
/// B_ij = int_E u . (Pi grad phi_j) (Pi phi_i).
Eigen::MatrixXd convection_matrix(const LocalSpace& S,
                                  const std::function<Vec2(const Vec2&)>& u);

/// Semilinear reaction form r_h^E(z; z, .) and its derivative in z.
Eigen::VectorXd reaction_residual(const LocalSpace& S, const Eigen::VectorXd& z_dofs);
Eigen::MatrixXd reaction_jacobian(const LocalSpace& S, const Eigen::VectorXd& z_dofs);

/// Fidelity form l_h^E(f; c, .) = int_E lambda (f - Pi c) Pi phi_i with a
/// cell-constant datum f and weight lambda (lambda_0 outside the damaged
/// region, 0 inside). The Jacobian is -lambda * mass consistency.
Eigen::VectorXd fidelity_residual(const LocalSpace& S, double f_cell, double lambda,
                                  const Eigen::VectorXd& c_dofs);
Eigen::MatrixXd fidelity_jacobian(const LocalSpace& S, double lambda);

/// Rotational convective field u = f(r) (2y-1, 1-2x) with
/// f(r) = (1 + tanh(beta (1/2 - eps - r))) / 2, r the distance to the
/// domain center.
Vec2 rotational_field(const Vec2& p, double beta = 200.0, double eps = 0.1);

}  // namespace vem
