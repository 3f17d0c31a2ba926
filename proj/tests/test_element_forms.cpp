#include "doctest.h"

#include "vem/element_forms.hpp"
#include "vem/mesh_generators.hpp"

#include <cmath>
#include <random>

using namespace vem;

TEST_CASE("material law") {
  CHECK(MaterialLaw::phi(1.0) == 0.0);
  CHECK(MaterialLaw::phi(-1.0) == 0.0);
  CHECK(MaterialLaw::dphi(0.0) == -1.0);
  CHECK(MaterialLaw::psi(0.0) == 0.25);
  for (double x : {-0.7, 0.1, 1.3}) {
    const double d = 1e-6;
    CHECK(MaterialLaw::dphi(x) ==
          doctest::Approx((MaterialLaw::phi(x + d) - MaterialLaw::phi(x - d)) / (2 * d))
              .epsilon(1e-8));
    CHECK(MaterialLaw::phi(x) ==
          doctest::Approx((MaterialLaw::psi(x + d) - MaterialLaw::psi(x - d)) / (2 * d))
              .epsilon(1e-8));
  }
}

TEST_CASE("stabilizer kills polynomials and is PSD") {
  auto m = make_cvt_mesh(40, 7, 60);
  for (int k : {2, 3}) {
    for (int c = 0; c < m.n_cells(); c += 5) {
      auto S = build_local_space(m, c, k);
      Eigen::MatrixXd St = stab_matrix(S);
      CHECK((St - St.transpose()).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((St * S.D).cwiseAbs().maxCoeff() < 1e-11);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(St);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
  }
}

TEST_CASE("stiffness patch test and kernel") {
  auto m = make_cvt_mesh(40, 3, 60);
  for (int k : {2, 3}) {
    for (int c = 0; c < m.n_cells(); c += 7) {
      auto S = build_local_space(m, c, k);
      Eigen::MatrixXd A = stiffness_d2(S);
      auto ref = element_quadrature(m, c, 20);
      for (int a = 0; a < S.nk(); ++a)
        for (int b = a; b < S.nk(); ++b) {
          double exact = 0.0;
          for (int q = 0; q < ref.size(); ++q) {
            const Vec2 x = ref.points.row(q).transpose();
            exact += ref.weights[q] *
                     S.basis.hessian(a, x).cwiseProduct(S.basis.hessian(b, x)).sum();
          }
          const double got = S.D.col(a).dot(A * S.D.col(b));
          const double scale = S.area() / std::pow(S.diameter(), 4);
          CHECK(got == doctest::Approx(exact).epsilon(1e-11).scale(scale));
        }
      // Kernel contains (exactly) the DoF image of P_1.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      int zeros = 0;
      for (int i = 0; i < A.rows(); ++i)
        if (es.eigenvalues()[i] < 1e-10 * es.eigenvalues().maxCoeff()) ++zeros;
      CHECK(zeros == 3);
    }
  }
}

TEST_CASE("stiffness of m_20 on a single square") {
  std::vector<Vec2> verts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto m = build_mesh(verts, {{0, 1, 2, 3}});
  auto S = build_local_space(m, 0, 2);
  // D2 m_20 = [[2/h^2, 0], [0, 0]], so the energy is 4/h^4 |E| = 1 for
  // h = sqrt(2), |E| = 1.
  Eigen::MatrixXd A = stiffness_d2(S);
  const Eigen::VectorXd p = S.D.col(3);
  CHECK(p.dot(A * p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stiffness eigenvalue regression band") {
  auto m = make_cvt_mesh(100, 7, 100);
  double lo = 1e30, hi = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    auto S = build_local_space(m, c, 2);
    Eigen::MatrixXd A = stiffness_d2(S);
    const double h2 = S.diameter() * S.diameter();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h2 * A);
    for (int i = 0; i < A.rows(); ++i) {
      const double ev = es.eigenvalues()[i];
      if (ev > 1e-9 * es.eigenvalues().maxCoeff()) {
        lo = std::min(lo, ev);
        hi = std::max(hi, ev);
      }
    }
  }
  // Frozen two-sided band for the scaled spectrum on A1-valid CVT cells.
  CHECK(lo > 1e-4);
  CHECK(hi < 1e5);
}

TEST_CASE("mass patch test and positivity") {
  auto m = make_cvt_mesh(40, 11, 60);
  for (int k : {2, 3}) {
    for (int c = 0; c < m.n_cells(); c += 7) {
      auto S = build_local_space(m, c, k);
      Eigen::MatrixXd M = mass_matrix(S);
      auto ref = element_quadrature(m, c, 20);
      for (int a = 0; a < S.nk(); ++a)
        for (int b = a; b < S.nk(); ++b) {
          const double exact = ref.integrate([&](const Vec2& p) {
            return S.basis.value(a, p) * S.basis.value(b, p);
          });
          CHECK(S.D.col(a).dot(M * S.D.col(b)) ==
                doctest::Approx(exact).epsilon(1e-11).scale(S.area()));
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
      // Ones against ones gives the area.
      CHECK(S.D.col(0).dot(M * S.D.col(0)) == doctest::Approx(S.area()).epsilon(1e-12));
    }
  }
}

TEST_CASE("convection matrix") {
  auto m = make_cvt_mesh(30, 5, 60);
  auto S = build_local_space(m, 4, 2);
  Eigen::MatrixXd B0 = convection_matrix(S, [](const Vec2&) { return Vec2(0, 0); });
  CHECK(B0.cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd B = convection_matrix(S, [](const Vec2&) { return Vec2(1, 0); });
  // v = m_(1,0), w = 1: integral of (1/h) over E.
  CHECK(S.D.col(0).dot(B * S.D.col(1)) ==
        doctest::Approx(S.area() / S.diameter()).epsilon(1e-12));
}

TEST_CASE("rotational field values") {
  CHECK(rotational_field(Vec2(0.5, 0.5)).norm() == 0.0);
  const Vec2 u = rotational_field(Vec2(0.5, 0.9));
  CHECK(u.x() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(u.y() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reaction residual and jacobian") {
  auto m = make_cvt_mesh(30, 13, 60);
  for (int k : {2, 3}) {
    auto S = build_local_space(m, 6, k);
    // Constant state: gradient projects to zero, residual vanishes.
    Eigen::VectorXd zc = 0.7 * S.D.col(0);
    CHECK(reaction_residual(S, zc).cwiseAbs().maxCoeff() < 1e-13);

    // z = 0: jacobian reduces to minus the projected-gradient Gram.
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(S.n_dofs());
    Eigen::MatrixXd J0 = reaction_jacobian(S, z0);
    const int nk1 = poly_dim(k - 1);
    Eigen::MatrixXd Gx = S.mono_vals.leftCols(nk1) * S.G0x;
    Eigen::MatrixXd Gy = S.mono_vals.leftCols(nk1) * S.G0y;
    Eigen::MatrixXd Gram = Gx.transpose() * S.quad.weights.asDiagonal() * Gx +
                           Gy.transpose() * S.quad.weights.asDiagonal() * Gy;
    CHECK((J0 + Gram).cwiseAbs().maxCoeff() < 1e-12);

    // Finite-difference oracle at a random state.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd z(S.n_dofs());
    for (auto& v : z.reshaped()) v = uni(rng);
    Eigen::MatrixXd J = reaction_jacobian(S, z);
    const double d = 1e-6;
    for (int j = 0; j < S.n_dofs(); ++j) {
      Eigen::VectorXd zp = z, zm = z;
      zp[j] += d;
      zm[j] -= d;
      Eigen::VectorXd fd = (reaction_residual(S, zp) - reaction_residual(S, zm)) / (2 * d);
      CHECK((fd - J.col(j)).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("fidelity residual and jacobian") {
  auto m = make_cvt_mesh(30, 23, 60);
  auto S = build_local_space(m, 3, 2);
  const double lam = 1e5;

  // Inside the damaged region lambda = 0: everything vanishes.
  Eigen::VectorXd c = S.D.col(2);
  CHECK(fidelity_residual(S, 1.0, 0.0, c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(fidelity_jacobian(S, 0.0).cwiseAbs().maxCoeff() == 0.0);

  // c interpolating the constant datum exactly: residual = 0.
  Eigen::VectorXd cf = -1.0 * S.D.col(0);
  CHECK(fidelity_residual(S, -1.0, lam, cf).cwiseAbs().maxCoeff() < 1e-9);

  CHECK((fidelity_jacobian(S, lam) + lam * mass_consistency(S)).cwiseAbs().maxCoeff() == 0.0);

  // Finite-difference consistency of the jacobian.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd z(S.n_dofs());
  for (auto& v : z.reshaped()) v = uni(rng);
  Eigen::MatrixXd J = fidelity_jacobian(S, lam);
  const double d = 1e-6;
  for (int j = 0; j < S.n_dofs(); j += 2) {
    Eigen::VectorXd zp = z, zm = z;
    zp[j] += d;
    zm[j] -= d;
    Eigen::VectorXd fd =
        (fidelity_residual(S, 0.5, lam, zp) - fidelity_residual(S, 0.5, lam, zm)) / (2 * d);
    CHECK((fd - J.col(j)).cwiseAbs().maxCoeff() < 1e-4 * lam);
  }
}
