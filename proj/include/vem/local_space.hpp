#pragma once

#include "vem/monomials.hpp"
#include "vem/polymesh.hpp"
#include "vem/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace vem {

/// Descriptor of one local degree of freedom. Gradient DoFs carry the
/// h_xi scaling, edge normal-derivative DoFs the h_e scaling and the sign
/// of the global edge normal, so shared entities look identical from both
/// incident elements.
struct DofDescriptor {
  enum class Kind { VertexValue, VertexGradX1, VertexGradX2, EdgeNormalDeriv };
  Kind kind;
  int entity;        // global vertex or edge index
  double scale;      // h_xi or h_e
};

struct DofLayout {
  int k = 2;
  std::vector<DofDescriptor> dofs;
  int size() const { return static_cast<int>(dofs.size()); }
};

DofLayout build_dof_layout(const PolyMesh& mesh, int cell, int k);

/// Per-element projector package of the enhanced C1 space: D maps degree-k
/// monomial coefficients to DoF values; P_D2 / P_0 / G0x,G0y / H11,H12,H22
/// map DoF vectors to monomial coefficients of the H2-seminorm projection,
/// the L2 projection, the projected gradient and the projected Hessian.
/// Edge traces are cubic value / degree k-1 normal-derivative polynomials
/// in the normalized arclength t of the globally oriented edge.
struct LocalSpace {
  const PolyMesh* mesh = nullptr;
  int cell = -1;
  int k = 2;
  DofLayout layout;

  Eigen::MatrixXd D;          // n_dofs x n_k
  Eigen::MatrixXd P_D2;       // n_k x n_dofs
  Eigen::MatrixXd P_0;        // n_k x n_dofs (== P_D2 for k <= 3)
  Eigen::MatrixXd G0x, G0y;   // n_{k-1} x n_dofs
  Eigen::MatrixXd H11, H12, H22;  // n_{k-2} x n_dofs

  std::vector<Eigen::MatrixXd> value_trace;   // per local edge: 4 x n_dofs
  std::vector<Eigen::MatrixXd> normal_trace;  // per local edge: k x n_dofs

  QuadratureRule quad;        // volume rule, exactness 4k-2 by default
  Eigen::MatrixXd mono_vals;  // quad points x n_k monomial values
  Eigen::VectorXd mono_int;   // integrals of the monomials over E

  ScaledMonomialBasis basis;  // degree k

  int n_dofs() const { return layout.size(); }
  int nk() const { return poly_dim(k); }
  double diameter() const { return mesh->cells[cell].diameter; }
  double area() const { return mesh->cells[cell].area; }

  /// Value and gradient of the value / normal-derivative traces of a DoF
  /// vector on local edge i at parameter t (global edge orientation).
  double trace_value(int local_edge, double t, const Eigen::VectorXd& dofs) const;
  double trace_normal_derivative(int local_edge, double t, const Eigen::VectorXd& dofs) const;
};

/// Assembles all projector matrices for one element. Throws for k outside
/// {2, 3} (higher-order moment DoFs are not implemented) and for singular
/// local systems.
LocalSpace build_local_space(const PolyMesh& mesh, int cell, int k, int quad_exactness = -1);

/// DoF values of a smooth function (with gradient) on one element.
Eigen::VectorXd interpolate_local(const LocalSpace& space,
                                  const std::function<double(const Vec2&)>& f,
                                  const std::function<Vec2(const Vec2&)>& grad_f);

}  // namespace vem
