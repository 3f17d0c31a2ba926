#pragma once

#include "vem/dof_map.hpp"
#include "vem/element_forms.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <string>

namespace vem {

enum class ProblemKind { ACH, CHI };

/// Parameters of the backward-Euler step. ACH solves
///   (1/tau) a0(c - c_prev, v) + (gamma^2/Pe) aD2(c, v) + (1/Pe) r(c; v)
///     + b(c, v) = 0,
/// CHI solves
///   (1/tau) a0(c - c_prev, v) + gamma aD2(c, v) + (1/gamma) r(c; v)
///     + lambda (c - f, v)_h = 0,
/// with lambda = lambda0 on cells outside the damaged region and 0 inside.
/// The fidelity term enters with the sign that relaxes c toward the datum
/// f outside the damaged region (the stable convention of the underlying
/// inpainting model).
struct ProblemParams {
  ProblemKind kind = ProblemKind::ACH;
  double tau = 2e-5;
  double gamma = 0.01;
  double Pe = 100.0;
  double lambda0 = 50000.0;
  double time_scale = 1.0;  // multiplies every spatial term (time compression)
  std::function<Vec2(const Vec2&)> velocity;  // optional; unset means u = 0
  std::vector<double> f_cell;                 // CHI: cell-wise datum in [-1, 1]
};

/// Global residual / Jacobian assembly over the free DoFs of the
/// constrained space. Element spaces and all state-independent element
/// matrices are built once in the constructor and reused.
class Assembler {
 public:
  Assembler(const PolyMesh& mesh, int k, ProblemParams params);

  const GlobalDofMap& dof_map() const { return map_; }
  const PolyMesh& mesh() const { return *mesh_; }
  const LocalSpace& space(int cell) const { return spaces_[cell]; }
  const ProblemParams& params() const { return params_; }
  int n_free() const { return map_.n_free; }

  Eigen::VectorXd residual(const Eigen::VectorXd& c, const Eigen::VectorXd& c_prev) const;
  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& c) const;

  /// Discrete mass m(c) = sum_E int_E Pi0_k c.
  double total_mass(const Eigen::VectorXd& c) const;
  /// Ginzburg-Landau energy with the scaling of the active problem kind:
  /// ACH: int psi(Pi c) + (gamma^2/2) |Pi grad c|^2;
  /// CHI: int (1/gamma) psi(Pi c) + (gamma/2) |Pi grad c|^2.
  double energy(const Eigen::VectorXd& c) const;

 private:
  struct ElementData {
    Eigen::MatrixXd M;        // a_h^{0,E}
    Eigen::MatrixXd K_const;  // state-independent Jacobian part
    Eigen::VectorXd fid_lin;  // lambda * f * int_E Pi phi_i (CHI)
    double lambda = 0.0;
    double reaction_coef = 0.0;
  };

  const PolyMesh* mesh_;
  int k_;
  ProblemParams params_;
  GlobalDofMap map_;
  std::vector<LocalSpace> spaces_;
  std::vector<ElementData> elems_;
};

/// Coordinate-format Matrix Market dump for external inspection.
void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path);

}  // namespace vem
