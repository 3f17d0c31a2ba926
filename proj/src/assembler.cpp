#include "vem/assembler.hpp"

#include <fstream>
#include <stdexcept>

namespace vem {

Assembler::Assembler(const PolyMesh& mesh, int k, ProblemParams params)
    : mesh_(&mesh), k_(k), params_(std::move(params)), map_(build_global_map(mesh, k)) {
  const bool chi = params_.kind == ProblemKind::CHI;
  if (chi && static_cast<int>(params_.f_cell.size()) != mesh.n_cells())
    throw std::runtime_error("Assembler: CHI needs a cell-wise datum f");

  const double ts = params_.time_scale;
  const double stiff_coef =
      ts * (chi ? params_.gamma : params_.gamma * params_.gamma / params_.Pe);
  const double reaction_coef = ts * (chi ? 1.0 / params_.gamma : 1.0 / params_.Pe);

  spaces_.reserve(mesh.n_cells());
  elems_.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    spaces_.push_back(build_local_space(mesh, c, k));
    const LocalSpace& S = spaces_.back();
    ElementData& E = elems_[c];
    E.reaction_coef = reaction_coef;
    E.M = mass_matrix(S);
    E.K_const = (1.0 / params_.tau) * E.M + stiff_coef * stiffness_d2(S);
    if (params_.velocity) E.K_const += ts * convection_matrix(S, params_.velocity);
    if (chi) {
      const RegionTag tag = mesh.cells[c].tag;
      if (tag == RegionTag::Untagged)
        throw std::runtime_error("Assembler: untagged cell in a CHI run (cell " +
                                 std::to_string(c) + ")");
      E.lambda = tag == RegionTag::OutsideD ? ts * params_.lambda0 : 0.0;
      if (E.lambda > 0.0) {
        // Fidelity enters as lambda * (Pi c - f, Pi phi_i): the linear part
        // in c is lambda * mass consistency, the constant part is stored.
        const Eigen::MatrixXd Mc = mass_consistency(S);
        E.K_const += E.lambda * Mc;
        const Eigen::MatrixXd V = S.mono_vals * S.P_0;
        E.fid_lin = E.lambda * params_.f_cell[c] * (V.transpose() * S.quad.weights);
      }
    }
  }
}

Eigen::VectorXd Assembler::residual(const Eigen::VectorXd& c,
                                    const Eigen::VectorXd& c_prev) const {
  if (c.size() != map_.n_free || c_prev.size() != map_.n_free)
    throw std::runtime_error("Assembler::residual: state dimension mismatch");
  Eigen::VectorXd R = Eigen::VectorXd::Zero(map_.n_free);
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const LocalSpace& S = spaces_[cell];
    const ElementData& E = elems_[cell];
    const Eigen::VectorXd cl = gather_local(map_, cell, c);
    const Eigen::VectorXd cpl = gather_local(map_, cell, c_prev);
    Eigen::VectorXd r = E.K_const * cl - (1.0 / params_.tau) * (E.M * cpl);
    r += E.reaction_coef * reaction_residual(S, cl);
    if (E.lambda > 0.0) r -= E.fid_lin;
    const auto& scatter = map_.cell_scatter[cell];
    for (int i = 0; i < r.size(); ++i)
      for (const DofScatter& s : scatter[i]) R[s.free_index] += s.weight * r[i];
  }
  return R;
}

Eigen::SparseMatrix<double> Assembler::jacobian(const Eigen::VectorXd& c) const {
  if (c.size() != map_.n_free)
    throw std::runtime_error("Assembler::jacobian: state dimension mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const LocalSpace& S = spaces_[cell];
    const ElementData& E = elems_[cell];
    const Eigen::VectorXd cl = gather_local(map_, cell, c);
    const Eigen::MatrixXd J = E.K_const + E.reaction_coef * reaction_jacobian(S, cl);
    const auto& scatter = map_.cell_scatter[cell];
    for (int i = 0; i < J.rows(); ++i)
      for (const DofScatter& si : scatter[i])
        for (int j = 0; j < J.cols(); ++j)
          for (const DofScatter& sj : scatter[j])
            trips.emplace_back(si.free_index, sj.free_index, si.weight * sj.weight * J(i, j));
  }
  Eigen::SparseMatrix<double> A(map_.n_free, map_.n_free);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

double Assembler::total_mass(const Eigen::VectorXd& c) const {
  double m = 0.0;
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const LocalSpace& S = spaces_[cell];
    m += S.mono_int.dot(S.P_0 * gather_local(map_, cell, c));
  }
  return m;
}

double Assembler::energy(const Eigen::VectorXd& c) const {
  const bool chi = params_.kind == ProblemKind::CHI;
  const double g = params_.gamma;
  const double psi_coef = chi ? 1.0 / g : 1.0;
  const double grad_coef = chi ? 0.5 * g : 0.5 * g * g;
  double E = 0.0;
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const LocalSpace& S = spaces_[cell];
    const Eigen::VectorXd cl = gather_local(map_, cell, c);
    const int nk1 = poly_dim(k_ - 1);
    const Eigen::VectorXd vq = S.mono_vals * (S.P_0 * cl);
    const Eigen::VectorXd gx = S.mono_vals.leftCols(nk1) * (S.G0x * cl);
    const Eigen::VectorXd gy = S.mono_vals.leftCols(nk1) * (S.G0y * cl);
    for (int q = 0; q < S.quad.size(); ++q)
      E += S.quad.weights[q] * (psi_coef * MaterialLaw::psi(vq[q]) +
                                grad_coef * (gx[q] * gx[q] + gy[q] * gy[q]));
  }
  return E;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  out.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

}  // namespace vem
