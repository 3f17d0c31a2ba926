#include "vem/timesolver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vem {

BlockJacobi::BlockJacobi(const Eigen::SparseMatrix<double>& A, const GlobalDofMap& map) {
  const int n = static_cast<int>(A.rows());
  std::vector<char> owned(n, 0);
  for (const auto& cell : map.cell_scatter) {
    std::vector<int> block;
    for (const auto& entries : cell)
      for (const DofScatter& s : entries)
        if (!owned[s.free_index]) {
          owned[s.free_index] = 1;
          block.push_back(s.free_index);
        }
    if (!block.empty()) blocks_.push_back(std::move(block));
  }
  inverses_.reserve(blocks_.size());
  for (const auto& block : blocks_) {
    const int m = static_cast<int>(block.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) B(i, j) = A.coeff(block[i], block[j]);
    inverses_.push_back(B.partialPivLu().inverse());
  }
}

Eigen::VectorXd BlockJacobi::apply(const Eigen::VectorXd& r) const {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(r.size());
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const auto& block = blocks_[b];
    Eigen::VectorXd rb(block.size());
    for (size_t i = 0; i < block.size(); ++i) rb[i] = r[block[i]];
    Eigen::VectorXd zb = inverses_[b] * rb;
    for (size_t i = 0; i < block.size(); ++i) z[block[i]] = zb[i];
  }
  return z;
}

namespace {

void check_rows(const Eigen::SparseMatrix<double>& A) {
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      rowsum[it.row()] += std::abs(it.value());
  for (int i = 0; i < rowsum.size(); ++i)
    if (rowsum[i] == 0.0)
      throw std::runtime_error("linear_solve: matrix row " + std::to_string(i) +
                               " is identically zero");
}

Eigen::VectorXd direct_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  check_rows(A);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("linear_solve: sparse LU factorization failed");
  Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) throw std::runtime_error("linear_solve: non-finite direct solution");
  return x;
}

// Right-preconditioned restarted GMRES; the Arnoldi residual equals the
// true residual of A x = b, so the stopping test needs no extra products.
Eigen::VectorXd gmres_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                            const BlockJacobi& prec, const LinearOptions& opts,
                            LinearReport& report) {
  const int n = static_cast<int>(b.size());
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) {
    report.converged = true;
    return x;
  }
  const int m = std::min(opts.restart, n);
  int total_iters = 0;
  double rel = 1.0;
  while (total_iters < opts.max_iters) {
    Eigen::VectorXd r = b - A * x;
    double beta = r.norm();
    rel = beta / bnorm;
    if (rel <= opts.tol) break;

    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs(m), sn(m), g = Eigen::VectorXd::Zero(m + 1);
    V.col(0) = r / beta;
    g[0] = beta;
    int j = 0;
    for (; j < m && total_iters < opts.max_iters; ++j, ++total_iters) {
      Eigen::VectorXd w = A * prec.apply(V.col(j));
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V.col(i));
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      // Apply the accumulated Givens rotations, then form a new one.
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = H(j, j) / denom;
      sn[j] = H(j + 1, j) / denom;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      rel = std::abs(g[j + 1]) / bnorm;
      if (rel <= opts.tol) {
        ++j;
        break;
      }
    }
    // Back-substitute and update x through the preconditioner.
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += prec.apply(V.leftCols(j) * y);
    if (rel <= opts.tol) break;
  }
  report.iterations = total_iters;
  report.rel_residual = (b - A * x).norm() / bnorm;
  report.converged = report.rel_residual <= opts.tol * 10.0;
  return x;
}

}  // namespace

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const LinearOptions& opts, const GlobalDofMap* map,
                             LinearReport* report) {
  LinearReport local;
  LinearReport& rep = report ? *report : local;
  if (opts.method == LinearMethod::Direct) {
    rep = LinearReport{};
    return direct_solve(A, b);
  }
  if (!map) throw std::runtime_error("linear_solve: GMRES needs the DoF map for its blocks");
  check_rows(A);
  BlockJacobi prec(A, *map);
  Eigen::VectorXd x = gmres_solve(A, b, prec, opts, rep);
  if (!rep.converged) {
    if (!opts.fallback_to_direct)
      throw std::runtime_error("linear_solve: GMRES stagnated at relative residual " +
                               std::to_string(rep.rel_residual));
    rep.used_fallback = true;
    x = direct_solve(A, b);
  }
  return x;
}

NewtonReport newton_solve(const Assembler& asmbl, Eigen::VectorXd& c,
                          const Eigen::VectorXd& c_prev, const NewtonOptions& opts) {
  NewtonReport rep;
  Eigen::VectorXd R = asmbl.residual(c, c_prev);
  if (!R.allFinite()) throw std::runtime_error("newton_solve: non-finite initial residual");
  rep.residual_initial = R.norm();
  rep.history.push_back(rep.residual_initial);
  if (rep.residual_initial < opts.abs_floor) {
    rep.residual_final = rep.residual_initial;
    return rep;
  }
  for (int it = 0; it < opts.max_iters; ++it) {
    LinearReport lin;
    Eigen::VectorXd dx = linear_solve(asmbl.jacobian(c), -R, opts.linear, &asmbl.dof_map(), &lin);
    rep.linear_iterations += lin.iterations;

    double alpha = 1.0;
    Eigen::VectorXd c_next = c + dx;
    Eigen::VectorXd R_next = asmbl.residual(c_next, c_prev);
    if (opts.line_search) {
      // The Newton direction is a descent direction for |R| whenever the
      // Jacobian solve succeeded, so deep backtracking always finds a
      // decrease away from the solver's numerical floor.
      for (int ls = 0;
           ls < 30 && (!R_next.allFinite() ||
                       R_next.norm() > (1.0 - 1e-4 * alpha) * R.norm());
           ++ls) {
        alpha *= 0.5;
        c_next = c + alpha * dx;
        R_next = asmbl.residual(c_next, c_prev);
      }
    }
    if (!R_next.allFinite()) throw std::runtime_error("newton_solve: residual diverged (NaN)");
    c = c_next;
    R = R_next;
    ++rep.iterations;
    rep.history.push_back(R.norm());
    if (R.norm() / rep.residual_initial <= opts.tol_rel || R.norm() < opts.abs_floor) {
      rep.residual_final = R.norm();
      return rep;
    }
    // Rounding-floor stagnation: once the correction is negligible against
    // the iterate, the residual sits at the assembly's numerical floor and
    // further iterations cannot improve it.
    if ((alpha * dx).norm() <= 1e-12 * std::max(1.0, c.norm())) {
      rep.residual_final = R.norm();
      return rep;
    }
  }
  std::ostringstream msg;
  msg << "newton_solve: no convergence in " << opts.max_iters << " iterations; residuals:";
  for (double h : rep.history) msg << " " << h;
  throw std::runtime_error(msg.str());
}

double TimeLoopResult::average_newton_iterations() const {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) sum += r.newton_its;
  return sum / static_cast<double>(records.size());
}

TimeLoopResult run_time_loop(const Assembler& asmbl, Eigen::VectorXd initial, int n_steps,
                             const NewtonOptions& opts, const StepCallback& callback) {
  TimeLoopResult result;
  result.state = std::move(initial);
  const double tau = asmbl.params().tau;
  if (callback) callback(0, 0.0, result.state);
  for (int n = 1; n <= n_steps; ++n) {
    Eigen::VectorXd prev = result.state;
    NewtonReport rep;
    try {
      rep = newton_solve(asmbl, result.state, prev, opts);
    } catch (const std::exception& e) {
      throw std::runtime_error("time step " + std::to_string(n) + ": " + e.what());
    }
    StepRecord rec;
    rec.step = n;
    rec.time = n * tau;
    rec.mass = asmbl.total_mass(result.state);
    rec.energy = asmbl.energy(result.state);
    rec.newton_its = rep.iterations;
    rec.linear_its_total = rep.linear_iterations;
    rec.residual_final = rep.residual_final;
    result.records.push_back(rec);
    if (callback) callback(n, rec.time, result.state);
  }
  return result;
}

void write_diagnostics_csv(const std::vector<StepRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
  out << "step,time,mass,energy,newton_its,linear_its_total,residual_final\n";
  out.precision(17);
  for (const auto& r : records)
    out << r.step << "," << r.time << "," << r.mass << "," << r.energy << "," << r.newton_its
        << "," << r.linear_its_total << "," << r.residual_final << "\n";
}

}  // namespace vem
