#pragma once

#include "vem/assembler.hpp"

#include <string>
#include <vector>

namespace vem {

enum class LinearMethod { Direct, Gmres };

struct LinearOptions {
  LinearMethod method = LinearMethod::Direct;
  double tol = 1e-8;     // relative residual target for GMRES
  int restart = 200;
  int max_iters = 5000;  // total Krylov iterations across restarts
  bool fallback_to_direct = true;
};

struct LinearReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = true;
  bool used_fallback = false;
};

/// Block-Jacobi preconditioner with per-element DoF blocks; overlapping
/// DoFs are owned by the first element that touches them.
class BlockJacobi {
 public:
  BlockJacobi(const Eigen::SparseMatrix<double>& A, const GlobalDofMap& map);
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<Eigen::MatrixXd> inverses_;
};

/// Direct sparse solve or restarted GMRES with the block-Jacobi
/// preconditioner (map required for the GMRES path). Throws on empty rows
/// (reporting the row index) and on factorization failure; GMRES
/// stagnation falls back to the direct solver when allowed, else throws.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const LinearOptions& opts, const GlobalDofMap* map = nullptr,
                             LinearReport* report = nullptr);

struct NewtonOptions {
  double tol_rel = 1e-6;
  double abs_floor = 1e-14;
  int max_iters = 25;
  bool line_search = false;  // optional backtracking (halving, max 30)
  LinearOptions linear;
};

struct NewtonReport {
  int iterations = 0;
  int linear_iterations = 0;
  double residual_initial = 0.0;
  double residual_final = 0.0;
  std::vector<double> history;
};

/// Plain Newton on the backward-Euler residual; `c` is updated in place.
/// Throws on nonconvergence (carrying the residual history in the message)
/// and on non-finite residuals.
NewtonReport newton_solve(const Assembler& asmbl, Eigen::VectorXd& c,
                          const Eigen::VectorXd& c_prev, const NewtonOptions& opts);

struct StepRecord {
  int step;
  double time;
  double mass;
  double energy;
  int newton_its;
  int linear_its_total;
  double residual_final;
};

struct TimeLoopResult {
  Eigen::VectorXd state;
  std::vector<StepRecord> records;
  double average_newton_iterations() const;
};

using StepCallback = std::function<void(int step, double time, const Eigen::VectorXd& state)>;

/// n_steps backward-Euler steps from `initial`; each Newton solve starts
/// from the previous time level. The callback (if set) observes every
/// accepted step, including step 0 with the initial state.
TimeLoopResult run_time_loop(const Assembler& asmbl, Eigen::VectorXd initial, int n_steps,
                             const NewtonOptions& opts, const StepCallback& callback = nullptr);

/// Diagnostics CSV: one row per step, full precision, fixed column set.
void write_diagnostics_csv(const std::vector<StepRecord>& records, const std::string& path);

}  // namespace vem
