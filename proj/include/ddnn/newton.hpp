#pragma once

#include <atomic>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

#include "ddnn/fem.hpp"
#include "ddnn/mesh.hpp"
#include "ddnn/problems.hpp"

namespace ddnn {

struct NewtonConfig {
  double residual_tol = 1e-10;  ///< Euclidean norm of the free-dof residual
  int max_iters = 50;
  bool warm_start = true;  ///< reuse the previous outer iterate as initial guess
};

struct SolveStats {
  int newton_iters = 0;
  long linear_solves = 0;
  double final_residual = 0.0;
};

/// Shared counter for the number of linear systems solved. Subdomain solves
/// may run concurrently, so increments are atomic.
class SolveCounter {
 public:
  void add(long n = 1) { count_.fetch_add(n, std::memory_order_relaxed); }
  long value() const { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<long> count_{0};
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearSolveError : SolverError {
  using SolverError::SolverError;
};

/// Newton failed to converge; carries the best iterate seen and its stats.
struct NewtonError : SolverError {
  NewtonError(const std::string& msg, Eigen::VectorXd best, SolveStats s)
      : SolverError(msg), best_iterate(std::move(best)), stats(s) {}
  Eigen::VectorXd best_iterate;
  SolveStats stats;
};

/// Sparse direct solve (LU). Counts one solve; checks the residual against
/// 1e-10 * (1 + |rhs|) and throws LinearSolveError with `context` otherwise.
Eigen::VectorXd linear_solve(const SparseSystem& system, const Eigen::VectorXd& rhs,
                             SolveCounter& counter, const std::string& context = {});

/// Cholesky (LDLT) factorization of a symmetric positive definite system,
/// built once and reused; each triangular solve counts as one linear solve.
class CholeskySolver {
 public:
  explicit CholeskySolver(const SparseSystem& system);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, SolveCounter& counter) const;
  /// For diagnostics that should not show up in the solve accounting.
  Eigen::VectorXd solve_uncounted(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

/// Core Newton loop: drives the residual of the first n_free dofs of `u` to
/// residual_tol, holding the trailing dofs fixed. If rhs_functional is given
/// it is subtracted from the assembled residual (Neumann data). Returns stats;
/// optionally emits the final full residual vector. Throws NewtonError on
/// non-convergence.
SolveStats newton_solve(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                        Eigen::VectorXd& u, const SourceFn& source,
                        const Eigen::VectorXd* rhs_functional, int n_free,
                        const NewtonConfig& cfg, SolveCounter& counter,
                        const std::string& context, Eigen::VectorXd* final_residual = nullptr);

struct DirichletResult {
  Eigen::VectorXd field;  ///< over interior_i dofs then interface dofs
  SolveStats stats;
};

/// Discrete solution operator F_i: solves the subdomain problem with Dirichlet
/// data eta on the interface and zero on the exterior boundary. The trace of
/// the result equals eta exactly.
DirichletResult solve_dirichlet(const ProblemDef& problem, const Mesh& mesh,
                                const Decomposition& decomp, int side, const InterfaceVector& eta,
                                const SourceFn& source, const NewtonConfig& cfg,
                                SolveCounter& counter,
                                const Eigen::VectorXd* initial_guess = nullptr,
                                int outer_iteration = -1);

/// Nonlinear Neumann auxiliary solve: finds w_i with
/// <A_i^0 w_i, v> = <flux, T_i v> for all subdomain test functions v.
DirichletResult solve_nonlinear_neumann(const ProblemDef& problem, const Mesh& mesh,
                                        const Decomposition& decomp, int side,
                                        const Eigen::VectorXd& flux_coeffs,
                                        const NewtonConfig& cfg, SolveCounter& counter,
                                        int outer_iteration = -1);

}  // namespace ddnn
