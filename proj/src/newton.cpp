#include "ddnn/newton.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/SparseLU>

namespace ddnn {

namespace {

std::string format_residual(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

Eigen::VectorXd linear_solve(const SparseSystem& system, const Eigen::VectorXd& rhs,
                             SolveCounter& counter, const std::string& context) {
  if (system.dimension != rhs.size()) {
    throw std::invalid_argument("linear_solve: dimension mismatch");
  }
  Eigen::SparseMatrix<double> a = system.matrix();
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    throw LinearSolveError("linear_solve: factorization failed (singular system)" +
                           (context.empty() ? "" : " [" + context + "]"));
  }
  Eigen::VectorXd x = lu.solve(rhs);
  counter.add(1);
  const double res = (a * x - rhs).norm();
  if (!(res <= 1e-10 * (1.0 + rhs.norm()))) {
    throw LinearSolveError("linear_solve: residual " + format_residual(res) +
                           " exceeds tolerance" + (context.empty() ? "" : " [" + context + "]"));
  }
  return x;
}

CholeskySolver::CholeskySolver(const SparseSystem& system) {
  Eigen::SparseMatrix<double> a = system.matrix();
  a.makeCompressed();
  ldlt_.compute(a);
  if (ldlt_.info() != Eigen::Success) {
    throw LinearSolveError("CholeskySolver: factorization failed (matrix not SPD?)");
  }
}

Eigen::VectorXd CholeskySolver::solve(const Eigen::VectorXd& rhs, SolveCounter& counter) const {
  counter.add(1);
  return ldlt_.solve(rhs);
}

Eigen::VectorXd CholeskySolver::solve_uncounted(const Eigen::VectorXd& rhs) const {
  return ldlt_.solve(rhs);
}

SolveStats newton_solve(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                        Eigen::VectorXd& u, const SourceFn& source,
                        const Eigen::VectorXd* rhs_functional, int n_free,
                        const NewtonConfig& cfg, SolveCounter& counter,
                        const std::string& context, Eigen::VectorXd* final_residual) {
  SolveStats stats;
  Eigen::VectorXd best = u;
  double best_norm = std::numeric_limits<double>::infinity();

  for (int iter = 0;; ++iter) {
    Eigen::VectorXd r = assemble_residual(problem, mesh, dofs, u, source);
    if (rhs_functional != nullptr) r -= *rhs_functional;
    const double rn = r.head(n_free).norm();

    if (!std::isfinite(rn)) {
      throw NewtonError("newton_solve: residual is not finite [" + context + "]", best, stats);
    }
    if (rn < best_norm) {
      best_norm = rn;
      best = u;
    }
    stats.final_residual = rn;
    if (rn <= cfg.residual_tol) {
      if (final_residual != nullptr) *final_residual = std::move(r);
      return stats;
    }
    if (iter >= cfg.max_iters) {
      u = best;
      throw NewtonError("newton_solve: no convergence after " + std::to_string(cfg.max_iters) +
                            " iterations, residual " + format_residual(rn) + " [" + context + "]",
                        best, stats);
    }

    const SparseSystem jac = assemble_jacobian(problem, mesh, dofs, u).top_left_block(n_free);
    Eigen::VectorXd delta;
    try {
      delta = linear_solve(jac, r.head(n_free), counter,
                           context + ", newton step " + std::to_string(iter));
    } catch (const LinearSolveError& e) {
      u = best;
      throw NewtonError(e.what(), best, stats);
    }
    u.head(n_free) -= delta;
    ++stats.newton_iters;
    ++stats.linear_solves;
  }
}

DirichletResult solve_dirichlet(const ProblemDef& problem, const Mesh& mesh,
                                const Decomposition& decomp, int side, const InterfaceVector& eta,
                                const SourceFn& source, const NewtonConfig& cfg,
                                SolveCounter& counter, const Eigen::VectorXd* initial_guess,
                                int outer_iteration) {
  const DofMap dofs = subdomain_dof_map(mesh, decomp, side);
  const int n_int = decomp.interior_size(side);
  if (eta.size() != decomp.interface_size()) {
    throw std::invalid_argument("solve_dirichlet: interface data has wrong size");
  }

  DirichletResult result;
  if (initial_guess != nullptr && cfg.warm_start) {
    if (initial_guess->size() != dofs.size()) {
      throw std::invalid_argument("solve_dirichlet: initial guess has wrong size");
    }
    result.field = *initial_guess;
  } else {
    result.field = Eigen::VectorXd::Zero(dofs.size());
  }
  result.field.tail(eta.size()) = eta;  // Dirichlet dofs pinned

  std::string context = "dirichlet solve, subdomain " + std::to_string(side);
  if (outer_iteration >= 0) context += ", outer iteration " + std::to_string(outer_iteration);
  result.stats =
      newton_solve(problem, mesh, dofs, result.field, source, nullptr, n_int, cfg, counter, context);
  return result;
}

DirichletResult solve_nonlinear_neumann(const ProblemDef& problem, const Mesh& mesh,
                                        const Decomposition& decomp, int side,
                                        const Eigen::VectorXd& flux_coeffs,
                                        const NewtonConfig& cfg, SolveCounter& counter,
                                        int outer_iteration) {
  const DofMap dofs = subdomain_dof_map(mesh, decomp, side);
  if (flux_coeffs.size() != decomp.interface_size()) {
    throw std::invalid_argument("solve_nonlinear_neumann: flux data has wrong size");
  }

  // <flux, T_i v>: nonzero only against interface nodal test functions.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.size());
  rhs.tail(flux_coeffs.size()) = flux_coeffs;

  DirichletResult result;
  result.field = Eigen::VectorXd::Zero(dofs.size());
  std::string context = "neumann auxiliary solve, subdomain " + std::to_string(side);
  if (outer_iteration >= 0) context += ", outer iteration " + std::to_string(outer_iteration);
  result.stats = newton_solve(problem, mesh, dofs, result.field, SourceFn{}, &rhs, dofs.size(),
                              cfg, counter, context);
  return result;
}

}  // namespace ddnn
