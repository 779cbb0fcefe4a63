#include "ddnn/steklov.hpp"

#include <cmath>

namespace ddnn {

SteklovOperator::SteklovOperator(ProblemDef problem, const Mesh& mesh,
                                 const Decomposition& decomp, NewtonConfig cfg)
    : problem_(std::move(problem)), mesh_(mesh), decomp_(decomp), cfg_(cfg) {
  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    maps_[i] = subdomain_dof_map(mesh_, decomp_, side);
    const SparseSystem stiffness = assemble_laplace_stiffness(mesh_, maps_[i]);
    laplace_[i] = stiffness.matrix();
    neumann_[i] = std::make_unique<CholeskySolver>(stiffness);
    harmonic_[i] = std::make_unique<CholeskySolver>(
        stiffness.top_left_block(decomp_.interior_size(side)));
  }
}

ApplySResult SteklovOperator::apply(const InterfaceVector& eta, SolveCounter& counter,
                                    const ApplySResult* warm, int outer_iteration) const {
  if (eta.size() != interface_size()) {
    throw std::invalid_argument("SteklovOperator::apply: interface vector has wrong size");
  }
  const int n_if = interface_size();
  ApplySResult result;
  std::array<Eigen::VectorXd, 2> residual;

  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    const DofMap& dofs = maps_[i];
    Eigen::VectorXd& u = side == 1 ? result.u1 : result.u2;

    if (warm != nullptr && cfg_.warm_start) {
      u = side == 1 ? warm->u1 : warm->u2;
    } else {
      u = Eigen::VectorXd::Zero(dofs.size());
    }
    u.tail(n_if) = eta;

    std::string context = "dirichlet solve, subdomain " + std::to_string(side);
    if (outer_iteration >= 0) context += ", outer iteration " + std::to_string(outer_iteration);
    const SolveStats stats =
        newton_solve(problem_, mesh_, dofs, u, problem_.source, nullptr,
                     decomp_.interior_size(side), cfg_, counter, context, &residual[i]);
    result.stats.newton_iters += stats.newton_iters;
    result.stats.linear_solves += stats.linear_solves;
    result.stats.final_residual = std::max(result.stats.final_residual, stats.final_residual);
  }

  // The interface rows of the converged subdomain residuals are exactly
  // <A_i u_i - f_i, R_i e_k>; their sum is the flux jump.
  result.flux_jump.coeffs = residual[0].tail(n_if) + residual[1].tail(n_if);
  return result;
}

InterfaceVector SteklovOperator::precond_laplace(const InterfaceFunctional& d, double s1,
                                                 double s2, SolveCounter& counter) const {
  if (d.coeffs.size() != interface_size()) {
    throw std::invalid_argument("precond_laplace: functional has wrong size");
  }
  const int n_if = interface_size();
  InterfaceVector out = InterfaceVector::Zero(n_if);
  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(maps_[i].size());
    rhs.tail(n_if) = d.coeffs;
    const Eigen::VectorXd w = neumann_[i]->solve(rhs, counter);
    out += (side == 1 ? s1 : s2) * w.tail(n_if);
  }
  return out;
}

InterfaceVector SteklovOperator::precond_linearized(const InterfaceFunctional& d,
                                                    const Eigen::VectorXd& u1,
                                                    const Eigen::VectorXd& u2, double s1,
                                                    double s2, SolveCounter& counter) const {
  if (d.coeffs.size() != interface_size()) {
    throw std::invalid_argument("precond_linearized: functional has wrong size");
  }
  const int n_if = interface_size();
  InterfaceVector out = InterfaceVector::Zero(n_if);
  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    const Eigen::VectorXd& u = side == 1 ? u1 : u2;
    // TODO: reuse the symbolic factorization across outer iterations; the
    // sparsity pattern never changes.
    const SparseSystem jac = assemble_jacobian(problem_, mesh_, maps_[i], u);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(maps_[i].size());
    rhs.tail(n_if) = d.coeffs;
    const Eigen::VectorXd w =
        linear_solve(jac, rhs, counter, "linearized preconditioner, subdomain " + std::to_string(side));
    out += (side == 1 ? s1 : s2) * w.tail(n_if);
  }
  return out;
}

AuxiliaryResult SteklovOperator::nn_auxiliary(const InterfaceFunctional& d, double s1, double s2,
                                              SolveCounter& counter, int outer_iteration) const {
  if (d.coeffs.size() != interface_size()) {
    throw std::invalid_argument("nn_auxiliary: functional has wrong size");
  }
  const int n_if = interface_size();
  AuxiliaryResult result;
  result.correction = InterfaceVector::Zero(n_if);

  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(maps_[i].size());
    rhs.tail(n_if) = d.coeffs;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(maps_[i].size());

    std::string context = "neumann auxiliary solve, subdomain " + std::to_string(side);
    if (outer_iteration >= 0) context += ", outer iteration " + std::to_string(outer_iteration);
    try {
      const SolveStats stats = newton_solve(problem_, mesh_, maps_[i], w, SourceFn{}, &rhs,
                                            maps_[i].size(), cfg_, counter, context);
      result.stats.newton_iters += stats.newton_iters;
      result.stats.linear_solves += stats.linear_solves;
      result.stats.final_residual = std::max(result.stats.final_residual, stats.final_residual);
    } catch (const NewtonError& e) {
      result.converged = false;
      if (!result.message.empty()) result.message += "; ";
      result.message += e.what();
      result.stats.newton_iters += e.stats.newton_iters;
      result.stats.linear_solves += e.stats.linear_solves;
      result.stats.final_residual = std::max(result.stats.final_residual, e.stats.final_residual);
      w = e.best_iterate;
    }
    result.correction += (side == 1 ? s1 : s2) * w.tail(n_if);
  }
  return result;
}

double SteklovOperator::p_energy_norm(const InterfaceVector& eta) const {
  if (eta.size() != interface_size()) {
    throw std::invalid_argument("p_energy_norm: interface vector has wrong size");
  }
  const int n_if = interface_size();
  double energy = 0.0;
  for (int side = 1; side <= 2; ++side) {
    const int i = side - 1;
    const int n_int = decomp_.interior_size(side);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(maps_[i].size());
    u.tail(n_if) = eta;
    // Discrete harmonic extension: K_II w = -K_IG eta.
    const Eigen::VectorXd rhs = -(laplace_[i] * u).head(n_int);
    u.head(n_int) = harmonic_[i]->solve_uncounted(rhs);
    energy += u.dot(laplace_[i] * u);
  }
  return std::sqrt(std::max(0.0, energy));
}

}  // namespace ddnn
