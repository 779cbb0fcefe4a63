#pragma once

#include <memory>
#include <string>

#include "ddnn/fem.hpp"
#include "ddnn/mesh.hpp"
#include "ddnn/newton.hpp"
#include "ddnn/problems.hpp"

namespace ddnn {

/// Element of the dual interface space: coefficients of a functional against
/// the interface nodal test functions.
struct InterfaceFunctional {
  Eigen::VectorXd coeffs;
};

/// Which auxiliary solve drives the interface update.
enum class PrecondKind { None, Laplace, Linearized };

struct ApplySResult {
  InterfaceFunctional flux_jump;  ///< coefficients of S^h eta
  Eigen::VectorXd u1, u2;         ///< the two Dirichlet solves F_i eta
  SolveStats stats;               ///< combined Newton stats of both solves
};

struct AuxiliaryResult {
  InterfaceVector correction;
  SolveStats stats;
  bool converged = true;
  std::string message;
};

/// Discrete Steklov-Poincare residual and the three auxiliary updates, with
/// the subdomain Laplace factorizations built once and reused across the
/// outer iteration.
class SteklovOperator {
 public:
  SteklovOperator(ProblemDef problem, const Mesh& mesh, const Decomposition& decomp,
                  NewtonConfig cfg = {});

  /// S^h eta: Dirichlet-solves both subdomains and evaluates the flux jump
  /// d_k = sum_i <A_i u_i - f_i, R_i e_k>. Optionally warm-starts from a
  /// previous result.
  ApplySResult apply(const InterfaceVector& eta, SolveCounter& counter,
                     const ApplySResult* warm = nullptr, int outer_iteration = -1) const;

  /// Laplace Neumann preconditioner: s1 T w1 + s2 T w2 with
  /// int grad w_i . grad v = <d, T_i v>. Two counted solves.
  InterfaceVector precond_laplace(const InterfaceFunctional& d, double s1, double s2,
                                  SolveCounter& counter) const;

  /// Same Neumann solves for the equation linearized at the current Dirichlet
  /// solutions u1, u2. Two counted solves.
  InterfaceVector precond_linearized(const InterfaceFunctional& d, const Eigen::VectorXd& u1,
                                     const Eigen::VectorXd& u2, double s1, double s2,
                                     SolveCounter& counter) const;

  /// Standard nonlinear Neumann auxiliary solves. On Newton failure the best
  /// available iterate is used and the result is flagged unconverged.
  AuxiliaryResult nn_auxiliary(const InterfaceFunctional& d, double s1, double s2,
                               SolveCounter& counter, int outer_iteration = -1) const;

  /// sqrt(<P eta, eta>) with P the two-sided Laplace Steklov-Poincare
  /// operator: the harmonic-extension energy norm. Solves are not counted
  /// (diagnostic, not part of any method).
  double p_energy_norm(const InterfaceVector& eta) const;

  int interface_size() const { return decomp_.interface_size(); }
  const DofMap& subdomain_map(int side) const { return maps_[side - 1]; }
  const Mesh& mesh() const { return mesh_; }
  const Decomposition& decomposition() const { return decomp_; }
  const ProblemDef& problem() const { return problem_; }
  const NewtonConfig& newton_config() const { return cfg_; }

 private:
  ProblemDef problem_;
  const Mesh& mesh_;
  const Decomposition& decomp_;
  NewtonConfig cfg_;
  std::array<DofMap, 2> maps_;
  std::array<Eigen::SparseMatrix<double>, 2> laplace_;      // full subdomain stiffness
  std::array<std::unique_ptr<CholeskySolver>, 2> neumann_;  // factorization of laplace_
  std::array<std::unique_ptr<CholeskySolver>, 2> harmonic_; // interior block factorization
};

}  // namespace ddnn
