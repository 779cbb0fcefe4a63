#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace ddnn {

using SourceFn = std::function<double(double x, double y)>;

/// Coefficient structure of  -div alpha(x, u, grad u) + beta(x, u, grad u) = f
/// with homogeneous Dirichlet boundary conditions. j_alpha is the Jacobian of
/// alpha with respect to the gradient argument, j_beta the derivative of beta
/// with respect to the value argument; both feed Newton's method and the
/// linearized interface preconditioner.
struct ProblemDef {
  std::string name;
  std::function<Eigen::Vector2d(const Eigen::Vector2d& x, double y, const Eigen::Vector2d& z)> alpha;
  std::function<double(const Eigen::Vector2d& x, double y, const Eigen::Vector2d& z)> beta;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d& x, const Eigen::Vector2d& z)> j_alpha;
  std::function<double(const Eigen::Vector2d& x, double y)> j_beta;
  SourceFn source;          ///< right-hand side f(x, y)
  bool semilinear = false;  ///< alpha linear in the gradient, beta independent of it
};

/// f(x, y) = x y (3 - x)(2 - y). Vanishes on the boundary of [0,3]x[0,2],
/// the default benchmark domain.
double default_source(double x, double y);

/// -Laplace u = f. The linear reference case.
ProblemDef laplace();

/// -Laplace u + |u|u = f.
ProblemDef semilinear_reaction();

/// -div(grad u + gamma sin(|grad u|) (1,1)^T) = f. Quasilinear for gamma != 0;
/// gamma must be small for the operator to stay monotone.
ProblemDef quasilinear_sin(double gamma = 0.1);

/// -div(|grad u|^{p-2} grad u) + u = f, p >= 2. The Jacobian is regularized
/// near grad u = 0; the residual uses the exact coefficients, so converged
/// solutions are unaffected.
ProblemDef p_laplace(double p);

/// Lookup by name: "laplace" | "semilinear" | "quasilinear-sin" | "p-laplace".
ProblemDef make_problem(const std::string& name, double gamma = 0.1, double p = 3.0);

}  // namespace ddnn
