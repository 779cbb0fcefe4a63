#pragma once

#include <string>
#include <vector>

#include "ddnn/fem.hpp"
#include "ddnn/newton.hpp"
#include "ddnn/steklov.hpp"

namespace ddnn {

enum class MethodKind { NN, MNN1, MNN2 };

MethodKind method_from_string(const std::string& name);
std::string to_string(MethodKind method);

struct TraceRow {
  int n = 0;
  double rel_error = 0.0;
  long cum_linear_solves = 0;  ///< method solves performed up to this iterate
  int newton_iters = 0;        ///< Dirichlet Newton iterations at this step
  double update_norm = 0.0;    ///< energy norm of the interface correction (0 on the last row)
  bool aux_converged = true;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  bool failed = false;
  std::string failure;
};

struct MonolithicResult {
  Eigen::VectorXd u1, u2;  ///< reference solution restricted to each subdomain
  SolveStats stats;
};

/// Newton solve of the undecomposed discrete problem; the error reference.
MonolithicResult monolithic_solve(const ProblemDef& problem, const Mesh& mesh,
                                  const Decomposition& decomp, const SourceFn& source,
                                  const NewtonConfig& cfg, SolveCounter& counter);

/// (|u1n - u1h| + |u2n - u2h|) / (|u1h| + |u2h|) in the subdomain V-norms.
double relative_error(const VNorm& norm1, const VNorm& norm2, const Eigen::VectorXd& u1n,
                      const Eigen::VectorXd& u2n, const Eigen::VectorXd& u1h,
                      const Eigen::VectorXd& u2h);

struct RunConfig {
  MethodKind method = MethodKind::MNN1;
  double s1 = 0.19;
  double s2 = 0.19;
  int max_outer = 30;
  double stop_tol = 1e-8;
  InterfaceVector eta0;  ///< empty means zero initial guess
};

/// Outer interface iteration eta <- eta - correction(S eta). Records one row
/// per iterate n = 0, 1, ... A Newton failure inside the NN auxiliary flags
/// the row and continues from the best iterate; a Dirichlet failure ends the
/// trace with the failure recorded.
IterationTrace run(const SteklovOperator& op, const MonolithicResult& reference,
                   const RunConfig& rc, SolveCounter& counter);

}  // namespace ddnn
