#include "ddnn/iteration.hpp"

#include <stdexcept>

namespace ddnn {

MethodKind method_from_string(const std::string& name) {
  if (name == "nn") return MethodKind::NN;
  if (name == "mnn1") return MethodKind::MNN1;
  if (name == "mnn2") return MethodKind::MNN2;
  throw std::invalid_argument("unknown method \"" + name + "\" (expected nn, mnn1 or mnn2)");
}

std::string to_string(MethodKind method) {
  switch (method) {
    case MethodKind::NN: return "nn";
    case MethodKind::MNN1: return "mnn1";
    case MethodKind::MNN2: return "mnn2";
  }
  return "?";
}

MonolithicResult monolithic_solve(const ProblemDef& problem, const Mesh& mesh,
                                  const Decomposition& decomp, const SourceFn& source,
                                  const NewtonConfig& cfg, SolveCounter& counter) {
  const DofMap all = monolithic_dof_map(mesh, decomp);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(all.size());
  MonolithicResult result;
  result.stats =
      newton_solve(problem, mesh, all, u, source, nullptr, all.size(), cfg, counter, "monolithic solve");
  result.u1 = restrict_field(u, all, subdomain_dof_map(mesh, decomp, 1));
  result.u2 = restrict_field(u, all, subdomain_dof_map(mesh, decomp, 2));
  return result;
}

double relative_error(const VNorm& norm1, const VNorm& norm2, const Eigen::VectorXd& u1n,
                      const Eigen::VectorXd& u2n, const Eigen::VectorXd& u1h,
                      const Eigen::VectorXd& u2h) {
  const double denom = norm1(u1h) + norm2(u2h);
  if (denom == 0.0) {
    throw std::invalid_argument("relative_error: reference solution is zero");
  }
  return (norm1(u1n - u1h) + norm2(u2n - u2h)) / denom;
}

IterationTrace run(const SteklovOperator& op, const MonolithicResult& reference,
                   const RunConfig& rc, SolveCounter& counter) {
  if (!(rc.s1 > 0.0 && rc.s2 > 0.0)) throw std::invalid_argument("run: s1, s2 must be positive");
  if (rc.max_outer < 1) throw std::invalid_argument("run: max_outer must be at least 1");

  const VNorm norm1(op.mesh(), op.subdomain_map(1));
  const VNorm norm2(op.mesh(), op.subdomain_map(2));

  InterfaceVector eta =
      rc.eta0.size() > 0 ? rc.eta0 : InterfaceVector::Zero(op.interface_size());
  if (eta.size() != op.interface_size()) {
    throw std::invalid_argument("run: eta0 has wrong size");
  }

  IterationTrace trace;
  ApplySResult current;
  bool have_previous = false;

  for (int n = 0; n <= rc.max_outer; ++n) {
    try {
      current = op.apply(eta, counter, have_previous ? &current : nullptr, n);
      have_previous = true;
    } catch (const SolverError& e) {
      trace.failed = true;
      trace.failure = e.what();
      break;
    }

    TraceRow row;
    row.n = n;
    row.rel_error = relative_error(norm1, norm2, current.u1, current.u2, reference.u1, reference.u2);
    row.newton_iters = current.stats.newton_iters;
    row.cum_linear_solves = counter.value();

    if (row.rel_error < rc.stop_tol || n == rc.max_outer) {
      trace.rows.push_back(row);
      break;
    }

    InterfaceVector correction;
    switch (rc.method) {
      case MethodKind::NN: {
        const AuxiliaryResult aux =
            op.nn_auxiliary(current.flux_jump, rc.s1, rc.s2, counter, n);
        correction = aux.correction;
        if (!aux.converged) {
          row.aux_converged = false;
          trace.failed = true;
          if (trace.failure.empty()) trace.failure = aux.message;
        }
        break;
      }
      case MethodKind::MNN1:
        try {
          correction = op.precond_laplace(current.flux_jump, rc.s1, rc.s2, counter);
        } catch (const SolverError& e) {
          trace.failed = true;
          trace.failure = e.what();
          trace.rows.push_back(row);
          return trace;
        }
        break;
      case MethodKind::MNN2:
        try {
          correction = op.precond_linearized(current.flux_jump, current.u1, current.u2, rc.s1,
                                             rc.s2, counter);
        } catch (const SolverError& e) {
          trace.failed = true;
          trace.failure = e.what();
          trace.rows.push_back(row);
          return trace;
        }
        break;
    }

    row.update_norm = op.p_energy_norm(correction);
    trace.rows.push_back(row);
    eta -= correction;
  }
  return trace;
}

}  // namespace ddnn
