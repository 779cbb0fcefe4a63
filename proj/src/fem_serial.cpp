#include <stdexcept>
#include <string>

#include "ddnn/fem.hpp"
#include "fem_kernels.hpp"

namespace ddnn::serial {

using detail::TriangleContext;

// Straight loops over the triangle list, accumulating immediately. Scatter
// order matches the parallel merge, so both paths agree bit for bit.

Eigen::VectorXd assemble_residual(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& u, const SourceFn& source,
                                  const QuadratureRule& rule) {
  if (u.size() != dofs.size()) {
    throw std::invalid_argument("assemble_residual: field does not match dof map");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.size());
  for (int tri : dofs.triangles) {
    const TriangleContext ctx = detail::triangle_context(mesh, dofs, tri, &u);
    detail::scatter_vector(mesh, dofs, tri, detail::residual_kernel(problem, ctx, source, rule),
                           out);
  }
  return out;
}

SparseSystem assemble_jacobian(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& u, const QuadratureRule& rule) {
  if (u.size() != dofs.size()) {
    throw std::invalid_argument("assemble_jacobian: field does not match dof map");
  }
  SparseSystem out;
  out.dimension = dofs.size();
  out.entries.reserve(dofs.triangles.size() * 9);
  for (int tri : dofs.triangles) {
    const TriangleContext ctx = detail::triangle_context(mesh, dofs, tri, &u);
    detail::scatter_matrix(mesh, dofs, tri, detail::jacobian_kernel(problem, ctx, rule), out);
  }
  return out;
}

SparseSystem assemble_laplace_stiffness(const Mesh& mesh, const DofMap& dofs) {
  SparseSystem out;
  out.dimension = dofs.size();
  out.entries.reserve(dofs.triangles.size() * 9);
  for (int tri : dofs.triangles) {
    const TriangleContext ctx = detail::triangle_context(mesh, dofs, tri, nullptr);
    detail::scatter_matrix(mesh, dofs, tri, detail::stiffness_kernel(ctx), out);
  }
  return out;
}

SparseSystem assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  SparseSystem out;
  out.dimension = dofs.size();
  out.entries.reserve(dofs.triangles.size() * 9);
  for (int tri : dofs.triangles) {
    const TriangleContext ctx = detail::triangle_context(mesh, dofs, tri, nullptr);
    detail::scatter_matrix(mesh, dofs, tri,
                           detail::mass_kernel(ctx, QuadratureRule::edge_midpoint()), out);
  }
  return out;
}

}  // namespace ddnn::serial
