// Per-triangle element computations shared by the parallel and serial
// assembly paths. Keeping one kernel guarantees both paths produce identical
// local contributions; they differ only in how triangles are scheduled.
#pragma once

#include <array>

#include "ddnn/fem.hpp"

namespace ddnn::detail {

using Local3 = std::array<double, 3>;
using Local3x3 = std::array<double, 9>;  // row-major

struct TriangleContext {
  std::array<Eigen::Vector2d, 3> corner;
  std::array<int, 3> local_dof;  // -1 if the node is outside the dof map
  std::array<double, 3> value;   // nodal values of u (0 outside the map)
  P1Basis basis;
};

inline TriangleContext triangle_context(const Mesh& mesh, const DofMap& dofs, int tri,
                                        const Eigen::VectorXd* u) {
  TriangleContext ctx;
  const auto& t = mesh.triangles[tri];
  for (int k = 0; k < 3; ++k) {
    ctx.corner[k] = mesh.nodes[t[k]];
    ctx.local_dof[k] = dofs.local[t[k]];
    ctx.value[k] = (u != nullptr && ctx.local_dof[k] >= 0) ? (*u)[ctx.local_dof[k]] : 0.0;
  }
  ctx.basis = local_p1_basis(ctx.corner[0], ctx.corner[1], ctx.corner[2]);
  return ctx;
}

inline Local3 residual_kernel(const ProblemDef& problem, const TriangleContext& ctx,
                              const SourceFn& source, const QuadratureRule& rule) {
  Eigen::Vector2d grad_u = Eigen::Vector2d::Zero();
  for (int k = 0; k < 3; ++k) grad_u += ctx.value[k] * ctx.basis.grad[k];

  Local3 r{0.0, 0.0, 0.0};
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lam = rule.points[q];
    const double w = rule.weights[q] * ctx.basis.area;
    Eigen::Vector2d x = lam[0] * ctx.corner[0] + lam[1] * ctx.corner[1] + lam[2] * ctx.corner[2];
    const double u_q = lam[0] * ctx.value[0] + lam[1] * ctx.value[1] + lam[2] * ctx.value[2];
    const Eigen::Vector2d a = problem.alpha(x, u_q, grad_u);
    const double b = problem.beta(x, u_q, grad_u);
    const double f = source ? source(x.x(), x.y()) : 0.0;
    for (int j = 0; j < 3; ++j) {
      r[j] += w * (a.dot(ctx.basis.grad[j]) + (b - f) * lam[j]);
    }
  }
  return r;
}

inline Local3x3 jacobian_kernel(const ProblemDef& problem, const TriangleContext& ctx,
                                const QuadratureRule& rule) {
  Eigen::Vector2d grad_u = Eigen::Vector2d::Zero();
  for (int k = 0; k < 3; ++k) grad_u += ctx.value[k] * ctx.basis.grad[k];

  Local3x3 m{};
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lam = rule.points[q];
    const double w = rule.weights[q] * ctx.basis.area;
    Eigen::Vector2d x = lam[0] * ctx.corner[0] + lam[1] * ctx.corner[1] + lam[2] * ctx.corner[2];
    const double u_q = lam[0] * ctx.value[0] + lam[1] * ctx.value[1] + lam[2] * ctx.value[2];
    const Eigen::Matrix2d ja = problem.j_alpha(x, grad_u);
    const double jb = problem.j_beta(x, u_q);
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        m[3 * j + k] +=
            w * ((ja * ctx.basis.grad[k]).dot(ctx.basis.grad[j]) + jb * lam[k] * lam[j]);
      }
    }
  }
  return m;
}

inline Local3x3 stiffness_kernel(const TriangleContext& ctx) {
  Local3x3 m{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      m[3 * j + k] = ctx.basis.area * ctx.basis.grad[k].dot(ctx.basis.grad[j]);
    }
  }
  return m;
}

// Edge-midpoint quadrature integrates products of hat functions exactly, so
// this is the exact P1 mass matrix.
inline Local3x3 mass_kernel(const TriangleContext& ctx, const QuadratureRule& rule) {
  Local3x3 m{};
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lam = rule.points[q];
    const double w = rule.weights[q] * ctx.basis.area;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) m[3 * j + k] += w * lam[k] * lam[j];
    }
  }
  return m;
}

inline Local3 load_kernel(const TriangleContext& ctx, const SourceFn& source,
                          const QuadratureRule& rule) {
  Local3 r{0.0, 0.0, 0.0};
  if (!source) return r;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const auto& lam = rule.points[q];
    const double w = rule.weights[q] * ctx.basis.area;
    Eigen::Vector2d x = lam[0] * ctx.corner[0] + lam[1] * ctx.corner[1] + lam[2] * ctx.corner[2];
    const double f = source(x.x(), x.y());
    for (int j = 0; j < 3; ++j) r[j] += w * f * lam[j];
  }
  return r;
}

inline void scatter_vector(const Mesh& mesh, const DofMap& dofs, int tri, const Local3& r,
                           Eigen::VectorXd& out) {
  const auto& t = mesh.triangles[tri];
  for (int j = 0; j < 3; ++j) {
    const int dof = dofs.local[t[j]];
    if (dof >= 0) out[dof] += r[j];
  }
}

inline void scatter_matrix(const Mesh& mesh, const DofMap& dofs, int tri, const Local3x3& m,
                           SparseSystem& out) {
  const auto& t = mesh.triangles[tri];
  for (int j = 0; j < 3; ++j) {
    const int row = dofs.local[t[j]];
    if (row < 0) continue;
    for (int k = 0; k < 3; ++k) {
      const int col = dofs.local[t[k]];
      if (col >= 0) out.entries.emplace_back(row, col, m[3 * j + k]);
    }
  }
}

// Entry count scatter_matrix would produce for this triangle.
inline size_t matrix_entry_count(const Mesh& mesh, const DofMap& dofs, int tri) {
  const auto& t = mesh.triangles[tri];
  size_t mapped = 0;
  for (int j = 0; j < 3; ++j) {
    if (dofs.local[t[j]] >= 0) ++mapped;
  }
  return mapped * mapped;
}

// Same entries and order as scatter_matrix, written to a preallocated slot.
inline void scatter_matrix_at(const Mesh& mesh, const DofMap& dofs, int tri, const Local3x3& m,
                              MatrixEntry* dst) {
  const auto& t = mesh.triangles[tri];
  for (int j = 0; j < 3; ++j) {
    const int row = dofs.local[t[j]];
    if (row < 0) continue;
    for (int k = 0; k < 3; ++k) {
      const int col = dofs.local[t[k]];
      if (col >= 0) *dst++ = {row, col, m[3 * j + k]};
    }
  }
}

}  // namespace ddnn::detail
