#pragma once

#include <array>
#include <memory>
#include <type_traits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ddnn/mesh.hpp"
#include "ddnn/problems.hpp"

namespace ddnn {

namespace detail {

// Default-initializing allocator: lets a vector of trivial entries be sized
// without a serial zero pass, so the parallel assembly writers do the first
// touch of every slot.
template <class T, class A = std::allocator<T>>
class default_init_allocator : public A {
 public:
  template <class U>
  struct rebind {
    using other =
        default_init_allocator<U, typename std::allocator_traits<A>::template rebind_alloc<U>>;
  };
  using A::A;

  template <class U>
  void construct(U* ptr) noexcept(std::is_nothrow_default_constructible_v<U>) {
    ::new (static_cast<void*>(ptr)) U;
  }
  template <class U, class... Args>
  void construct(U* ptr, Args&&... args) {
    std::allocator_traits<A>::construct(static_cast<A&>(*this), ptr, std::forward<Args>(args)...);
  }
};

}  // namespace detail

/// Triangle quadrature in barycentric coordinates. Weights are positive, sum
/// to one, and are scaled by the triangle area at use.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int exact_degree = 0;

  static const QuadratureRule& centroid();       ///< 1 point, degree 1
  static const QuadratureRule& edge_midpoint();  ///< 3 points, degree 2; the default
  static const QuadratureRule& six_point();      ///< 6 points, degree 4
};

/// One coordinate-format matrix entry.
struct MatrixEntry {
  int r;
  int c;
  double v;

  MatrixEntry() = default;  // trivial: sized-not-filled lists stay cheap
  MatrixEntry(int row, int col, double value) : r(row), c(col), v(value) {}

  int row() const { return r; }
  int col() const { return c; }
  double value() const { return v; }
};

/// Coordinate-format sparse matrix. Duplicate entries are summed on export.
struct SparseSystem {
  int dimension = 0;
  std::vector<MatrixEntry, detail::default_init_allocator<MatrixEntry>> entries;

  Eigen::SparseMatrix<double> matrix() const;
  /// Restriction to the leading n dofs (rows and columns < n).
  SparseSystem top_left_block(int n) const;
};

/// Constant gradients of the three nodal hat functions and the triangle area.
struct P1Basis {
  std::array<Eigen::Vector2d, 3> grad;
  double area = 0.0;
};

/// Gradients and area for a (counterclockwise) triangle. Degenerate triangles
/// are rejected.
P1Basis local_p1_basis(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c);

/// The dof set an assembly runs over: a local ordering of node ids plus the
/// triangles to integrate. Nodes absent from the map carry the value zero
/// (homogeneous Dirichlet).
struct DofMap {
  std::vector<int> nodes;      ///< local index -> node id
  std::vector<int> local;      ///< node id -> local index, -1 if absent
  std::vector<int> triangles;  ///< triangle ids to integrate over
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Subdomain dofs: interior dofs first, then interface dofs in interface order.
DofMap subdomain_dof_map(const Mesh& mesh, const Decomposition& decomp, int side);
/// All non-exterior dofs in ascending node order, over all triangles.
DofMap monolithic_dof_map(const Mesh& mesh, const Decomposition& decomp);
/// Re-index a field from one dof map to another; nodes missing in `from` read 0.
Eigen::VectorXd restrict_field(const Eigen::VectorXd& u, const DofMap& from, const DofMap& to);

// Assembly kernels. Per-triangle contributions are computed in parallel and
// merged in triangle order, so the result is independent of the number of
// OpenMP threads.

/// r_j = int alpha(x,u,grad u).grad phi_j + beta(x,u,grad u) phi_j - f phi_j dx
/// for every dof j of the map. An empty source means f = 0.
Eigen::VectorXd assemble_residual(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& u, const SourceFn& source,
                                  const QuadratureRule& rule = QuadratureRule::edge_midpoint());

/// Entries int j_alpha(grad u) grad phi_k . grad phi_j + j_beta(u) phi_k phi_j dx;
/// the derivative of assemble_residual at u.
SparseSystem assemble_jacobian(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& u,
                               const QuadratureRule& rule = QuadratureRule::edge_midpoint());

SparseSystem assemble_laplace_stiffness(const Mesh& mesh, const DofMap& dofs);
SparseSystem assemble_mass(const Mesh& mesh, const DofMap& dofs);
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const SourceFn& source,
                              const QuadratureRule& rule = QuadratureRule::edge_midpoint());

double l2_norm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u);
double h1_seminorm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u);
/// ||u||_{L2} + |u|_{H1}.
double v_norm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u);

/// Cached mass/stiffness quadratic forms for repeated norm evaluations on a
/// fixed dof map.
class VNorm {
 public:
  VNorm(const Mesh& mesh, const DofMap& dofs);
  double l2(const Eigen::VectorXd& u) const;
  double h1semi(const Eigen::VectorXd& u) const;
  double operator()(const Eigen::VectorXd& u) const { return l2(u) + h1semi(u); }

 private:
  Eigen::SparseMatrix<double> mass_;
  Eigen::SparseMatrix<double> stiffness_;
};

namespace serial {

// Single-threaded reference implementations with identical contracts. Kept as
// the baseline the parallel kernels are tested and benchmarked against.

Eigen::VectorXd assemble_residual(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& u, const SourceFn& source,
                                  const QuadratureRule& rule = QuadratureRule::edge_midpoint());
SparseSystem assemble_jacobian(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& u,
                               const QuadratureRule& rule = QuadratureRule::edge_midpoint());
SparseSystem assemble_laplace_stiffness(const Mesh& mesh, const DofMap& dofs);
SparseSystem assemble_mass(const Mesh& mesh, const DofMap& dofs);

}  // namespace serial

}  // namespace ddnn
