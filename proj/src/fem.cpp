#include "ddnn/fem.hpp"

#include <cmath>
#include <stdexcept>

#include "fem_kernels.hpp"

namespace ddnn {

using detail::Local3;
using detail::Local3x3;
using detail::TriangleContext;

const QuadratureRule& QuadratureRule::centroid() {
  static const QuadratureRule rule{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}, 1};
  return rule;
}

const QuadratureRule& QuadratureRule::edge_midpoint() {
  static const QuadratureRule rule{
      {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2};
  return rule;
}

const QuadratureRule& QuadratureRule::six_point() {
  // Strang-Fix six point rule, exact on quartics, all weights positive.
  const double a1 = 0.816847572980459, b1 = 0.091576213509771;
  const double a2 = 0.108103018168070, b2 = 0.445948490915965;
  const double w1 = 0.109951743655322, w2 = 0.223381589678011;
  static const QuadratureRule rule{{{a1, b1, b1},
                                    {b1, a1, b1},
                                    {b1, b1, a1},
                                    {a2, b2, b2},
                                    {b2, a2, b2},
                                    {b2, b2, a2}},
                                   {w1, w1, w1, w2, w2, w2},
                                   4};
  return rule;
}

Eigen::SparseMatrix<double> SparseSystem::matrix() const {
  Eigen::SparseMatrix<double> m(dimension, dimension);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

SparseSystem SparseSystem::top_left_block(int n) const {
  SparseSystem block;
  block.dimension = n;
  block.entries.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row() < n && e.col() < n) block.entries.push_back(e);
  }
  return block;
}

P1Basis local_p1_basis(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c) {
  const Eigen::Vector2d e1 = b - a;
  const Eigen::Vector2d e2 = c - a;
  const double twice_area = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(twice_area > 0.0)) {
    throw std::invalid_argument("local_p1_basis: triangle is degenerate or not counterclockwise");
  }
  P1Basis basis;
  basis.area = 0.5 * twice_area;
  // grad of the hat at vertex k is the inward normal of the opposite edge
  // scaled by 1/(2A).
  basis.grad[1] = Eigen::Vector2d(e2.y(), -e2.x()) / twice_area;
  basis.grad[2] = Eigen::Vector2d(-e1.y(), e1.x()) / twice_area;
  basis.grad[0] = -basis.grad[1] - basis.grad[2];
  return basis;
}

DofMap subdomain_dof_map(const Mesh& mesh, const Decomposition& decomp, int side) {
  DofMap map;
  map.nodes = decomp.interior_dofs[side - 1];
  map.nodes.insert(map.nodes.end(), decomp.interface_dofs.begin(), decomp.interface_dofs.end());
  map.local.assign(static_cast<size_t>(mesh.node_count()), -1);
  for (int i = 0; i < map.size(); ++i) map.local[map.nodes[i]] = i;
  map.triangles = decomp.subdomain_triangles[side - 1];
  return map;
}

DofMap monolithic_dof_map(const Mesh& mesh, const Decomposition& decomp) {
  DofMap map;
  map.local.assign(static_cast<size_t>(mesh.node_count()), -1);
  for (int v = 0; v < mesh.node_count(); ++v) {
    if (decomp.node_class[v] != NodeClass::Exterior) {
      map.local[v] = static_cast<int>(map.nodes.size());
      map.nodes.push_back(v);
    }
  }
  map.triangles.resize(static_cast<size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) map.triangles[t] = t;
  return map;
}

Eigen::VectorXd restrict_field(const Eigen::VectorXd& u, const DofMap& from, const DofMap& to) {
  if (u.size() != from.size()) {
    throw std::invalid_argument("restrict_field: field does not match source dof map");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(to.size());
  for (int i = 0; i < to.size(); ++i) {
    const int src = from.local[to.nodes[i]];
    if (src >= 0) out[i] = u[src];
  }
  return out;
}

namespace {

void check_field(const DofMap& dofs, const Eigen::VectorXd& u, const char* op) {
  if (u.size() != dofs.size()) {
    throw std::invalid_argument(std::string(op) + ": field has " + std::to_string(u.size()) +
                                " entries, dof map has " + std::to_string(dofs.size()));
  }
}

// Two-phase assembly: local contributions in parallel, then a serial merge in
// triangle order. Only the local values are kept between the phases.
template <typename Kernel>
Eigen::VectorXd assemble_vector(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd* u,
                                Kernel&& kernel) {
  const int nt = static_cast<int>(dofs.triangles.size());
  std::vector<Local3> local(nt);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < nt; ++idx) {
    local[idx] = kernel(detail::triangle_context(mesh, dofs, dofs.triangles[idx], u));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.size());
  for (int idx = 0; idx < nt; ++idx) {
    detail::scatter_vector(mesh, dofs, dofs.triangles[idx], local[idx], out);
  }
  return out;
}

// Matrix assembly writes each triangle's entries into its own slot of the
// triplet list, sized by a prefix scan over the entry counts. The list comes
// out in triangle order, matching the serial path entry for entry.
template <typename Kernel>
SparseSystem assemble_matrix(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd* u,
                             Kernel&& kernel) {
  const int nt = static_cast<int>(dofs.triangles.size());
  std::vector<size_t> offset(nt + 1, 0);
  for (int idx = 0; idx < nt; ++idx) {
    offset[idx + 1] = offset[idx] + detail::matrix_entry_count(mesh, dofs, dofs.triangles[idx]);
  }

  SparseSystem out;
  out.dimension = dofs.size();
  out.entries.resize(offset[nt]);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < nt; ++idx) {
    const int tri = dofs.triangles[idx];
    detail::scatter_matrix_at(mesh, dofs, tri,
                              kernel(detail::triangle_context(mesh, dofs, tri, u)),
                              out.entries.data() + offset[idx]);
  }
  return out;
}

}  // namespace

Eigen::VectorXd assemble_residual(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                                  const Eigen::VectorXd& u, const SourceFn& source,
                                  const QuadratureRule& rule) {
  check_field(dofs, u, "assemble_residual");
  return assemble_vector(mesh, dofs, &u, [&](const TriangleContext& ctx) {
    return detail::residual_kernel(problem, ctx, source, rule);
  });
}

SparseSystem assemble_jacobian(const ProblemDef& problem, const Mesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& u, const QuadratureRule& rule) {
  check_field(dofs, u, "assemble_jacobian");
  return assemble_matrix(mesh, dofs, &u, [&](const TriangleContext& ctx) {
    return detail::jacobian_kernel(problem, ctx, rule);
  });
}

SparseSystem assemble_laplace_stiffness(const Mesh& mesh, const DofMap& dofs) {
  return assemble_matrix(mesh, dofs, nullptr,
                         [&](const TriangleContext& ctx) { return detail::stiffness_kernel(ctx); });
}

SparseSystem assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  return assemble_matrix(mesh, dofs, nullptr, [&](const TriangleContext& ctx) {
    return detail::mass_kernel(ctx, QuadratureRule::edge_midpoint());
  });
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const SourceFn& source,
                              const QuadratureRule& rule) {
  return assemble_vector(mesh, dofs, nullptr, [&](const TriangleContext& ctx) {
    return detail::load_kernel(ctx, source, rule);
  });
}

double l2_norm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u) {
  check_field(dofs, u, "l2_norm");
  const Eigen::SparseMatrix<double> m = assemble_mass(mesh, dofs).matrix();
  return std::sqrt(std::max(0.0, u.dot(m * u)));
}

double h1_seminorm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u) {
  check_field(dofs, u, "h1_seminorm");
  const Eigen::SparseMatrix<double> k = assemble_laplace_stiffness(mesh, dofs).matrix();
  return std::sqrt(std::max(0.0, u.dot(k * u)));
}

double v_norm(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u) {
  return l2_norm(mesh, dofs, u) + h1_seminorm(mesh, dofs, u);
}

VNorm::VNorm(const Mesh& mesh, const DofMap& dofs)
    : mass_(assemble_mass(mesh, dofs).matrix()),
      stiffness_(assemble_laplace_stiffness(mesh, dofs).matrix()) {}

double VNorm::l2(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(mass_ * u)));
}

double VNorm::h1semi(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(stiffness_ * u)));
}

}  // namespace ddnn
