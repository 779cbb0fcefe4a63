#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace ddnn {

/// Conforming triangulation of the axis-aligned rectangle [0,width]x[0,height].
/// Structured grid of square cells of edge length h, each cell split into two
/// counterclockwise triangles along the lower-left to upper-right diagonal.
struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
  double h = 0.0;  ///< nominal mesh width (cell edge length)
  double width = 0.0;
  double height = 0.0;
  int nx = 0;  ///< number of cells in x direction
  int ny = 0;  ///< number of cells in y direction

  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

/// Builds the structured mesh. width/h and height/h must be integers
/// (within 1e-9); anything else is rejected.
Mesh build_rect_mesh(double width, double height, double h);

enum class NodeClass : unsigned char { Interior1, Interior2, Interface, Exterior };

/// Two-subdomain split of a mesh. Interface dofs are the nodes shared by both
/// subdomains that do not lie on the exterior boundary, ordered along the
/// interface polyline.
struct Decomposition {
  std::vector<int> subdomain_of_triangle;               ///< per triangle, 1 or 2
  std::vector<NodeClass> node_class;                    ///< per node
  std::vector<int> interface_dofs;                      ///< node ids along the interface
  std::array<std::vector<int>, 2> interior_dofs;        ///< node ids per subdomain, ascending
  std::vector<int> trace_index;                         ///< node id -> interface position, -1 otherwise
  std::array<std::vector<int>, 2> subdomain_triangles;  ///< triangle ids per subdomain

  int interface_size() const { return static_cast<int>(interface_dofs.size()); }
  int interior_size(int side) const { return static_cast<int>(interior_dofs[side - 1].size()); }
  int subdomain_size(int side) const { return interior_size(side) + interface_size(); }
};

/// Straight vertical interface at x = x_split, which must be an interior grid
/// line of the mesh. Interface dofs are ordered by ascending y.
Decomposition decompose_vertical(const Mesh& mesh, double x_split);

/// One-step staircase interface: x = x_lo below y = y_step, x = x_hi above,
/// joined by a horizontal segment. Produces two L-shaped subdomains. All three
/// parameters must be grid-aligned and satisfy 0 < x_lo < x_hi < width.
/// Interface dofs are ordered by arc length along the polyline.
Decomposition decompose_staircase(const Mesh& mesh, double x_lo, double y_step, double x_hi);

using InterfaceVector = Eigen::VectorXd;  ///< coefficients on interface dofs
using SubdomainField = Eigen::VectorXd;   ///< coefficients on interior_i dofs, then interface dofs

/// Restriction of a subdomain field to its interface coefficients.
InterfaceVector trace(const Decomposition& decomp, int side, const SubdomainField& u);

/// Right inverse of trace: eta on interface dofs, zero on interior dofs.
SubdomainField extension_by_zero(const Decomposition& decomp, int side, const InterfaceVector& eta);

/// Debug dump: one "x y" line per node, then one "i j k" line per triangle.
void dump_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace ddnn
