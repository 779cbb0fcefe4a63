#include "ddnn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ddnn {

namespace {

int grid_steps(double length, double h, const char* what) {
  const double ratio = length / h;
  const long long k = std::llround(ratio);
  if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " = " + std::to_string(length) +
                                " is not an integer multiple of h = " + std::to_string(h));
  }
  return static_cast<int>(k);
}

// Index of the interior grid line at coordinate value, or throws.
int grid_line(const Mesh& mesh, double value, int n_cells, const char* what) {
  const long long k = std::llround(value / mesh.h);
  if (std::abs(value - static_cast<double>(k) * mesh.h) > 1e-9 || k <= 0 ||
      k >= n_cells) {
    throw std::invalid_argument(std::string(what) + " = " + std::to_string(value) +
                                " is not an interior grid line of the mesh");
  }
  return static_cast<int>(k);
}

// Shared tail of every decomposition: node classes from triangle adjacency,
// interface/interior dof lists, trace index, per-subdomain triangle lists.
Decomposition classify(const Mesh& mesh, std::vector<int> subdomain_of_triangle) {
  const int nv = mesh.node_count();
  Decomposition d;
  d.subdomain_of_triangle = std::move(subdomain_of_triangle);

  std::vector<unsigned char> touches(static_cast<size_t>(nv), 0);  // bit 0: side 1, bit 1: side 2
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const unsigned char bit = d.subdomain_of_triangle[t] == 1 ? 1 : 2;
    for (int v : mesh.triangles[t]) touches[v] |= bit;
    d.subdomain_triangles[d.subdomain_of_triangle[t] - 1].push_back(t);
  }

  d.node_class.resize(nv);
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      const int v = mesh.node_index(i, j);
      if (i == 0 || i == mesh.nx || j == 0 || j == mesh.ny) {
        d.node_class[v] = NodeClass::Exterior;
      } else if (touches[v] == 3) {
        d.node_class[v] = NodeClass::Interface;
      } else if (touches[v] == 1) {
        d.node_class[v] = NodeClass::Interior1;
      } else {
        d.node_class[v] = NodeClass::Interior2;
      }
    }
  }

  for (int v = 0; v < nv; ++v) {
    if (d.node_class[v] == NodeClass::Interior1) d.interior_dofs[0].push_back(v);
    if (d.node_class[v] == NodeClass::Interior2) d.interior_dofs[1].push_back(v);
    if (d.node_class[v] == NodeClass::Interface) d.interface_dofs.push_back(v);
  }
  return d;
}

void build_trace_index(const Mesh& mesh, Decomposition& d) {
  d.trace_index.assign(static_cast<size_t>(mesh.node_count()), -1);
  for (int k = 0; k < d.interface_size(); ++k) d.trace_index[d.interface_dofs[k]] = k;
}

}  // namespace

Mesh build_rect_mesh(double width, double height, double h) {
  if (width <= 0 || height <= 0 || h <= 0) {
    throw std::invalid_argument("mesh dimensions and h must be positive");
  }
  Mesh mesh;
  mesh.h = h;
  mesh.width = width;
  mesh.height = height;
  mesh.nx = grid_steps(width, h, "width");
  mesh.ny = grid_steps(height, h, "height");

  mesh.nodes.reserve(static_cast<size_t>(mesh.nx + 1) * (mesh.ny + 1));
  for (int j = 0; j <= mesh.ny; ++j) {
    for (int i = 0; i <= mesh.nx; ++i) {
      mesh.nodes.emplace_back(i * h, j * h);
    }
  }

  mesh.triangles.reserve(static_cast<size_t>(2) * mesh.nx * mesh.ny);
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int v00 = mesh.node_index(i, j);
      const int v10 = mesh.node_index(i + 1, j);
      const int v01 = mesh.node_index(i, j + 1);
      const int v11 = mesh.node_index(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

Decomposition decompose_vertical(const Mesh& mesh, double x_split) {
  const int k = grid_line(mesh, x_split, mesh.nx, "x_split");

  // Triangles of cell column ci lie entirely on one side of x = k*h.
  std::vector<int> side(static_cast<size_t>(mesh.triangle_count()));
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int t = 2 * (j * mesh.nx + i);
      side[t] = side[t + 1] = i < k ? 1 : 2;
    }
  }

  Decomposition d = classify(mesh, std::move(side));
  // Interface dofs ordered by ascending y.
  std::sort(d.interface_dofs.begin(), d.interface_dofs.end(), [&](int a, int b) {
    return mesh.nodes[a].y() < mesh.nodes[b].y();
  });
  build_trace_index(mesh, d);
  return d;
}

Decomposition decompose_staircase(const Mesh& mesh, double x_lo, double y_step, double x_hi) {
  const int ka = grid_line(mesh, x_lo, mesh.nx, "x_lo");
  const int kc = grid_line(mesh, x_hi, mesh.nx, "x_hi");
  const int kb = grid_line(mesh, y_step, mesh.ny, "y_step");
  if (ka >= kc) throw std::invalid_argument("staircase requires x_lo < x_hi");

  std::vector<int> side(static_cast<size_t>(mesh.triangle_count()));
  for (int j = 0; j < mesh.ny; ++j) {
    const int cut = j < kb ? ka : kc;
    for (int i = 0; i < mesh.nx; ++i) {
      const int t = 2 * (j * mesh.nx + i);
      side[t] = side[t + 1] = i < cut ? 1 : 2;
    }
  }

  Decomposition d = classify(mesh, std::move(side));
  // Order interface dofs by arc length along the polyline
  // (x_lo,0) -> (x_lo,y_step) -> (x_hi,y_step) -> (x_hi,height).
  auto arc = [&](int v) {
    const double x = mesh.nodes[v].x();
    const double y = mesh.nodes[v].y();
    if (std::abs(x - x_lo) < 0.5 * mesh.h && y <= y_step) return y;
    if (std::abs(y - y_step) < 0.5 * mesh.h) return y_step + (x - x_lo);
    return y_step + (x_hi - x_lo) + (y - y_step);
  };
  std::sort(d.interface_dofs.begin(), d.interface_dofs.end(),
            [&](int a, int b) { return arc(a) < arc(b); });
  build_trace_index(mesh, d);
  return d;
}

InterfaceVector trace(const Decomposition& decomp, int side, const SubdomainField& u) {
  const int n_if = decomp.interface_size();
  if (u.size() != decomp.subdomain_size(side)) {
    throw std::invalid_argument("trace: field has " + std::to_string(u.size()) +
                                " entries, subdomain " + std::to_string(side) + " has " +
                                std::to_string(decomp.subdomain_size(side)) + " dofs");
  }
  return u.tail(n_if);
}

SubdomainField extension_by_zero(const Decomposition& decomp, int side, const InterfaceVector& eta) {
  const int n_if = decomp.interface_size();
  if (eta.size() != n_if) {
    throw std::invalid_argument("extension_by_zero: interface vector has " +
                                std::to_string(eta.size()) + " entries, expected " +
                                std::to_string(n_if));
  }
  SubdomainField u = SubdomainField::Zero(decomp.subdomain_size(side));
  u.tail(n_if) = eta;
  return u;
}

void dump_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  for (const auto& p : mesh.nodes) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace ddnn
