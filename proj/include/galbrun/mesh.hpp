// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_MESH_HPP
#define GALBRUN_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace galbrun
{

// Raised for any invalid run parameter (geometry, flow, discretization).
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

using Index = std::int64_t;

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

// Truncated duct ]-R, R[ x ]-h, h[.
struct DuctGeometry
{
  double R = 1.0;
  double h = 1.0;

  double Area() const { return 4.0 * R * h; }
};

enum class BoundaryTag : std::uint8_t
{
  WallBottom,
  WallTop,
  GammaMinus,
  GammaPlus
};

inline const char *ToString(BoundaryTag tag)
{
  switch (tag)
  {
    case BoundaryTag::WallBottom:
      return "WallBottom";
    case BoundaryTag::WallTop:
      return "WallTop";
    case BoundaryTag::GammaMinus:
      return "GammaMinus";
    case BoundaryTag::GammaPlus:
      return "GammaPlus";
  }
  return "?";
}

inline bool IsWall(BoundaryTag tag)
{
  return tag == BoundaryTag::WallBottom || tag == BoundaryTag::WallTop;
}

inline bool IsArtificial(BoundaryTag tag)
{
  return tag == BoundaryTag::GammaMinus || tag == BoundaryTag::GammaPlus;
}

// Outward normal x-component on Gamma+/-: +1 on Gamma+, -1 on Gamma-.
inline double OutwardSign(BoundaryTag tag)
{
  return tag == BoundaryTag::GammaPlus ? 1.0 : -1.0;
}

struct BoundaryEdge
{
  // Nodes ordered by increasing coordinate along the edge.
  std::array<Index, 2> nodes;
  BoundaryTag tag;
};

struct Mesh
{
  DuctGeometry geometry;
  Index nx = 0;
  Index ny = 0;
  std::vector<Point> nodes;
  std::vector<std::array<Index, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  Index NumNodes() const { return static_cast<Index>(nodes.size()); }
  Index NumTriangles() const { return static_cast<Index>(triangles.size()); }

  // Structured-grid node index.
  Index Node(Index i, Index j) const { return j * (nx + 1) + i; }

  double SignedArea(Index t) const
  {
    const auto &tri = triangles[t];
    const Point &a = nodes[tri[0]], &b = nodes[tri[1]], &c = nodes[tri[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  }

  double MinEdgeLength() const
  {
    double hmin = std::numeric_limits<double>::infinity();
    for (const auto &tri : triangles)
    {
      for (int k = 0; k < 3; k++)
      {
        const Point &a = nodes[tri[k]], &b = nodes[tri[(k + 1) % 3]];
        hmin = std::min(hmin, std::hypot(b.x - a.x, b.y - a.y));
      }
    }
    return hmin;
  }
};

// Structured triangulation of the duct: (nx+1)(ny+1) nodes numbered row by row along x,
// each cell split along its (SW, NE) diagonal.
inline Mesh BuildDuctMesh(const DuctGeometry &geom, Index nx, Index ny)
{
  if (!(geom.R > 0.0) || !(geom.h > 0.0))
  {
    throw ConfigError("duct half-length R and half-height h must be positive");
  }
  if (nx < 1 || ny < 1)
  {
    throw ConfigError("cell counts nx and ny must be at least 1");
  }

  Mesh mesh;
  mesh.geometry = geom;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.nodes.reserve((nx + 1) * (ny + 1));
  for (Index j = 0; j <= ny; j++)
  {
    // Exact endpoints so that boundary nodes sit on the boundary bit-for-bit.
    const double y = (j == ny) ? geom.h : -geom.h + 2.0 * geom.h * double(j) / double(ny);
    for (Index i = 0; i <= nx; i++)
    {
      const double x = (i == nx) ? geom.R : -geom.R + 2.0 * geom.R * double(i) / double(nx);
      mesh.nodes.push_back({x, y});
    }
  }

  mesh.triangles.reserve(2 * nx * ny);
  for (Index j = 0; j < ny; j++)
  {
    for (Index i = 0; i < nx; i++)
    {
      const Index p00 = mesh.Node(i, j), p10 = mesh.Node(i + 1, j),
                  p11 = mesh.Node(i + 1, j + 1), p01 = mesh.Node(i, j + 1);
      mesh.triangles.push_back({p00, p10, p11});
      mesh.triangles.push_back({p00, p11, p01});
    }
  }

  mesh.boundary_edges.reserve(2 * nx + 2 * ny);
  for (Index i = 0; i < nx; i++)
  {
    mesh.boundary_edges.push_back({{mesh.Node(i, 0), mesh.Node(i + 1, 0)}, BoundaryTag::WallBottom});
  }
  for (Index i = 0; i < nx; i++)
  {
    mesh.boundary_edges.push_back({{mesh.Node(i, ny), mesh.Node(i + 1, ny)}, BoundaryTag::WallTop});
  }
  for (Index j = 0; j < ny; j++)
  {
    mesh.boundary_edges.push_back({{mesh.Node(0, j), mesh.Node(0, j + 1)}, BoundaryTag::GammaMinus});
  }
  for (Index j = 0; j < ny; j++)
  {
    mesh.boundary_edges.push_back({{mesh.Node(nx, j), mesh.Node(nx, j + 1)}, BoundaryTag::GammaPlus});
  }
  return mesh;
}

// Which essential conditions are eliminated from the unknowns.
enum class Constraint : std::uint8_t
{
  None,          // no elimination; used for scalar and form-level checks
  Walls,         // xi_y = 0 on the rigid walls y = -h, y = h
  WallsAndEnds,  // additionally xi_x = 0 on x = -R, x = R (closed box)
};

// Map from (node, component) to an unknown index, with eliminated pairs marked.
class DofMap
{
public:
  static constexpr Index kConstrained = -1;

  DofMap() = default;
  DofMap(Index n_nodes, std::vector<Index> table, Index n_dofs)
    : n_nodes_(n_nodes), n_dofs_(n_dofs), table_(std::move(table))
  {
  }

  Index NumNodes() const { return n_nodes_; }
  Index NumDofs() const { return n_dofs_; }

  // component 0 = x, 1 = y.
  Index Dof(Index node, int component) const { return table_[2 * node + component]; }
  bool IsConstrained(Index node, int component) const
  {
    return Dof(node, component) == kConstrained;
  }

private:
  Index n_nodes_ = 0;
  Index n_dofs_ = 0;
  std::vector<Index> table_;
};

inline std::vector<char> WallNodeMask(const Mesh &mesh)
{
  std::vector<char> on_wall(mesh.NumNodes(), 0);
  for (const auto &edge : mesh.boundary_edges)
  {
    if (IsWall(edge.tag))
    {
      on_wall[edge.nodes[0]] = on_wall[edge.nodes[1]] = 1;
    }
  }
  return on_wall;
}

inline std::vector<char> ArtificialNodeMask(const Mesh &mesh)
{
  std::vector<char> on_gamma(mesh.NumNodes(), 0);
  for (const auto &edge : mesh.boundary_edges)
  {
    if (IsArtificial(edge.tag))
    {
      on_gamma[edge.nodes[0]] = on_gamma[edge.nodes[1]] = 1;
    }
  }
  return on_gamma;
}

// Node-major numbering, x-component before y. Corner nodes belong to the walls.
inline DofMap BuildDofMap(const Mesh &mesh, Constraint constraint = Constraint::Walls)
{
  const Index n = mesh.NumNodes();
  const auto on_wall = WallNodeMask(mesh);
  const auto on_gamma = ArtificialNodeMask(mesh);
  std::vector<Index> table(2 * n, DofMap::kConstrained);
  Index next = 0;
  for (Index node = 0; node < n; node++)
  {
    const bool fix_x = constraint == Constraint::WallsAndEnds && on_gamma[node];
    const bool fix_y = constraint != Constraint::None && on_wall[node];
    if (!fix_x)
    {
      table[2 * node] = next++;
    }
    if (!fix_y)
    {
      table[2 * node + 1] = next++;
    }
  }
  return DofMap(n, std::move(table), next);
}

}  // namespace galbrun

#endif  // GALBRUN_MESH_HPP
