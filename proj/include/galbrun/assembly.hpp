// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_ASSEMBLY_HPP
#define GALBRUN_ASSEMBLY_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "galbrun/mesh.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun
{

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

//
// Geometry of one P1 triangle: area and the constant gradients of the barycentric
// coordinates.
//
struct TriangleGeometry
{
  std::array<Point, 3> vertices;
  double area;
  std::array<Vec2, 3> grad;

  Point Map(const std::array<double, 3> &bary) const
  {
    return {bary[0] * vertices[0].x + bary[1] * vertices[1].x + bary[2] * vertices[2].x,
            bary[0] * vertices[0].y + bary[1] * vertices[1].y + bary[2] * vertices[2].y};
  }
};

inline TriangleGeometry MakeTriangleGeometry(const Point &a, const Point &b, const Point &c)
{
  TriangleGeometry g;
  g.vertices = {a, b, c};
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  g.area = 0.5 * det;
  g.grad[0] = Vec2(b.y - c.y, c.x - b.x) / det;
  g.grad[1] = Vec2(c.y - a.y, a.x - c.x) / det;
  g.grad[2] = Vec2(a.y - b.y, b.x - a.x) / det;
  return g;
}

inline TriangleGeometry MakeTriangleGeometry(const Mesh &mesh, Index t)
{
  const auto &tri = mesh.triangles[t];
  return MakeTriangleGeometry(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
}

// Local unknowns are ordered (vertex 0 x, vertex 0 y, vertex 1 x, ...).
using ElementMatrix = Eigen::Matrix<double, 6, 6>;
using EdgeMatrix = Eigen::Matrix<double, 4, 4>;

namespace element
{

inline ElementMatrix Mass(const TriangleGeometry &g)
{
  ElementMatrix K = ElementMatrix::Zero();
  for (const auto &qp : quadrature::kTriangleDegree2)
  {
    const double w = qp.weight * g.area;
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        const double v = w * qp.bary[i] * qp.bary[j];
        K(2 * i, 2 * j) += v;
        K(2 * i + 1, 2 * j + 1) += v;
      }
    }
  }
  return K;
}

// Row vectors mapping local unknowns to the (constant) divergence and scalar curl.
inline Eigen::Matrix<double, 6, 1> DivergenceRow(const TriangleGeometry &g)
{
  Eigen::Matrix<double, 6, 1> d;
  for (int k = 0; k < 3; k++)
  {
    d(2 * k) = g.grad[k].x();
    d(2 * k + 1) = g.grad[k].y();
  }
  return d;
}

inline Eigen::Matrix<double, 6, 1> CurlRow(const TriangleGeometry &g)
{
  Eigen::Matrix<double, 6, 1> c;
  for (int k = 0; k < 3; k++)
  {
    c(2 * k) = -g.grad[k].y();
    c(2 * k + 1) = g.grad[k].x();
  }
  return c;
}

inline ElementMatrix DivDiv(const TriangleGeometry &g)
{
  const auto d = DivergenceRow(g);
  return g.area * d * d.transpose();
}

inline ElementMatrix CurlCurl(const TriangleGeometry &g)
{
  const auto c = CurlRow(g);
  return g.area * c * c.transpose();
}

// Integral of (d xi / d x) . (d eta / d x).
inline ElementMatrix DxDx(const TriangleGeometry &g)
{
  ElementMatrix K = ElementMatrix::Zero();
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      const double v = g.area * g.grad[i].x() * g.grad[j].x();
      K(2 * i, 2 * j) = K(2 * i + 1, 2 * j + 1) = v;
    }
  }
  return K;
}

// Full-gradient (vector Laplacian) stiffness.
inline ElementMatrix GradGrad(const TriangleGeometry &g)
{
  ElementMatrix K = ElementMatrix::Zero();
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      const double v = g.area * g.grad[i].dot(g.grad[j]);
      K(2 * i, 2 * j) = K(2 * i + 1, 2 * j + 1) = v;
    }
  }
  return K;
}

// Matrix of the form (xi, eta) -> int 2 M xi . d eta / d x, indexed (test, trial).
inline ElementMatrix ConvectionForm(const TriangleGeometry &g, double mach)
{
  ElementMatrix K = ElementMatrix::Zero();
  for (const auto &qp : quadrature::kTriangleDegree2)
  {
    const double w = qp.weight * g.area * 2.0 * mach;
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        const double v = w * qp.bary[j] * g.grad[i].x();
        K(2 * i, 2 * j) += v;
        K(2 * i + 1, 2 * j + 1) += v;
      }
    }
  }
  return K;
}

// Edge mass int weight * xi . eta over a straight edge a-b.
inline EdgeMatrix EdgeMass(const Point &a, const Point &b, double weight)
{
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  EdgeMatrix K = EdgeMatrix::Zero();
  for (const auto &qp : quadrature::EdgeGauss2())
  {
    const std::array<double, 2> phi = {1.0 - qp.t, qp.t};
    for (int i = 0; i < 2; i++)
    {
      for (int j = 0; j < 2; j++)
      {
        const double v = weight * qp.weight * len * phi[i] * phi[j];
        K(2 * i, 2 * j) += v;
        K(2 * i + 1, 2 * j + 1) += v;
      }
    }
  }
  return K;
}

// int R (d xi / d tau) . eta over an edge of Gamma+/- with tau = (0, nu), R the rotation
// by +90 degrees: (-d_tau xi_y) eta_x + (d_tau xi_x) eta_y. Nodes a, b ordered by
// increasing y; nu = +1 on Gamma+, -1 on Gamma-.
inline EdgeMatrix RotatedTangential(const Point &a, const Point &b, double nu)
{
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  // d/dy of the P1 trace, per local node.
  const std::array<double, 2> dphi_dy = {-1.0 / (b.y - a.y), 1.0 / (b.y - a.y)};
  EdgeMatrix K = EdgeMatrix::Zero();
  for (const auto &qp : quadrature::EdgeGauss2())
  {
    const std::array<double, 2> phi = {1.0 - qp.t, qp.t};
    const double w = qp.weight * len * nu;
    for (int i = 0; i < 2; i++)  // test
    {
      for (int j = 0; j < 2; j++)  // trial
      {
        K(2 * i, 2 * j + 1) += -w * dphi_dy[j] * phi[i];
        K(2 * i + 1, 2 * j) += w * dphi_dy[j] * phi[i];
      }
    }
  }
  return K;
}

}  // namespace element

namespace detail
{

inline void ScatterTriangle(const DofMap &dofs, const std::array<Index, 3> &tri,
                            const ElementMatrix &K, std::vector<Eigen::Triplet<double>> &out)
{
  std::array<Index, 6> idx;
  for (int k = 0; k < 3; k++)
  {
    idx[2 * k] = dofs.Dof(tri[k], 0);
    idx[2 * k + 1] = dofs.Dof(tri[k], 1);
  }
  for (int i = 0; i < 6; i++)
  {
    if (idx[i] == DofMap::kConstrained)
    {
      continue;
    }
    for (int j = 0; j < 6; j++)
    {
      if (idx[j] != DofMap::kConstrained && K(i, j) != 0.0)
      {
        out.emplace_back(idx[i], idx[j], K(i, j));
      }
    }
  }
}

inline void ScatterEdge(const DofMap &dofs, const std::array<Index, 2> &edge,
                        const EdgeMatrix &K, std::vector<Eigen::Triplet<double>> &out)
{
  std::array<Index, 4> idx = {dofs.Dof(edge[0], 0), dofs.Dof(edge[0], 1),
                              dofs.Dof(edge[1], 0), dofs.Dof(edge[1], 1)};
  for (int i = 0; i < 4; i++)
  {
    if (idx[i] == DofMap::kConstrained)
    {
      continue;
    }
    for (int j = 0; j < 4; j++)
    {
      if (idx[j] != DofMap::kConstrained && K(i, j) != 0.0)
      {
        out.emplace_back(idx[i], idx[j], K(i, j));
      }
    }
  }
}

inline SparseMatrix Finalize(Index n, const std::vector<Eigen::Triplet<double>> &triplets)
{
  SparseMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

}  // namespace detail

// Assemble a volume form given by its element kernel.
template <typename Kernel>
SparseMatrix AssembleVolume(const Mesh &mesh, const DofMap &dofs, const Kernel &kernel)
{
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * mesh.NumTriangles());
  for (Index t = 0; t < mesh.NumTriangles(); t++)
  {
    detail::ScatterTriangle(dofs, mesh.triangles[t], kernel(MakeTriangleGeometry(mesh, t)),
                            triplets);
  }
  return detail::Finalize(dofs.NumDofs(), triplets);
}

// Assemble a form over the artificial boundaries Gamma- and Gamma+.
template <typename Kernel>
SparseMatrix AssembleArtificialBoundary(const Mesh &mesh, const DofMap &dofs,
                                        const Kernel &kernel)
{
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto &edge : mesh.boundary_edges)
  {
    if (!IsArtificial(edge.tag))
    {
      continue;
    }
    const Point &a = mesh.nodes[edge.nodes[0]], &b = mesh.nodes[edge.nodes[1]];
    detail::ScatterEdge(dofs, edge.nodes, kernel(a, b, OutwardSign(edge.tag)), triplets);
  }
  return detail::Finalize(dofs.NumDofs(), triplets);
}

inline SparseMatrix AssembleMass(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleVolume(mesh, dofs, element::Mass);
}

inline SparseMatrix AssembleDivDiv(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleVolume(mesh, dofs, element::DivDiv);
}

inline SparseMatrix AssembleCurlCurl(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleVolume(mesh, dofs, element::CurlCurl);
}

inline SparseMatrix AssembleDxDx(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleVolume(mesh, dofs, element::DxDx);
}

inline SparseMatrix AssembleGradGrad(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleVolume(mesh, dofs, element::GradGrad);
}

// a(xi, eta) = int div xi div eta + s curl xi curl eta - M^2 d_x xi . d_x eta.
inline SparseMatrix AssembleA(const Mesh &mesh, const DofMap &dofs, double mach, double s)
{
  return AssembleVolume(mesh, dofs, [&](const TriangleGeometry &g) -> ElementMatrix {
    return element::DivDiv(g) + s * element::CurlCurl(g) - mach * mach * element::DxDx(g);
  });
}

// First-order-in-time volume coupling as it enters the semi-discrete system. Integrating
// the convective term 2 M d_x d_t xi by parts moves the x-derivative onto the test
// function with a minus sign, so Bh = -[int 2 M phi_j . d_x phi_i]; the boundary part of
// that integration by parts is carried by Ch.
inline SparseMatrix AssembleB(const Mesh &mesh, const DofMap &dofs, double mach)
{
  return AssembleVolume(mesh, dofs, [&](const TriangleGeometry &g) -> ElementMatrix {
    return -element::ConvectionForm(g, mach);
  });
}

// int_{Gamma+/-} (1 + nu M) xi . eta: weight 1+M on the outflow end Gamma+ and 1-M on the
// inflow end Gamma- (for M > 0).
inline SparseMatrix AssembleC(const Mesh &mesh, const DofMap &dofs, double mach)
{
  return AssembleArtificialBoundary(mesh, dofs, [&](const Point &a, const Point &b, double nu) {
    return element::EdgeMass(a, b, 1.0 + nu * mach);
  });
}

// int_{Gamma+/-} R d_tau xi . eta with tau = (0, +/-1).
inline SparseMatrix AssembleD(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleArtificialBoundary(mesh, dofs, element::RotatedTangential);
}

// Unweighted boundary mass on Gamma+/-; xi^T C0 xi = int_{Gamma+/-} |xi|^2.
inline SparseMatrix AssembleBoundaryMass(const Mesh &mesh, const DofMap &dofs)
{
  return AssembleArtificialBoundary(mesh, dofs, [](const Point &a, const Point &b, double) {
    return element::EdgeMass(a, b, 1.0);
  });
}

struct SystemMatrices
{
  SparseMatrix Mh;  // mass
  SparseMatrix Ah;  // div-div + s curl-curl - M^2 dx-dx
  SparseMatrix Bh;  // convective coupling of the velocity
  SparseMatrix Ch;  // boundary damping on Gamma+/-
  SparseMatrix Dh;  // rotated tangential derivative on Gamma+/-
  double mach = 0.0;
  double s = 1.0;

  Index Size() const { return Mh.rows(); }
};

// Load vector int f . eta with f evaluated at the degree-2 quadrature points.
inline Vector AssembleLoad(const Mesh &mesh, const DofMap &dofs,
                           const std::function<Vec2(const Point &)> &f)
{
  Vector F = Vector::Zero(dofs.NumDofs());
  for (Index t = 0; t < mesh.NumTriangles(); t++)
  {
    const auto g = MakeTriangleGeometry(mesh, t);
    const auto &tri = mesh.triangles[t];
    for (const auto &qp : quadrature::kTriangleDegree2)
    {
      const Vec2 fq = f(g.Map(qp.bary)) * (qp.weight * g.area);
      for (int k = 0; k < 3; k++)
      {
        for (int c = 0; c < 2; c++)
        {
          const Index dof = dofs.Dof(tri[k], c);
          if (dof != DofMap::kConstrained)
          {
            F(dof) += qp.bary[k] * fq(c);
          }
        }
      }
    }
  }
  return F;
}

// Load vector int_{Gamma+/-} g . eta; g receives the point and the outward sign nu.
inline Vector AssembleBoundaryLoad(const Mesh &mesh, const DofMap &dofs,
                                   const std::function<Vec2(const Point &, double)> &g)
{
  Vector F = Vector::Zero(dofs.NumDofs());
  for (const auto &edge : mesh.boundary_edges)
  {
    if (!IsArtificial(edge.tag))
    {
      continue;
    }
    const Point &a = mesh.nodes[edge.nodes[0]], &b = mesh.nodes[edge.nodes[1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y), nu = OutwardSign(edge.tag);
    for (const auto &qp : quadrature::EdgeGauss2())
    {
      const Point p{a.x + qp.t * (b.x - a.x), a.y + qp.t * (b.y - a.y)};
      const Vec2 gq = g(p, nu) * (qp.weight * len);
      const std::array<double, 2> phi = {1.0 - qp.t, qp.t};
      for (int k = 0; k < 2; k++)
      {
        for (int c = 0; c < 2; c++)
        {
          const Index dof = dofs.Dof(edge.nodes[k], c);
          if (dof != DofMap::kConstrained)
          {
            F(dof) += phi[k] * gq(c);
          }
        }
      }
    }
  }
  return F;
}

// Nodal interpolant of a vector field onto the free unknowns.
inline Vector Interpolate(const Mesh &mesh, const DofMap &dofs,
                          const std::function<Vec2(const Point &)> &f)
{
  Vector u = Vector::Zero(dofs.NumDofs());
  for (Index n = 0; n < mesh.NumNodes(); n++)
  {
    const Vec2 v = f(mesh.nodes[n]);
    for (int c = 0; c < 2; c++)
    {
      const Index dof = dofs.Dof(n, c);
      if (dof != DofMap::kConstrained)
      {
        u(dof) = v(c);
      }
    }
  }
  return u;
}

// Expand free unknowns to nodal (x, y) values with zeros at eliminated pairs.
inline std::vector<Vec2> NodalValues(const DofMap &dofs, const Vector &u)
{
  std::vector<Vec2> out(dofs.NumNodes(), Vec2::Zero());
  for (Index n = 0; n < dofs.NumNodes(); n++)
  {
    for (int c = 0; c < 2; c++)
    {
      const Index dof = dofs.Dof(n, c);
      if (dof != DofMap::kConstrained)
      {
        out[n](c) = u(dof);
      }
    }
  }
  return out;
}

// Coordinate text dump: "row col value" per stored entry, 0-based, sorted by (row, col).
inline void WriteCoordinateText(const SparseMatrix &A, std::ostream &os)
{
  const Eigen::SparseMatrix<double, Eigen::RowMajor> R(A);
  char buf[96];
  for (Index r = 0; r < R.outerSize(); r++)
  {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(R, r); it; ++it)
    {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace galbrun

#endif  // GALBRUN_ASSEMBLY_HPP
