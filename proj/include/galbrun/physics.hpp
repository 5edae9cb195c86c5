// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_PHYSICS_HPP
#define GALBRUN_PHYSICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "galbrun/assembly.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/sources.hpp"
#include "galbrun/state.hpp"
#include "galbrun/vorticity.hpp"

namespace galbrun
{

enum class AbcVariant : std::uint8_t
{
  Stable,  // D xi / Dt + d xi / dn = 0 on Gamma+/-
  Naive,   // plane-wave exact but unstable variant (negative control)
  None,    // rigid walls on Gamma+/- too (closed box)
};

inline const char *ToString(AbcVariant abc)
{
  switch (abc)
  {
    case AbcVariant::Stable:
      return "stable";
    case AbcVariant::Naive:
      return "naive";
    case AbcVariant::None:
      return "none";
  }
  return "?";
}

inline Constraint ConstraintFor(AbcVariant abc)
{
  return abc == AbcVariant::None ? Constraint::WallsAndEnds : Constraint::Walls;
}

//
// Boundary matrices of the variant
//
//   (1 - M^2) d_x xi_1 + d_y xi_2 + nu (1 - nu M) d_t xi_1 = 0
//   (1 - M^2) d_x xi_2 - d_y xi_1 + nu (1 - nu M) d_t xi_2 = 0     on Gamma+/- (nu = +/-1).
//
// Substituting (1 - M^2) d_x xi into the boundary terms of the s = 1 weak form, the
// tangential derivatives cancel and only the damping term (1 - nu M) d_t xi . eta survives.
// Combined with the boundary part of the integrated convective term this is the same
// (1 + nu M) boundary mass as the stable condition, with no rotated tangential term.
//
struct BoundaryForms
{
  SparseMatrix C;
  SparseMatrix D;
};

inline BoundaryForms NaiveAbcForms(const Mesh &mesh, const DofMap &dofs, double mach)
{
  SparseMatrix D(dofs.NumDofs(), dofs.NumDofs());
  D.makeCompressed();
  return {AssembleC(mesh, dofs, mach), std::move(D)};
}

inline SystemMatrices AssembleSystem(const Mesh &mesh, const DofMap &dofs, double mach, double s,
                                     AbcVariant abc)
{
  SystemMatrices mats;
  mats.mach = mach;
  mats.s = s;
  mats.Mh = AssembleMass(mesh, dofs);
  mats.Ah = AssembleA(mesh, dofs, mach, s);
  mats.Bh = AssembleB(mesh, dofs, mach);
  switch (abc)
  {
    case AbcVariant::Stable:
      mats.Ch = AssembleC(mesh, dofs, mach);
      mats.Dh = AssembleD(mesh, dofs);
      break;
    case AbcVariant::Naive:
    {
      auto forms = NaiveAbcForms(mesh, dofs, mach);
      mats.Ch = std::move(forms.C);
      mats.Dh = std::move(forms.D);
      break;
    }
    case AbcVariant::None:
      mats.Ch = SparseMatrix(dofs.NumDofs(), dofs.NumDofs());
      mats.Dh = SparseMatrix(dofs.NumDofs(), dofs.NumDofs());
      break;
  }
  return mats;
}

// Load of the regularized right-hand side f_s = f + s curl psi, curl psi = (d_y psi, -d_x psi).
inline Vector RegularizedRhs(const std::function<Vec2(const Point &)> &f,
                             const std::function<Vec2(const Point &)> &grad_psi, double s,
                             const Mesh &mesh, const DofMap &dofs)
{
  if (s == 0.0 || !grad_psi)
  {
    return AssembleLoad(mesh, dofs, f);
  }
  return AssembleLoad(mesh, dofs, [&](const Point &p) -> Vec2 {
    const Vec2 g = grad_psi(p);
    return f(p) + s * Vec2(g.y(), -g.x());
  });
}

//
// Time-dependent load for a Gaussian-potential source. Triangles whose quadrature points
// all lie where both f and curl psi vanish identically (outside the source cutoff and off
// the convected vorticity track) are skipped.
//
class SourceLoad
{
public:
  SourceLoad(const Mesh &mesh, const DofMap &dofs, const SourceSpec &source, double mach,
             double s)
    : mesh_(mesh), dofs_(dofs), source_(source), mach_(mach), s_(s), vorticity_(source, mach)
  {
  }

  bool Active() const { return source_.kind != SourceKind::None && source_.amplitude != 0.0; }

  Vector operator()(double t) const
  {
    Vector F = Vector::Zero(dofs_.NumDofs());
    if (!Active())
    {
      return F;
    }
    const double profile = source_.time_profile(t);
    const bool with_psi = s_ != 0.0 && source_.kind == SourceKind::Rotational;
    const double cut = source_.CutoffRadius();
    for (Index tri = 0; tri < mesh_.NumTriangles(); tri++)
    {
      const auto g = MakeTriangleGeometry(mesh_, tri);
      if (!Touches(g, t, cut, with_psi))
      {
        continue;
      }
      const auto &nodes = mesh_.triangles[tri];
      for (const auto &qp : quadrature::kTriangleDegree2)
      {
        const Point p = g.Map(qp.bary);
        Vec2 fs = source_.SpatialForce(p) * profile;
        if (with_psi)
        {
          fs += s_ * vorticity_.CurlPsi(p, t);
        }
        fs *= qp.weight * g.area;
        for (int k = 0; k < 3; k++)
        {
          for (int c = 0; c < 2; c++)
          {
            const Index dof = dofs_.Dof(nodes[k], c);
            if (dof != DofMap::kConstrained)
            {
              F(dof) += qp.bary[k] * fs(c);
            }
          }
        }
      }
    }
    return F;
  }

  const ConvectedVorticity &Vorticity() const { return vorticity_; }

private:
  // Conservative bounding-box test against the source disc and the vorticity track.
  bool Touches(const TriangleGeometry &g, double t, double cut, bool with_psi) const
  {
    double xmin = g.vertices[0].x, xmax = xmin, ymin = g.vertices[0].y, ymax = ymin;
    for (const auto &v : g.vertices)
    {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
    const Point &c = source_.center;
    if (ymax < c.y - cut || ymin > c.y + cut)
    {
      return false;
    }
    double lo = c.x - cut, hi = c.x + cut;
    if (with_psi && t > 0.0)
    {
      // The track covers c.x + M [0, t] widened by the cutoff.
      lo = std::min(lo, c.x + mach_ * t - cut);
      hi = std::max(hi, c.x + mach_ * t + cut);
    }
    return !(xmax < lo || xmin > hi);
  }

  const Mesh &mesh_;
  const DofMap &dofs_;
  SourceSpec source_;
  double mach_;
  double s_;
  ConvectedVorticity vorticity_;
};

namespace detail
{

// grad(r, c) = d xi_r / d x_c on one triangle.
inline Eigen::Matrix2d ElementGradient(const TriangleGeometry &g, const std::vector<Vec2> &nodal,
                                       const std::array<Index, 3> &tri)
{
  Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
  for (int k = 0; k < 3; k++)
  {
    G += nodal[tri[k]] * g.grad[k].transpose();
  }
  return G;
}

}  // namespace detail

//
// Discrete energy between levels n-1 and n:
//
//   E = 1/2 int |v|^2 + grad xi^n : grad xi^{n-1} - M^2 d_x xi^n . d_x xi^{n-1},
//
// with v = (xi^n - xi^{n-1}) / dt. Pairing the two levels in the potential part gives the
// quantity that the centered scheme conserves (closed box) or dissipates through Gamma+/-.
//
inline double Energy(const SimState &state, const SystemMatrices &mats, const Mesh &mesh,
                     const DofMap &dofs)
{
  const auto cur = NodalValues(dofs, state.xi_curr);
  const auto prev = NodalValues(dofs, state.xi_prev);
  const double M2 = mats.mach * mats.mach;
  double kinetic = 0.0, potential = 0.0;
  for (Index t = 0; t < mesh.NumTriangles(); t++)
  {
    const auto g = MakeTriangleGeometry(mesh, t);
    const auto &tri = mesh.triangles[t];
    const Eigen::Matrix2d Gc = detail::ElementGradient(g, cur, tri);
    const Eigen::Matrix2d Gp = detail::ElementGradient(g, prev, tri);
    potential += g.area * ((Gc.array() * Gp.array()).sum() - M2 * Gc.col(0).dot(Gp.col(0)));
    for (const auto &qp : quadrature::kTriangleDegree2)
    {
      Vec2 v = Vec2::Zero();
      for (int k = 0; k < 3; k++)
      {
        v += qp.bary[k] * (cur[tri[k]] - prev[tri[k]]);
      }
      v /= state.dt;
      kinetic += qp.weight * g.area * v.squaredNorm();
    }
  }
  return 0.5 * (kinetic + potential);
}

// int_{Gamma+/-} |v|^2 with the backward difference used by Energy.
inline double BoundaryFlux(const SimState &state, const SystemMatrices &, const Mesh &mesh,
                           const DofMap &dofs)
{
  const auto cur = NodalValues(dofs, state.xi_curr);
  const auto prev = NodalValues(dofs, state.xi_prev);
  double flux = 0.0;
  for (const auto &edge : mesh.boundary_edges)
  {
    if (!IsArtificial(edge.tag))
    {
      continue;
    }
    const Point &a = mesh.nodes[edge.nodes[0]], &b = mesh.nodes[edge.nodes[1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const Vec2 va = (cur[edge.nodes[0]] - prev[edge.nodes[0]]) / state.dt;
    const Vec2 vb = (cur[edge.nodes[1]] - prev[edge.nodes[1]]) / state.dt;
    for (const auto &qp : quadrature::EdgeGauss2())
    {
      flux += qp.weight * len * ((1.0 - qp.t) * va + qp.t * vb).squaredNorm();
    }
  }
  return flux;
}

//
// y-independent solutions xi = F(x -/+ c t) (1, 0) of the source-free equation, travelling
// downstream at speed 1 + M (Right) or upstream at speed 1 - M (Left).
//
enum class Direction
{
  Right,
  Left
};

struct PlaneWave
{
  Direction direction = Direction::Right;
  std::function<double(double)> profile;
  std::function<double(double)> profile_derivative;
  double mach = 0.0;

  // Signed phase speed.
  double Speed() const { return direction == Direction::Right ? 1.0 + mach : -(1.0 - mach); }

  Vec2 Displacement(double x, double t) const { return {profile(x - Speed() * t), 0.0}; }

  Vec2 Velocity(double x, double t) const
  {
    return {-Speed() * profile_derivative(x - Speed() * t), 0.0};
  }

  Vec2 DxDisplacement(double x, double t) const
  {
    return {profile_derivative(x - Speed() * t), 0.0};
  }
};

inline PlaneWave GaussianPlaneWave(Direction direction, double center, double width, double mach,
                                   double amplitude = 1.0)
{
  PlaneWave w;
  w.direction = direction;
  w.mach = mach;
  w.profile = [=](double x) {
    const double u = (x - center) / width;
    return amplitude * std::exp(-0.5 * u * u);
  };
  w.profile_derivative = [=](double x) {
    const double u = (x - center) / width;
    return -amplitude * u / width * std::exp(-0.5 * u * u);
  };
  return w;
}

// Pointwise residuals of the boundary conditions on Gamma+/- (nu = +/-1) given the local
// velocity and gradient (grad(r, c) = d xi_r / d x_c).
inline Vec2 StableAbcResidual(const Vec2 &velocity, const Eigen::Matrix2d &grad, double mach,
                              double nu)
{
  return velocity + mach * grad.col(0) + nu * grad.col(0);
}

inline Vec2 NaiveAbcResidual(const Vec2 &velocity, const Eigen::Matrix2d &grad, double mach,
                             double nu)
{
  const double k = 1.0 - mach * mach, damp = nu * (1.0 - nu * mach);
  return {k * grad(0, 0) + grad(1, 1) + damp * velocity.x(),
          k * grad(1, 0) - grad(0, 1) + damp * velocity.y()};
}

}  // namespace galbrun

#endif  // GALBRUN_PHYSICS_HPP
