// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_MANUFACTURED_HPP
#define GALBRUN_MANUFACTURED_HPP

#include <cmath>
#include <functional>
#include <numbers>

#include "galbrun/assembly.hpp"
#include "galbrun/dynamics.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/quadrature.hpp"

namespace galbrun
{

// A scalar function with its first two derivatives.
struct Profile1D
{
  std::function<double(double)> f, d1, d2;
};

inline Profile1D SinProfile(double k, double phase = 0.0)
{
  return {[=](double x) { return std::sin(k * x + phase); },
          [=](double x) { return k * std::cos(k * x + phase); },
          [=](double x) { return -k * k * std::sin(k * x + phase); }};
}

inline Profile1D PolynomialProfile(double c0, double c1, double c2)
{
  return {[=](double x) { return c0 + c1 * x + c2 * x * x; },
          [=](double x) { return c1 + 2.0 * c2 * x; }, [=](double) { return 2.0 * c2; }};
}

//
// Separable field
//
//   xi_x = T(t) P(x) cos(kappa (y + h)),   xi_y = T(t) Q(x) sin(kappa (y + h)),
//
// which satisfies xi_y = 0 and curl xi = 0 on the walls whenever kappa h is a multiple of
// pi/2. The load that makes it an exact solution is obtained from the strong operator, and
// the boundary load from the mismatch between the absorbing condition and its traces.
//
struct ManufacturedSolution
{
  Profile1D T, P, Q;
  double kappa = 0.0;
  double h = 1.0;
  double mach = 0.5;
  double s = 1.0;

  double Cy(double y) const { return std::cos(kappa * (y + h)); }
  double Sy(double y) const { return std::sin(kappa * (y + h)); }

  Vec2 Xi(const Point &p, double t) const
  {
    return T.f(t) * Vec2(P.f(p.x) * Cy(p.y), Q.f(p.x) * Sy(p.y));
  }

  Vec2 Velocity(const Point &p, double t) const
  {
    return T.d1(t) * Vec2(P.f(p.x) * Cy(p.y), Q.f(p.x) * Sy(p.y));
  }

  Vec2 Force(const Point &p, double t) const
  {
    const double M = mach, k = kappa;
    const double T0 = T.f(t), T1 = T.d1(t), T2 = T.d2(t);
    const double P0 = P.f(p.x), P1 = P.d1(p.x), P2 = P.d2(p.x);
    const double Q0 = Q.f(p.x), Q1 = Q.d1(p.x), Q2 = Q.d2(p.x);
    const double fx = T2 * P0 + 2.0 * M * T1 * P1 + M * M * T0 * P2 - T0 * (P2 + k * Q1) +
                      s * T0 * k * (Q1 + k * P0);
    const double fy = T2 * Q0 + 2.0 * M * T1 * Q1 + M * M * T0 * Q2 + T0 * k * (P1 + k * Q0) -
                      s * T0 * (Q2 + k * P1);
    return {Cy(p.y) * fx, Sy(p.y) * fy};
  }

  // Load on Gamma+/- (outward sign nu) for the stable absorbing condition.
  Vec2 BoundaryLoad(const Point &p, double nu, double t) const
  {
    const double M = mach;
    const double T0 = T.f(t), T1 = T.d1(t);
    const double dx_xi_x = T0 * P.d1(p.x) * Cy(p.y);
    const double dx_xi_y = T0 * Q.d1(p.x) * Sy(p.y);
    const double dy_xi_x = -T0 * P.f(p.x) * kappa * Sy(p.y);
    const Vec2 v = T1 * Vec2(P.f(p.x) * Cy(p.y), Q.f(p.x) * Sy(p.y));
    return {(1.0 - M * nu) * v.x() + nu * (1.0 - M * M) * dx_xi_x,
            (1.0 - M * nu) * v.y() + nu * ((s - M * M) * dx_xi_y + (1.0 - s) * dy_xi_x)};
  }
};

// Smooth default: one quarter wave across the duct height, kappa = pi / 2h.
inline ManufacturedSolution SmoothManufactured(const DuctGeometry &geom, double mach, double s)
{
  using std::numbers::pi;
  ManufacturedSolution m;
  m.h = geom.h;
  m.kappa = pi / (2.0 * geom.h);
  m.mach = mach;
  m.s = s;
  m.T = SinProfile(2.0 * pi, 0.3);
  m.P = SinProfile(pi / geom.R, 0.4);
  m.Q = SinProfile(pi / geom.R, -0.7);
  return m;
}

// L2 norm of (u_h - exact) with the degree-5 triangle rule.
inline double L2Error(const Mesh &mesh, const DofMap &dofs, const Vector &u,
                      const std::function<Vec2(const Point &)> &exact)
{
  const auto nodal = NodalValues(dofs, u);
  double sum = 0.0;
  for (Index t = 0; t < mesh.NumTriangles(); t++)
  {
    const auto g = MakeTriangleGeometry(mesh, t);
    const auto &tri = mesh.triangles[t];
    for (const auto &qp : quadrature::kTriangleDegree5)
    {
      Vec2 uh = Vec2::Zero();
      for (int k = 0; k < 3; k++)
      {
        uh += qp.bary[k] * nodal[tri[k]];
      }
      sum += qp.weight * g.area * (uh - exact(g.Map(qp.bary))).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

struct ManufacturedRun
{
  Vector xi;  // free unknowns at t_end
  double dt = 0.0;
  std::int64_t n_steps = 0;
  double l2_error = 0.0;
};

// March the manufactured problem with the stable absorbing condition to t_end with
// n_steps steps, starting from the interpolated exact data.
inline ManufacturedRun SolveManufactured(const ManufacturedSolution &m, const Mesh &mesh,
                                         double t_end, std::int64_t n_steps)
{
  const DofMap dofs = BuildDofMap(mesh, Constraint::Walls);
  const SystemMatrices mats = AssembleSystem(mesh, dofs, m.mach, m.s, AbcVariant::Stable);
  const double dt = t_end / double(n_steps);
  const StepOperator op(mats, dt);
  auto load = [&](double t) -> Vector {
    return AssembleLoad(mesh, dofs, [&](const Point &p) { return m.Force(p, t); }) +
           AssembleBoundaryLoad(mesh, dofs,
                                [&](const Point &p, double nu) { return m.BoundaryLoad(p, nu, t); });
  };
  const Vector xi0 = Interpolate(mesh, dofs, [&](const Point &p) { return m.Xi(p, 0.0); });
  const Vector v0 = Interpolate(mesh, dofs, [&](const Point &p) { return m.Velocity(p, 0.0); });
  SimState state = TaylorStart(op, xi0, v0, load(0.0));
  while (state.step < n_steps)
  {
    state = LeapfrogStep(state, op, load(state.Time()));
  }
  ManufacturedRun run;
  run.xi = state.xi_curr;
  run.dt = dt;
  run.n_steps = n_steps;
  run.l2_error = L2Error(mesh, dofs, run.xi, [&](const Point &p) { return m.Xi(p, t_end); });
  return run;
}

// Least-squares slope of log(error) against log(size).
inline double ObservedOrder(const std::vector<double> &sizes, const std::vector<double> &errors)
{
  const std::size_t n = sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; i++)
  {
    const double x = std::log(sizes[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace galbrun

#endif  // GALBRUN_MANUFACTURED_HPP
