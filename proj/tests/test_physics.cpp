// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "galbrun/physics.hpp"
#include "galbrun/sources.hpp"

using namespace galbrun;

namespace
{

SourceSpec Source(SourceKind kind)
{
  SourceSpec s;
  s.kind = kind;
  s.center = {0.3, -0.1};
  s.width = 0.2;
  s.amplitude = 1.7;
  return s;
}

// Central differences of the spatial force.
Eigen::Matrix2d ForceJacobian(const SourceSpec &s, const Point &p, double d = 1e-5)
{
  Eigen::Matrix2d J;
  J.col(0) = (s.SpatialForce({p.x + d, p.y}) - s.SpatialForce({p.x - d, p.y})) / (2 * d);
  J.col(1) = (s.SpatialForce({p.x, p.y + d}) - s.SpatialForce({p.x, p.y - d})) / (2 * d);
  return J;
}

}  // namespace

TEST(Sources, RotationalIsDivergenceFreeWithMatchingCurl)
{
  const auto s = Source(SourceKind::Rotational);
  for (const Point p : {Point{0.3, -0.1}, Point{0.4, 0.0}, Point{0.1, -0.3}, Point{0.55, 0.2}})
  {
    const auto J = ForceJacobian(s, p);
    EXPECT_NEAR(J(0, 0) + J(1, 1), 0.0, 1e-7);
    EXPECT_NEAR(J(1, 0) - J(0, 1), s.SpatialCurl(p), 1e-6 * (1.0 + std::abs(s.SpatialCurl(p))));
    const double d = 1e-5;
    const Vec2 fd((s.SpatialCurl({p.x + d, p.y}) - s.SpatialCurl({p.x - d, p.y})) / (2 * d),
                  (s.SpatialCurl({p.x, p.y + d}) - s.SpatialCurl({p.x, p.y - d})) / (2 * d));
    EXPECT_LT((fd - s.SpatialCurlGradient(p)).norm(), 1e-5 * (1.0 + fd.norm()));
  }
}

TEST(Sources, IrrotationalIsCurlFree)
{
  const auto s = Source(SourceKind::Irrotational);
  for (const Point p : {Point{0.3, -0.1}, Point{0.4, 0.0}, Point{0.1, -0.3}})
  {
    const auto J = ForceJacobian(s, p);
    EXPECT_NEAR(J(1, 0) - J(0, 1), 0.0, 1e-7);
    EXPECT_EQ(s.SpatialCurl(p), 0.0);
  }
}

TEST(Sources, TimeProfiles)
{
  TimeProfile tp;
  tp.t0 = 1.0;
  tp.sigma = 0.2;
  tp.kind = TimeProfileKind::GaussianPulse;
  EXPECT_DOUBLE_EQ(tp(1.0), 1.0);
  EXPECT_NEAR(tp(1.2), std::exp(-0.5), 1e-15);
  tp.kind = TimeProfileKind::Ricker;
  EXPECT_DOUBLE_EQ(tp(1.0), 1.0);
  EXPECT_NEAR(tp(1.2), 0.0, 1e-15);
  // Zero mean: the pulse leaves no net impulse.
  double mean = 0.0;
  for (int k = -4000; k <= 4000; k++)
  {
    mean += tp(1.0 + k * 1e-3) * 1e-3;
  }
  EXPECT_NEAR(mean, 0.0, 1e-10);
  const auto [lo, hi] = tp.Support();
  EXPECT_LT(std::abs(tp(lo)), 1e-13);
  EXPECT_LT(std::abs(tp(hi)), 1e-13);
  tp.kind = TimeProfileKind::Continuous;
  EXPECT_EQ(tp(123.0), 1.0);
}

TEST(Sources, NoneIsZero)
{
  SourceSpec s;
  EXPECT_EQ(EvalSource(s, {0.0, 0.0}, 0.6).norm(), 0.0);
  EXPECT_EQ(EvalSourceCurl(s, {0.0, 0.0}, 0.6), 0.0);
}

TEST(PlaneWave, SolvesSourceFreeEquation)
{
  // For y-independent (F, 0): xi_tt + 2 M xi_xt + M^2 xi_xx - xi_xx = 0.
  for (Direction dir : {Direction::Right, Direction::Left})
  {
    const double M = 0.5;
    const auto w = GaussianPlaneWave(dir, 0.0, 0.3, M);
    const double d = 1e-3;
    for (double x : {-0.2, 0.1, 0.4})
    {
      const double t = 0.1;
      auto F = [&](double xx, double tt) { return w.Displacement(xx, tt).x(); };
      const double tt = (F(x, t + d) - 2 * F(x, t) + F(x, t - d)) / (d * d);
      const double xx = (F(x + d, t) - 2 * F(x, t) + F(x - d, t)) / (d * d);
      const double xt =
        (F(x + d, t + d) - F(x + d, t - d) - F(x - d, t + d) + F(x - d, t - d)) / (4 * d * d);
      EXPECT_NEAR(tt + 2 * M * xt + (M * M - 1) * xx, 0.0, 1e-4 * (1.0 + std::abs(tt)));
      EXPECT_NEAR(w.Velocity(x, t).x(), (F(x, t + d) - F(x, t - d)) / (2 * d),
                  1e-4 * (1.0 + std::abs(w.Velocity(x, t).x())));
    }
  }
}

TEST(PlaneWave, AbsorbingConditionsAreExactForOutgoingWaves)
{
  for (double M : {0.0, 0.3, -0.4, 0.8})
  {
    const auto right = GaussianPlaneWave(Direction::Right, 0.0, 0.3, M);
    const auto left = GaussianPlaneWave(Direction::Left, 0.0, 0.3, M);
    for (double x : {-0.3, 0.05, 0.2})
    {
      Eigen::Matrix2d gr = Eigen::Matrix2d::Zero(), gl = Eigen::Matrix2d::Zero();
      gr.col(0) = right.DxDisplacement(x, 0.1);
      gl.col(0) = left.DxDisplacement(x, 0.1);
      EXPECT_NEAR(StableAbcResidual(right.Velocity(x, 0.1), gr, M, +1.0).norm(), 0.0, 1e-12);
      EXPECT_NEAR(StableAbcResidual(left.Velocity(x, 0.1), gl, M, -1.0).norm(), 0.0, 1e-12);
      EXPECT_NEAR(NaiveAbcResidual(right.Velocity(x, 0.1), gr, M, +1.0).norm(), 0.0, 1e-12);
      EXPECT_NEAR(NaiveAbcResidual(left.Velocity(x, 0.1), gl, M, -1.0).norm(), 0.0, 1e-12);
      if (std::abs(gr(0, 0)) > 1e-3)
      {
        // Incoming waves are not transparent.
        EXPECT_GT(StableAbcResidual(right.Velocity(x, 0.1), gr, M, -1.0).norm(), 1e-6);
      }
    }
  }
}

TEST(System, VariantsShareVolumeFormsAndDamping)
{
  const Mesh mesh = BuildDuctMesh({2.0, 1.0}, 8, 4);
  const DofMap dofs = BuildDofMap(mesh, Constraint::Walls);
  const auto stable = AssembleSystem(mesh, dofs, 0.5, 1.0, AbcVariant::Stable);
  const auto naive = AssembleSystem(mesh, dofs, 0.5, 1.0, AbcVariant::Naive);
  EXPECT_EQ((stable.Ah - naive.Ah).norm(), 0.0);
  EXPECT_EQ((stable.Ch - naive.Ch).norm(), 0.0);
  EXPECT_GT(stable.Dh.norm(), 0.0);
  EXPECT_EQ(naive.Dh.norm(), 0.0);
  EXPECT_EQ(ConstraintFor(AbcVariant::None), Constraint::WallsAndEnds);
  const DofMap box = BuildDofMap(mesh, Constraint::WallsAndEnds);
  const auto none = AssembleSystem(mesh, box, 0.5, 1.0, AbcVariant::None);
  EXPECT_EQ(none.Ch.nonZeros(), 0);
  EXPECT_EQ(none.Dh.nonZeros(), 0);
}

TEST(SourceLoad, CullingMatchesFullAssembly)
{
  const Mesh mesh = BuildDuctMesh({2.0, 1.0}, 40, 20);
  const DofMap dofs = BuildDofMap(mesh, Constraint::Walls);
  for (SourceKind kind : {SourceKind::Rotational, SourceKind::Irrotational})
  {
    SourceSpec src;
    src.kind = kind;
    src.center = {-0.5, 0.1};
    src.width = 0.15;
    const double M = 0.5, s = 1.0;
    const SourceLoad load(mesh, dofs, src, M, s);
    for (double t : {0.3, 0.6, 1.4})
    {
      const Vector F = load(t);
      const Vector full = RegularizedRhs(
        [&](const Point &p) { return EvalSource(src, p, t); },
        [&](const Point &p) { return load.Vorticity().GradPsi(p, t); }, s, mesh, dofs);
      EXPECT_LE((F - full).norm(), 1e-13 * (1.0 + full.norm())) << ToString(kind) << " t=" << t;
    }
  }
}

TEST(Energy, EqualsMatrixLeapfrogEnergyForUnitRegularization)
{
  const Mesh mesh = BuildDuctMesh({2.0, 1.0}, 10, 6);
  const DofMap dofs = BuildDofMap(mesh, Constraint::Walls);
  const auto mats = AssembleSystem(mesh, dofs, 0.5, 1.0, AbcVariant::Stable);
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n;
  SimState st;
  st.dt = 0.01;
  st.step = 5;
  st.xi_prev = Vector::NullaryExpr(dofs.NumDofs(), [&] { return n(gen); });
  st.xi_curr = st.xi_prev + 0.01 * Vector::NullaryExpr(dofs.NumDofs(), [&] { return n(gen); });
  const Vector v = st.Velocity();
  const SparseMatrix K = mats.Ah + mats.Dh;
  const double expected = 0.5 * (v.dot(mats.Mh * v) + st.xi_curr.dot(K * st.xi_prev));
  EXPECT_NEAR(Energy(st, mats, mesh, dofs), expected, 1e-10 * std::abs(expected));
  const SparseMatrix C0 = AssembleBoundaryMass(mesh, dofs);
  EXPECT_NEAR(BoundaryFlux(st, mats, mesh, dofs), v.dot(C0 * v), 1e-10 * v.dot(C0 * v));
}
