// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "galbrun/mesh.hpp"

using namespace galbrun;

TEST(Mesh, CountsAndNumbering)
{
  const Mesh m = BuildDuctMesh({4.0, 1.0}, 8, 2);
  EXPECT_EQ(m.NumNodes(), 9 * 3);
  EXPECT_EQ(m.NumTriangles(), 2 * 8 * 2);
  EXPECT_EQ(m.boundary_edges.size(), 2u * 8 + 2u * 2);
  EXPECT_DOUBLE_EQ(m.nodes[m.Node(0, 0)].x, -4.0);
  EXPECT_DOUBLE_EQ(m.nodes[m.Node(8, 2)].x, 4.0);
  EXPECT_DOUBLE_EQ(m.nodes[m.Node(8, 2)].y, 1.0);
  EXPECT_DOUBLE_EQ(m.MinEdgeLength(), 1.0);
}

TEST(Mesh, TrianglesArePositiveAndTileTheDuct)
{
  for (auto [nx, ny] : {std::pair<Index, Index>{1, 1}, {7, 3}, {40, 10}})
  {
    const DuctGeometry g{2.5, 0.75};
    const Mesh m = BuildDuctMesh(g, nx, ny);
    double total = 0.0;
    for (Index t = 0; t < m.NumTriangles(); t++)
    {
      ASSERT_GT(m.SignedArea(t), 0.0);
      total += m.SignedArea(t);
    }
    EXPECT_NEAR(total, g.Area(), 1e-12 * g.Area());
  }
}

TEST(Mesh, EveryInteriorEdgeSharedByTwoTriangles)
{
  const Mesh m = BuildDuctMesh({1.0, 1.0}, 5, 4);
  std::map<std::pair<Index, Index>, int> count;
  for (const auto &tri : m.triangles)
  {
    for (int k = 0; k < 3; k++)
    {
      Index a = tri[k], b = tri[(k + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::size_t boundary = 0;
  for (const auto &[edge, c] : count)
  {
    ASSERT_LE(c, 2);
    boundary += (c == 1);
  }
  EXPECT_EQ(boundary, m.boundary_edges.size());
}

TEST(Mesh, BoundaryTagsAndSigns)
{
  const Mesh m = BuildDuctMesh({3.0, 1.0}, 6, 4);
  std::map<BoundaryTag, int> n;
  for (const auto &e : m.boundary_edges)
  {
    n[e.tag]++;
    const Point &a = m.nodes[e.nodes[0]], &b = m.nodes[e.nodes[1]];
    switch (e.tag)
    {
      case BoundaryTag::WallBottom:
        EXPECT_EQ(a.y, -1.0);
        EXPECT_EQ(b.y, -1.0);
        EXPECT_LT(a.x, b.x);
        break;
      case BoundaryTag::WallTop:
        EXPECT_EQ(a.y, 1.0);
        EXPECT_EQ(b.y, 1.0);
        break;
      case BoundaryTag::GammaMinus:
        EXPECT_EQ(a.x, -3.0);
        EXPECT_EQ(b.x, -3.0);
        EXPECT_LT(a.y, b.y);
        break;
      case BoundaryTag::GammaPlus:
        EXPECT_EQ(a.x, 3.0);
        EXPECT_EQ(b.x, 3.0);
        EXPECT_LT(a.y, b.y);
        break;
    }
  }
  EXPECT_EQ(n[BoundaryTag::WallBottom], 6);
  EXPECT_EQ(n[BoundaryTag::WallTop], 6);
  EXPECT_EQ(n[BoundaryTag::GammaMinus], 4);
  EXPECT_EQ(n[BoundaryTag::GammaPlus], 4);
  EXPECT_EQ(OutwardSign(BoundaryTag::GammaPlus), 1.0);
  EXPECT_EQ(OutwardSign(BoundaryTag::GammaMinus), -1.0);
  EXPECT_TRUE(IsWall(BoundaryTag::WallTop));
  EXPECT_TRUE(IsArtificial(BoundaryTag::GammaMinus));
}

TEST(Mesh, InvalidInputs)
{
  EXPECT_THROW(BuildDuctMesh({4.0, 1.0}, 0, 4), ConfigError);
  EXPECT_THROW(BuildDuctMesh({4.0, 1.0}, 4, -1), ConfigError);
  EXPECT_THROW(BuildDuctMesh({0.0, 1.0}, 4, 4), ConfigError);
  EXPECT_THROW(BuildDuctMesh({4.0, -1.0}, 4, 4), ConfigError);
}

TEST(DofMap, ConstraintCounts)
{
  const Index nx = 10, ny = 4;
  const Mesh m = BuildDuctMesh({4.0, 1.0}, nx, ny);
  const Index nodes = (nx + 1) * (ny + 1);
  EXPECT_EQ(BuildDofMap(m, Constraint::None).NumDofs(), 2 * nodes);
  // xi_y fixed on the 2 (nx + 1) wall nodes.
  EXPECT_EQ(BuildDofMap(m, Constraint::Walls).NumDofs(), 2 * nodes - 2 * (nx + 1));
  // plus xi_x on the 2 (ny + 1) end nodes.
  EXPECT_EQ(BuildDofMap(m, Constraint::WallsAndEnds).NumDofs(),
            2 * nodes - 2 * (nx + 1) - 2 * (ny + 1));
}

TEST(DofMap, NumberingIsDenseAndNodeMajor)
{
  const Mesh m = BuildDuctMesh({1.0, 1.0}, 3, 3);
  const DofMap d = BuildDofMap(m, Constraint::Walls);
  Index expected = 0;
  for (Index n = 0; n < m.NumNodes(); n++)
  {
    for (int c = 0; c < 2; c++)
    {
      if (!d.IsConstrained(n, c))
      {
        EXPECT_EQ(d.Dof(n, c), expected++);
      }
    }
  }
  EXPECT_EQ(expected, d.NumDofs());
  // Corner (0,0) is a wall node: only x is free.
  EXPECT_FALSE(d.IsConstrained(m.Node(0, 0), 0));
  EXPECT_TRUE(d.IsConstrained(m.Node(0, 0), 1));
  EXPECT_FALSE(d.IsConstrained(m.Node(0, 1), 1));
}
