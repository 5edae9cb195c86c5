// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "galbrun/io.hpp"

using namespace galbrun;
namespace fs = std::filesystem;

namespace
{

fs::path TempDir(const std::string &name)
{
  const fs::path p = fs::temp_directory_path() / ("galbrun_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string ReadFile(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal reader for the legacy ASCII grid written by WriteSnapshot.
struct ParsedGrid
{
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<long, 3>> cells;
  std::vector<std::array<double, 3>> vectors;
  std::vector<double> norms;
};

ParsedGrid ParseGrid(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  ParsedGrid g;
  std::getline(in, line);
  EXPECT_EQ(line, "# vtk DataFile Version 3.0");
  std::getline(in, line);  // title
  std::getline(in, line);
  EXPECT_EQ(line, "ASCII");
  std::getline(in, line);
  EXPECT_EQ(line, "DATASET UNSTRUCTURED_GRID");
  std::string word, type;
  std::size_t n = 0, m = 0, size = 0;
  in >> word >> n >> type;
  EXPECT_EQ(word, "POINTS");
  g.points.resize(n);
  for (auto &p : g.points)
  {
    in >> p[0] >> p[1] >> p[2];
  }
  in >> word >> m >> size;
  EXPECT_EQ(word, "CELLS");
  EXPECT_EQ(size, 4 * m);
  g.cells.resize(m);
  for (auto &c : g.cells)
  {
    int k;
    in >> k >> c[0] >> c[1] >> c[2];
    EXPECT_EQ(k, 3);
  }
  in >> word >> m;
  EXPECT_EQ(word, "CELL_TYPES");
  for (std::size_t k = 0; k < m; k++)
  {
    int t;
    in >> t;
    EXPECT_EQ(t, 5);
  }
  in >> word >> n;
  EXPECT_EQ(word, "POINT_DATA");
  in >> word >> type >> type;
  EXPECT_EQ(word, "VECTORS");
  EXPECT_EQ(type, "double");
  g.vectors.resize(n);
  for (auto &v : g.vectors)
  {
    in >> v[0] >> v[1] >> v[2];
  }
  std::string name;
  int comps;
  in >> word >> name >> type >> comps;
  EXPECT_EQ(word, "SCALARS");
  EXPECT_EQ(name, "xi_norm");
  in >> word >> type;
  EXPECT_EQ(word, "LOOKUP_TABLE");
  g.norms.resize(n);
  for (auto &v : g.norms)
  {
    in >> v;
  }
  EXPECT_TRUE(in.good() || in.eof());
  return g;
}

}  // namespace

TEST(Config, DefaultsAndValidation)
{
  RunConfig c = io::ParseConfig(R"({"M": 0.5, "s": 1})");
  EXPECT_EQ(c.mach, 0.5);
  EXPECT_TRUE(ValidateConfig(c).empty());
  c = io::ParseConfig(R"({"M": 0.5, "s": 0})");
  const auto w = ValidateConfig(c);
  ASSERT_EQ(w.size(), 2u);  // well-posedness plus experimental s != 1 with ABC
  EXPECT_NE(w[0].find("min(1, s) > M^2"), std::string::npos);
  try
  {
    io::ParseConfig(R"({"M": 1.2, "s": 1})");
    FAIL();
  }
  catch (const ConfigError &e)
  {
    EXPECT_NE(std::string(e.what()).find("subsonic"), std::string::npos);
  }
  EXPECT_THROW(io::ParseConfig(R"({"s": -0.1})"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"t_end": 1, "snapshot_times": [0.5, 1.5]})"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"nx": 0})"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"abc": "perfect"})"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"M": "fast"})"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"([1, 2])"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"M": )"), ConfigError);
  EXPECT_THROW(io::ParseConfig(R"({"field_format": "hdf5"})"), ConfigError);
}

TEST(Config, UnknownKeysAreListed)
{
  try
  {
    io::ParseConfig(R"({"M": 0.5, "mach_number": 0.5, "colour": "red"})");
    FAIL();
  }
  catch (const ConfigError &e)
  {
    const std::string what = e.what();
    EXPECT_NE(what.find("mach_number"), std::string::npos);
    EXPECT_NE(what.find("colour"), std::string::npos);
  }
}

TEST(Config, JsonRoundTrip)
{
  RunConfig c;
  c.mach = -0.25;
  c.s = 2.0;
  c.abc = AbcVariant::Naive;
  c.source.kind = SourceKind::Irrotational;
  c.source.time_profile.kind = TimeProfileKind::GaussianPulse;
  c.snapshot_times = {0.1, 0.2};
  c.initial.kind = InitialKind::PlaneWave;
  c.initial.center = {-1.0, 0.0};
  const RunConfig d = io::ParseConfig(io::ToJson(c).dump());
  EXPECT_EQ(io::ToJson(d), io::ToJson(c));
}

TEST(Config, ShippedConfigsLoad)
{
  for (const char *name :
       {"exp1_rotational.json", "exp2_duct_gaussian.json", "abc_reflection.json", "convergence.json"})
  {
    EXPECT_NO_THROW(io::LoadConfig(fs::path(GALBRUN_SOURCE_DIR) / "configs" / name)) << name;
  }
  EXPECT_THROW(io::LoadConfig("/nonexistent/config.json"), ConfigError);
}

TEST(Snapshot, FormatAndRoundTrip)
{
  const Mesh mesh = BuildDuctMesh({1.0, 0.5}, 4, 2);
  const DofMap dofs = BuildDofMap(mesh, Constraint::None);
  const Vector u = Interpolate(mesh, dofs, [](const Point &p) {
    return Vec2(std::sin(3.0 * p.x) + 1e-7 * p.y, 1.0 / 3.0 + p.x * p.y);
  });
  const std::string text = io::SnapshotText(mesh, dofs, u, 0.25);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const auto g = ParseGrid(text);
  ASSERT_EQ(g.points.size(), std::size_t(mesh.NumNodes()));
  ASSERT_EQ(g.cells.size(), std::size_t(mesh.NumTriangles()));
  const auto nodal = NodalValues(dofs, u);
  for (Index n = 0; n < mesh.NumNodes(); n++)
  {
    EXPECT_NEAR(g.points[n][0], mesh.nodes[n].x, 1e-9);
    for (int c = 0; c < 2; c++)
    {
      EXPECT_NEAR(g.vectors[n][c], nodal[n](c), 1e-9 * std::max(1.0, std::abs(nodal[n](c))));
    }
    EXPECT_EQ(g.vectors[n][2], 0.0);
    EXPECT_NEAR(g.norms[n], nodal[n].norm(), 1e-9 * std::max(1.0, nodal[n].norm()));
  }
  for (Index t = 0; t < mesh.NumTriangles(); t++)
  {
    for (int k = 0; k < 3; k++)
    {
      EXPECT_EQ(g.cells[t][k], mesh.triangles[t][k]);
    }
  }
}

TEST(Snapshot, NormOfThreeFourIsFive)
{
  const Mesh mesh = BuildDuctMesh({1.0, 0.5}, 2, 2);
  const DofMap dofs = BuildDofMap(mesh, Constraint::None);
  Vector u = Vector::Zero(dofs.NumDofs());
  const auto zero = ParseGrid(io::SnapshotText(mesh, dofs, u, 0.0));
  for (double v : zero.norms)
  {
    EXPECT_EQ(v, 0.0);
  }
  u(dofs.Dof(4, 0)) = 3.0;
  u(dofs.Dof(4, 1)) = 4.0;
  const auto g = ParseGrid(io::SnapshotText(mesh, dofs, u, 0.0));
  EXPECT_EQ(g.norms[4], 5.0);
  EXPECT_EQ(g.norms[3], 0.0);
}

TEST(Snapshot, UnwritablePathRaises)
{
  const Mesh mesh = BuildDuctMesh({1.0, 0.5}, 2, 2);
  const DofMap dofs = BuildDofMap(mesh);
  const fs::path dir = TempDir("unwritable");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(io::WriteSnapshot(mesh, dofs, Vector::Zero(dofs.NumDofs()), 0.0,
                                 dir / "file" / "sub" / "a.vtk"),
               IoError);
}

TEST(EnergyLog, HeaderOnlyAndRows)
{
  EXPECT_EQ(io::EnergyLogText({}), "step,t,E,flux,status\n");
  const std::vector<EnergyRecord> recs = {{1, 0.5, 0.25, 0.0, RecordStatus::Ok},
                                          {2, 1.0, 1e300, 3.5, RecordStatus::Warned}};
  EXPECT_EQ(io::EnergyLogText(recs),
            "step,t,E,flux,status\n1,0.5,0.25,0,ok\n2,1,1.0000000000000001e+300,3.5,warned\n");
}

TEST(Metadata, EchoReproducesRun)
{
  RunConfig c;
  c.geometry = {1.0, 0.5};
  c.nx = 16;
  c.ny = 8;
  c.t_end = 0.3;
  c.s = 0.5;
  c.source.kind = SourceKind::Rotational;
  c.snapshot_times = {0.3};
  const fs::path dir = TempDir("echo");
  const RunResult r = RunSimulation(c);
  io::WriteRunArtifacts(c, r, dir);
  const auto meta = io::Json::parse(ReadFile(dir / "metadata.json"));
  EXPECT_EQ(meta.at("run_info").at("vorticity_branch"), "convected");
  EXPECT_EQ(meta.at("run_info").at("experimental"), true);
  EXPECT_FALSE(meta.at("run_info").at("warnings").empty());
  EXPECT_TRUE(fs::exists(dir / io::SnapshotName(r.snapshots.at(0).step)));

  const RunConfig again = io::LoadConfig(dir / "metadata.json");
  const RunResult r2 = RunSimulation(again);
  EXPECT_EQ(io::EnergyLogText(r2.records), ReadFile(dir / "energy.csv"));

  c.mach = 0.0;
  EXPECT_EQ(io::Metadata(c, r).at("run_info").at("vorticity_branch"), "no_flow");
}
