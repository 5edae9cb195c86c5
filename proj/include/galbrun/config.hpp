// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_CONFIG_HPP
#define GALBRUN_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "galbrun/mesh.hpp"
#include "galbrun/physics.hpp"
#include "galbrun/sources.hpp"

namespace galbrun
{

enum class InitialKind : std::uint8_t
{
  Zero,
  GaussianPulse,  // xi = A exp(-|x - c|^2 / 2 w^2) (1, 0), at rest
  PlaneWave,      // downstream-travelling y-independent Gaussian pulse
};

inline const char *ToString(InitialKind kind)
{
  switch (kind)
  {
    case InitialKind::Zero:
      return "zero";
    case InitialKind::GaussianPulse:
      return "gaussian_pulse";
    case InitialKind::PlaneWave:
      return "plane_wave";
  }
  return "?";
}

struct InitialCondition
{
  InitialKind kind = InitialKind::Zero;
  Point center;
  double width = 0.2;
  double amplitude = 1.0;
};

struct RunConfig
{
  DuctGeometry geometry{4.0, 1.0};
  Index nx = 160;
  Index ny = 40;
  double cfl_safety = 0.35;
  double t_end = 2.0;
  std::vector<double> snapshot_times;

  double mach = 0.5;
  double s = 1.0;
  AbcVariant abc = AbcVariant::Stable;

  SourceSpec source;
  InitialCondition initial;

  std::string output_dir = "out";
  std::string field_format = "vtk";
  std::string energy_log = "energy.csv";
  bool serial_deterministic = true;

  // Unstable once E exceeds this factor times max(1, early energy).
  double instability_factor = 1e12;

  // Interior probe used by the reflection study.
  Point probe{0.0, 0.0};
};

// Hard errors throw ConfigError; soft issues are returned as warnings.
inline std::vector<std::string> ValidateConfig(const RunConfig &c)
{
  std::vector<std::string> warnings;
  auto fail = [](const std::string &msg) { throw ConfigError(msg); };
  if (!(c.geometry.R > 0.0) || !(c.geometry.h > 0.0))
  {
    fail("R and h must be positive");
  }
  if (c.nx < 1 || c.ny < 1)
  {
    fail("nx and ny must be at least 1");
  }
  if (!(std::abs(c.mach) < 1.0))
  {
    fail("Mach number must satisfy |M| < 1 (subsonic flow); got M = " + std::to_string(c.mach));
  }
  if (!(c.s >= 0.0))
  {
    fail("regularization parameter s must be non-negative");
  }
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
  {
    fail("cfl_safety must lie in (0, 1]");
  }
  if (!(c.t_end > 0.0))
  {
    fail("t_end must be positive");
  }
  for (double t : c.snapshot_times)
  {
    if (!(t >= 0.0 && t <= c.t_end))
    {
      fail("snapshot time " + std::to_string(t) + " is outside [0, t_end]");
    }
  }
  if (c.field_format != "vtk")
  {
    fail("field_format must be \"vtk\"");
  }
  if (!(c.instability_factor > 1.0))
  {
    fail("instability_factor must exceed 1");
  }
  auto inside = [&](const Point &p) {
    return std::abs(p.x) < c.geometry.R && std::abs(p.y) < c.geometry.h;
  };
  if (c.source.kind != SourceKind::None)
  {
    if (!(c.source.width > 0.0))
    {
      fail("source_width must be positive");
    }
    if (c.source.time_profile.kind != TimeProfileKind::Continuous &&
        !(c.source.time_profile.sigma > 0.0))
    {
      fail("source_sigma_t must be positive");
    }
    if (!inside(c.source.center))
    {
      fail("source center must lie inside the duct");
    }
  }
  if (c.initial.kind != InitialKind::Zero && !(c.initial.width > 0.0))
  {
    fail("initial_width must be positive");
  }
  if (!inside(c.probe))
  {
    fail("probe must lie inside the duct");
  }

  if (std::min(1.0, c.s) <= c.mach * c.mach)
  {
    std::ostringstream os;
    os << "well-posedness hypothesis min(1, s) > M^2 is violated (s = " << c.s
       << ", M^2 = " << c.mach * c.mach << "); the run may be unstable";
    warnings.push_back(os.str());
  }
  if (c.abc != AbcVariant::None && c.s != 1.0)
  {
    warnings.push_back("experimental: absorbing boundary forms are derived for s = 1");
  }
  if (c.abc == AbcVariant::None && c.mach != 0.0)
  {
    warnings.push_back("closed box with M != 0: the end walls are not energy neutral");
  }
  return warnings;
}

}  // namespace galbrun

#endif  // GALBRUN_CONFIG_HPP
