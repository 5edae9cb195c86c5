// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_STUDIES_HPP
#define GALBRUN_STUDIES_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "galbrun/config.hpp"
#include "galbrun/dynamics.hpp"
#include "galbrun/manufactured.hpp"
#include "galbrun/mesh.hpp"

namespace galbrun
{

namespace detail
{

inline std::string Fmt(const char *fmt, auto... args)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace detail

//
// Convergence against the smooth manufactured solution. Spatial: (h, dt) refined together
// from the config mesh, errors against the exact field. Temporal: dt refined on the finest
// mesh, errors against a run with a much smaller step on the same mesh.
//
struct ConvergenceLevel
{
  Index nx, ny;
  double h;
  double dt;
  double error;
};

struct ConvergenceReport
{
  std::vector<ConvergenceLevel> spatial;
  std::vector<ConvergenceLevel> temporal;
  double spatial_order = 0.0;
  double temporal_order = 0.0;
  double reference_dt = 0.0;

  std::string Text() const
  {
    std::string s = "# convergence (manufactured solution, L2 error at t_end)\n";
    s += "# spatial: h and dt refined together\n";
    s += "level nx ny h dt error\n";
    for (std::size_t k = 0; k < spatial.size(); k++)
    {
      const auto &l = spatial[k];
      s += detail::Fmt("%zu %lld %lld %.6e %.6e %.6e\n", k, (long long)l.nx, (long long)l.ny, l.h,
                       l.dt, l.error);
    }
    s += detail::Fmt("spatial_order %.4f\n", spatial_order);
    s += detail::Fmt("# temporal: fixed mesh, dt refined, reference dt %.6e\n", reference_dt);
    s += "level nx ny h dt error\n";
    for (std::size_t k = 0; k < temporal.size(); k++)
    {
      const auto &l = temporal[k];
      s += detail::Fmt("%zu %lld %lld %.6e %.6e %.6e\n", k, (long long)l.nx, (long long)l.ny, l.h,
                       l.dt, l.error);
    }
    s += detail::Fmt("temporal_order %.4f\n", temporal_order);
    return s;
  }
};

inline ConvergenceReport CmdConvergence(const RunConfig &cfg, int levels)
{
  if (levels < 3)
  {
    throw ConfigError("convergence study needs at least 3 levels");
  }
  ValidateConfig(cfg);
  const auto m = SmoothManufactured(cfg.geometry, cfg.mach, cfg.s);
  ConvergenceReport rep;
  auto steps_for = [&](const Mesh &mesh) {
    const double dt_cfl = cfg.cfl_safety * mesh.MinEdgeLength() / (1.0 + std::abs(cfg.mach));
    return std::max<std::int64_t>(1, std::int64_t(std::ceil(cfg.t_end / dt_cfl - 1e-9)));
  };

  std::vector<double> hs, errs;
  std::int64_t coarse_steps = 0;
  for (int k = 0; k < levels; k++)
  {
    const Index nx = cfg.nx << k, ny = cfg.ny << k;
    const Mesh mesh = BuildDuctMesh(cfg.geometry, nx, ny);
    // Keep dt / h fixed across levels so both error sources shrink at the same rate.
    if (k == 0)
    {
      coarse_steps = steps_for(mesh);
    }
    const std::int64_t n = coarse_steps << k;
    const auto run = SolveManufactured(m, mesh, cfg.t_end, n);
    const double h = 2.0 * cfg.geometry.R / double(nx);
    rep.spatial.push_back({nx, ny, h, run.dt, run.l2_error});
    hs.push_back(h);
    errs.push_back(run.l2_error);
  }
  rep.spatial_order = ObservedOrder(hs, errs);

  const Index nx = cfg.nx << (levels - 1), ny = cfg.ny << (levels - 1);
  const Mesh mesh = BuildDuctMesh(cfg.geometry, nx, ny);
  const double h = 2.0 * cfg.geometry.R / double(nx);
  const std::int64_t n0 = steps_for(mesh);
  const auto reference = SolveManufactured(m, mesh, cfg.t_end, n0 << (levels + 3));
  rep.reference_dt = reference.dt;
  const DofMap dofs = BuildDofMap(mesh, Constraint::Walls);
  std::vector<double> dts, terrs;
  for (int k = 0; k < levels; k++)
  {
    const auto run = SolveManufactured(m, mesh, cfg.t_end, n0 << k);
    const double err = L2Error(mesh, dofs, run.xi - reference.xi,
                               [](const Point &) { return Vec2(0.0, 0.0); });
    rep.temporal.push_back({nx, ny, h, run.dt, err});
    dts.push_back(run.dt);
    terrs.push_back(err);
  }
  rep.temporal_order = ObservedOrder(dts, terrs);
  return rep;
}

//
// Reflection of a downstream-travelling plane pulse at Gamma+. At a fixed interior probe,
// rho = (largest |xi| after the incident pulse has passed) / (peak |xi| while it passes).
//
struct ReflectionLevel
{
  Index nx, ny;
  double dt;
  double incident_peak;
  double reflected_peak;
  double rho;
  RunStatus status;
};

struct ReflectionReport
{
  AbcVariant abc = AbcVariant::Stable;
  std::vector<ReflectionLevel> levels;
  std::vector<std::string> warnings;

  std::string Text() const
  {
    std::string s = std::string("# abc reflection, variant ") + ToString(abc) + "\n";
    s += "level nx ny dt incident_peak reflected_peak rho status\n";
    for (std::size_t k = 0; k < levels.size(); k++)
    {
      const auto &l = levels[k];
      s += detail::Fmt("%zu %lld %lld %.6e %.6e %.6e %.6e %s\n", k, (long long)l.nx,
                       (long long)l.ny, l.dt, l.incident_peak, l.reflected_peak, l.rho,
                       ToString(l.status));
    }
    for (const auto &w : warnings)
    {
      s += "warning: " + w + "\n";
    }
    return s;
  }
};

inline ReflectionReport CmdAbcReflection(RunConfig cfg, int levels = 3)
{
  if (levels < 1)
  {
    throw ConfigError("reflection study needs at least 1 level");
  }
  cfg.initial.kind = InitialKind::PlaneWave;
  cfg.source.kind = SourceKind::None;
  cfg.snapshot_times.clear();
  ValidateConfig(cfg);
  const double M = cfg.mach, R = cfg.geometry.R;
  const double x0 = cfg.initial.center.x, xp = cfg.probe.x, w = cfg.initial.width;
  if (!(xp > x0))
  {
    throw ConfigError("probe must lie downstream of the initial pulse");
  }
  // Incident pulse at the probe: |t - tp| <= half_width (the profile is below exp(-8) outside).
  const double tp = (xp - x0) / (1.0 + M), half_width = 4.0 * w / (1.0 + M);
  const double t_return = (R - x0) / (1.0 + M) + (R - xp) / (1.0 - M);
  if (cfg.t_end < t_return)
  {
    throw ConfigError(detail::Fmt(
      "pulse does not reach Gamma+ and return to the probe before t_end; use t_end >= %.4g",
      t_return));
  }

  ReflectionReport rep;
  rep.abc = cfg.abc;
  for (int k = 0; k < levels; k++)
  {
    RunConfig c = cfg;
    c.nx = cfg.nx << k;
    c.ny = cfg.ny << k;
    const RunResult run = RunSimulation(c);
    double incident = 0.0, reflected = 0.0;
    for (std::size_t n = 0; n < run.probe_history.size(); n++)
    {
      const double t = double(n) * run.dt;
      const double a = run.probe_history[n].norm();
      if (std::abs(t - tp) <= half_width)
      {
        incident = std::max(incident, a);
      }
      else if (t > tp + half_width)
      {
        reflected = std::max(reflected, a);
      }
    }
    const double rho = incident > 0.0 ? reflected / incident : 0.0;
    rep.levels.push_back({c.nx, c.ny, run.dt, incident, reflected, rho, run.status});
    if (run.status == RunStatus::Unstable)
    {
      rep.warnings.push_back(detail::Fmt("level %d became unstable at step %lld; rho is not meaningful", k,
                                         (long long)run.unstable_step));
    }
  }
  return rep;
}

//
// The same rotational-source run with and without regularization.
//
struct ContrastRun
{
  double s;
  RunStatus status;
  std::int64_t unstable_step;
  double dt;
  double final_energy;
  double peak_energy;
  std::vector<double> snapshot_times;
};

struct ContrastReport
{
  std::vector<ContrastRun> runs;

  std::string Text() const
  {
    std::string s = "# stability contrast\n";
    s += "s status unstable_step dt final_E peak_E snapshots\n";
    for (const auto &r : runs)
    {
      std::string snaps;
      for (double t : r.snapshot_times)
      {
        snaps += (snaps.empty() ? "" : ";") + detail::Fmt("%g", t);
      }
      s += detail::Fmt("%g %s %lld %.6e %.6e %.6e %s\n", r.s, ToString(r.status),
                       (long long)r.unstable_step, r.dt, r.final_energy, r.peak_energy,
                       snaps.empty() ? "-" : snaps.c_str());
    }
    return s;
  }
};

inline ContrastRun SummarizeContrast(double s, const RunResult &r)
{
  ContrastRun out{s, r.status, r.unstable_step, r.dt, 0.0, 0.0, {}};
  for (const auto &rec : r.records)
  {
    if (std::isfinite(rec.E))
    {
      out.peak_energy = std::max(out.peak_energy, rec.E);
    }
  }
  if (!r.records.empty())
  {
    out.final_energy = r.records.back().E;
  }
  for (const auto &snap : r.snapshots)
  {
    out.snapshot_times.push_back(snap.t);
  }
  return out;
}

// Runs s = 0 and s = 1 on the base config. on_run sees each (config, result) pair.
template <typename OnRun>
ContrastReport CmdStabilityContrast(RunConfig base, OnRun &&on_run)
{
  if (base.snapshot_times.empty())
  {
    for (double t : {1.5, 1.75, 2.0})
    {
      if (t <= base.t_end)
      {
        base.snapshot_times.push_back(t);
      }
    }
  }
  ContrastReport rep;
  for (double s : {0.0, 1.0})
  {
    RunConfig c = base;
    c.s = s;
    const RunResult r = RunSimulation(c);
    on_run(c, r);
    rep.runs.push_back(SummarizeContrast(s, r));
  }
  return rep;
}

inline ContrastReport CmdStabilityContrast(const RunConfig &base)
{
  return CmdStabilityContrast(base, [](const RunConfig &, const RunResult &) {});
}

}  // namespace galbrun

#endif  // GALBRUN_STUDIES_HPP
