// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_DYNAMICS_HPP
#define GALBRUN_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "galbrun/assembly.hpp"
#include "galbrun/config.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/physics.hpp"
#include "galbrun/state.hpp"

namespace galbrun
{

// Non-finite values produced by a time step.
class InstabilityError : public std::runtime_error
{
public:
  InstabilityError(std::int64_t step, const std::string &what)
    : std::runtime_error(what), step_(step)
  {
  }
  std::int64_t Step() const { return step_; }

private:
  std::int64_t step_;
};

// dt = cfl_safety * h_min / (1 + |M|): 1 + |M| is the fastest characteristic speed.
inline double PlanTimeStep(const SystemMatrices &mats, double cfl_safety, const Mesh &mesh)
{
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
  {
    throw ConfigError("cfl_safety must lie in (0, 1]");
  }
  const double hmin = mesh.MinEdgeLength();
  if (!(hmin > 0.0) || !std::isfinite(hmin))
  {
    throw ConfigError("degenerate mesh: minimal edge length is zero");
  }
  return cfl_safety * hmin / (1.0 + std::abs(mats.mach));
}

// Largest stable step of the undamped leapfrog, 2 / sqrt(lambda_max) with lambda_max the
// top eigenvalue of Mh^{-1} sym(Ah + Dh), estimated by power iteration.
inline double LeapfrogStepLimit(const SystemMatrices &mats, int iterations = 60)
{
  const SparseMatrix K0 = mats.Ah + mats.Dh;
  const SparseMatrix K = 0.5 * (K0 + SparseMatrix(K0.transpose()));
  Eigen::SimplicialLDLT<SparseMatrix> mass(mats.Mh);
  Vector x = Vector::Ones(mats.Size());
  for (Index i = 0; i < x.size(); i++)
  {
    x(i) += 0.5 * std::sin(1.7 * double(i));  // avoid symmetric starting vectors
  }
  double lambda = 0.0;
  for (int k = 0; k < iterations; k++)
  {
    const Vector y = mass.solve(K * x);
    const double num = x.dot(K * x), den = x.dot(mats.Mh * x);
    lambda = den > 0.0 ? num / den : 0.0;
    const double n = y.norm();
    if (!(n > 0.0))
    {
      break;
    }
    x = y / n;
  }
  return lambda > 0.0 ? 2.0 / std::sqrt(lambda) : std::numeric_limits<double>::infinity();
}

//
// Centered scheme
//
//   Mh (x^{n+1} - 2 x^n + x^{n-1}) / dt^2 + (Bh + Ch) (x^{n+1} - x^{n-1}) / (2 dt)
//     + (Ah + Dh) x^n = F^n,
//
// solved for x^{n+1} with a sparse LU factorization of L = Mh / dt^2 + (Bh + Ch) / (2 dt),
// computed once.
//
class StepOperator
{
public:
  StepOperator(const SystemMatrices &mats, double dt) : dt_(dt)
  {
    if (!(dt > 0.0))
    {
      throw ConfigError("time step must be positive");
    }
    mass_ = mats.Mh;
    damping_ = mats.Bh + mats.Ch;
    stiffness_ = mats.Ah + mats.Dh;
    mass_over_dt2_ = mats.Mh / (dt * dt);
    lhs_ = mass_over_dt2_ + damping_ / (2.0 * dt);
    lagged_ = mass_over_dt2_ - damping_ / (2.0 * dt);
    lhs_.makeCompressed();

    lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
    lu_->analyzePattern(lhs_);
    lu_->factorize(lhs_);
    if (lu_->info() != Eigen::Success)
    {
      throw ConfigError("step operator factorization failed: " + lu_->lastErrorMessage());
    }
    // Pivots are the diagonal of the supernodal L storage.
    const auto &Lstore = lu_->matrixL().m_mapL;
    double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
    for (Index j = 0; j < lhs_.cols(); j++)
    {
      for (typename std::decay_t<decltype(Lstore)>::InnerIterator it(Lstore, j); it; ++it)
      {
        if (it.index() == j)
        {
          pmin = std::min(pmin, std::abs(it.value()));
          pmax = std::max(pmax, std::abs(it.value()));
          break;
        }
      }
    }
    min_pivot_ = pmin;
    if (!(pmin > 1e-13 * pmax))
    {
      std::ostringstream os;
      os << "step operator is numerically singular: smallest pivot " << pmin
         << " (largest " << pmax << ")";
      throw ConfigError(os.str());
    }
  }

  double Dt() const { return dt_; }
  double MinPivot() const { return min_pivot_; }
  Index Size() const { return lhs_.rows(); }

  const SparseMatrix &Lhs() const { return lhs_; }
  const SparseMatrix &Mass() const { return mass_; }
  const SparseMatrix &Damping() const { return damping_; }
  const SparseMatrix &Stiffness() const { return stiffness_; }

  Vector Solve(const Vector &r) const { return lu_->solve(r); }

  // Right-hand side of L x^{n+1} = r.
  Vector Rhs(const Vector &prev, const Vector &curr, const Vector &load) const
  {
    return mass_over_dt2_ * (2.0 * curr) - lagged_ * prev - stiffness_ * curr + load;
  }

  // Relative residual of the scheme for three consecutive levels.
  double SchemeResidual(const Vector &prev, const Vector &curr, const Vector &next,
                        const Vector &load) const
  {
    const Vector r = mass_ * (next - 2.0 * curr + prev) / (dt_ * dt_) +
                     damping_ * (next - prev) / (2.0 * dt_) + stiffness_ * curr - load;
    const double scale = (lhs_ * next).norm() + (mass_over_dt2_ * (2.0 * curr)).norm() +
                         (lagged_ * prev).norm() + (stiffness_ * curr).norm() + load.norm();
    return scale > 0.0 ? r.norm() / scale : r.norm();
  }

private:
  double dt_;
  double min_pivot_ = 0.0;
  SparseMatrix mass_, damping_, stiffness_, mass_over_dt2_, lhs_, lagged_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

inline StepOperator BuildStepOperator(const SystemMatrices &mats, double dt)
{
  return StepOperator(mats, dt);
}

inline SimState LeapfrogStep(const SimState &state, const StepOperator &op, const Vector &load)
{
  SimState next;
  next.dt = state.dt;
  next.step = state.step + 1;
  next.xi_prev = state.xi_curr;
  next.xi_curr = op.Solve(op.Rhs(state.xi_prev, state.xi_curr, load));
  if (!next.xi_curr.allFinite())
  {
    throw InstabilityError(next.step, "non-finite displacement at step " +
                                        std::to_string(next.step));
  }
  return next;
}

// Second-order start x^1 = x^0 + dt v^0 + dt^2 / 2 a^0 with the semi-discrete acceleration
// a^0 = Mh^{-1} (F^0 - (Ah + Dh) x^0 - (Bh + Ch) v^0).
inline SimState TaylorStart(const StepOperator &op, const Vector &xi0, const Vector &v0,
                            const Vector &load0)
{
  const double dt = op.Dt();
  SimState s;
  s.dt = dt;
  s.step = 1;
  s.xi_prev = xi0;
  if (xi0.isZero(0.0) && v0.isZero(0.0) && load0.isZero(0.0))
  {
    s.xi_curr = xi0;
    return s;
  }
  Eigen::SimplicialLDLT<SparseMatrix> mass(op.Mass());
  const Vector a0 = mass.solve(load0 - op.Stiffness() * xi0 - op.Damping() * v0);
  s.xi_curr = xi0 + dt * v0 + 0.5 * dt * dt * a0;
  return s;
}

enum class RunStatus
{
  Stable,
  Unstable
};

inline const char *ToString(RunStatus status)
{
  return status == RunStatus::Stable ? "stable" : "unstable";
}

enum class RecordStatus
{
  Ok,
  Warned
};

// E and flux are evaluated between levels step-1 and step; t = step * dt.
struct EnergyRecord
{
  std::int64_t step;
  double t;
  double E;
  double flux;
  RecordStatus status;
};

struct IntegrationOptions
{
  double instability_factor = 1e12;
  std::int64_t early_steps = 10;
  bool record_energy = true;
};

struct IntegrationResult
{
  RunStatus status = RunStatus::Stable;
  std::int64_t unstable_step = -1;
  std::vector<EnergyRecord> records;
  SimState final_state;
};

using LoadFunction = std::function<Vector(double)>;
using StepObserver = std::function<void(const SimState &)>;

//
// Advance `start` (levels 0 and 1) to level `n_steps`. The observer sees every state,
// including the starting one. Instability (non-finite values or energy above
// instability_factor * max(1, early energy)) stops the loop with partial results kept.
//
inline IntegrationResult Integrate(const Mesh &mesh, const DofMap &dofs,
                                   const SystemMatrices &mats, const StepOperator &op,
                                   const LoadFunction &load, SimState start,
                                   std::int64_t n_steps, const IntegrationOptions &opts = {},
                                   const StepObserver &observer = {})
{
  IntegrationResult result;
  SimState state = std::move(start);
  double early = 0.0;
  auto record = [&](const SimState &s) -> bool {
    if (!opts.record_energy)
    {
      return true;
    }
    const double E = Energy(s, mats, mesh, dofs);
    const double flux = BoundaryFlux(s, mats, mesh, dofs);
    if (s.step <= opts.early_steps && std::isfinite(E))
    {
      early = std::max(early, std::abs(E));
    }
    const bool blown =
      !std::isfinite(E) ||
      (s.step > opts.early_steps && E > opts.instability_factor * std::max(1.0, early));
    result.records.push_back(
      {s.step, s.Time(), E, flux, blown ? RecordStatus::Warned : RecordStatus::Ok});
    return !blown;
  };

  if (observer)
  {
    observer(state);
  }
  bool ok = record(state);
  const Vector zero = Vector::Zero(dofs.NumDofs());
  while (ok && state.step < n_steps)
  {
    try
    {
      const Vector F = load ? load(state.Time()) : zero;
      state = LeapfrogStep(state, op, F);
    }
    catch (const InstabilityError &e)
    {
      result.status = RunStatus::Unstable;
      result.unstable_step = e.Step();
      result.final_state = state;
      return result;
    }
    if (observer)
    {
      observer(state);
    }
    ok = record(state);
  }
  if (!ok)
  {
    result.status = RunStatus::Unstable;
    result.unstable_step = state.step;
  }
  result.final_state = std::move(state);
  return result;
}

struct Snapshot
{
  std::int64_t step;
  double t;
  Vector field;
};

struct RunResult
{
  RunStatus status = RunStatus::Stable;
  std::int64_t unstable_step = -1;
  double dt = 0.0;
  std::int64_t n_steps = 0;
  std::vector<std::string> warnings;
  std::vector<EnergyRecord> records;
  std::vector<Snapshot> snapshots;
  std::vector<Vec2> probe_history;  // displacement at the probe, per level
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const DofMap> dofs;
};

// Free unknowns of the configured initial displacement and velocity.
inline std::pair<Vector, Vector> InitialFields(const RunConfig &cfg, const Mesh &mesh,
                                               const DofMap &dofs)
{
  const auto &ic = cfg.initial;
  const Vector zero = Vector::Zero(dofs.NumDofs());
  switch (ic.kind)
  {
    case InitialKind::Zero:
      return {zero, zero};
    case InitialKind::GaussianPulse:
    {
      auto xi = [&](const Point &p) -> Vec2 {
        const double dx = p.x - ic.center.x, dy = p.y - ic.center.y;
        return {ic.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * ic.width * ic.width)), 0.0};
      };
      return {Interpolate(mesh, dofs, xi), zero};
    }
    case InitialKind::PlaneWave:
    {
      const auto wave =
        GaussianPlaneWave(Direction::Right, ic.center.x, ic.width, cfg.mach, ic.amplitude);
      return {Interpolate(mesh, dofs, [&](const Point &p) { return wave.Displacement(p.x, 0.0); }),
              Interpolate(mesh, dofs, [&](const Point &p) { return wave.Velocity(p.x, 0.0); })};
    }
  }
  return {zero, zero};
}

// Interpolated displacement at a point from the containing triangle of the structured mesh.
inline Vec2 EvaluateAt(const Mesh &mesh, const DofMap &dofs, const Vector &u, const Point &p)
{
  const double hx = 2.0 * mesh.geometry.R / double(mesh.nx);
  const double hy = 2.0 * mesh.geometry.h / double(mesh.ny);
  const Index i = std::clamp<Index>(Index(std::floor((p.x + mesh.geometry.R) / hx)), 0, mesh.nx - 1);
  const Index j = std::clamp<Index>(Index(std::floor((p.y + mesh.geometry.h) / hy)), 0, mesh.ny - 1);
  const double lx = (p.x - mesh.nodes[mesh.Node(i, j)].x) / hx;
  const double ly = (p.y - mesh.nodes[mesh.Node(i, j)].y) / hy;
  const Index t = 2 * (j * mesh.nx + i) + (ly > lx ? 1 : 0);
  const auto g = MakeTriangleGeometry(mesh, t);
  const auto &tri = mesh.triangles[t];
  const Point c = g.Map({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const Vec2 d(p.x - c.x, p.y - c.y);
  Vec2 v = Vec2::Zero();
  for (int k = 0; k < 3; k++)
  {
    const double lambda = 1.0 / 3.0 + g.grad[k].dot(d);
    for (int comp = 0; comp < 2; comp++)
    {
      const Index dof = dofs.Dof(tri[k], comp);
      if (dof != DofMap::kConstrained)
      {
        v(comp) += lambda * u(dof);
      }
    }
  }
  return v;
}

inline RunResult RunSimulation(const RunConfig &cfg, const StepObserver &observer = {})
{
  RunResult out;
  out.warnings = ValidateConfig(cfg);
  auto mesh = std::make_shared<Mesh>(BuildDuctMesh(cfg.geometry, cfg.nx, cfg.ny));
  auto dofs = std::make_shared<DofMap>(BuildDofMap(*mesh, ConstraintFor(cfg.abc)));
  out.mesh = mesh;
  out.dofs = dofs;

  const SystemMatrices mats = AssembleSystem(*mesh, *dofs, cfg.mach, cfg.s, cfg.abc);
  // Land exactly on t_end with a step no larger than the CFL step.
  const double dt_cfl = PlanTimeStep(mats, cfg.cfl_safety, *mesh);
  out.n_steps = std::max<std::int64_t>(1, std::int64_t(std::ceil(cfg.t_end / dt_cfl - 1e-9)));
  out.dt = cfg.t_end / double(out.n_steps);
  const StepOperator op(mats, out.dt);
  if (const double limit = LeapfrogStepLimit(mats); out.dt > 0.98 * limit)
  {
    std::ostringstream os;
    os << "dt = " << out.dt << " is at or above the estimated leapfrog stability limit " << limit
       << "; lower cfl_safety";
    out.warnings.push_back(os.str());
  }

  const SourceLoad source(*mesh, *dofs, cfg.source, cfg.mach, cfg.s);
  LoadFunction load;
  if (source.Active())
  {
    load = [&source](double t) { return source(t); };
  }
  const auto [xi0, v0] = InitialFields(cfg, *mesh, *dofs);
  const Vector F0 = load ? load(0.0) : Vector::Zero(dofs->NumDofs());
  SimState start = TaylorStart(op, xi0, v0, F0);

  std::vector<std::int64_t> snap_steps;
  for (double t : cfg.snapshot_times)
  {
    snap_steps.push_back(std::llround(t / out.dt));
  }
  auto maybe_snapshot = [&](std::int64_t step, const Vector &field) {
    for (std::size_t k = 0; k < snap_steps.size(); k++)
    {
      if (snap_steps[k] == step)
      {
        out.snapshots.push_back({step, double(step) * out.dt, field});
        break;
      }
    }
  };
  maybe_snapshot(0, start.xi_prev);
  out.probe_history.push_back(EvaluateAt(*mesh, *dofs, start.xi_prev, cfg.probe));

  IntegrationOptions opts;
  opts.instability_factor = cfg.instability_factor;
  auto result = Integrate(*mesh, *dofs, mats, op, load, std::move(start), out.n_steps, opts,
                          [&](const SimState &s) {
                            maybe_snapshot(s.step, s.xi_curr);
                            out.probe_history.push_back(EvaluateAt(*mesh, *dofs, s.xi_curr, cfg.probe));
                            if (observer)
                            {
                              observer(s);
                            }
                          });
  out.status = result.status;
  out.unstable_step = result.unstable_step;
  out.records = std::move(result.records);
  return out;
}

}  // namespace galbrun

#endif  // GALBRUN_DYNAMICS_HPP
