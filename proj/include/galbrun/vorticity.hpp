// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_VORTICITY_HPP
#define GALBRUN_VORTICITY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Core>

#include "galbrun/quadrature.hpp"
#include "galbrun/sources.hpp"

namespace galbrun
{

//
// Lagrangian vorticity psi = curl xi in a uniform flow. With D/Dt = d_t + M d_x it solves
// D^2 psi / Dt^2 = curl f, whose general solution is
//
//   psi(x, y, t) = alpha(x - M t, y) + x beta(x - M t, y)
//                  + 1/M^2 int_0^x (x - a) curl f(a, y, t - (x - a)/M) da,
//
// alpha and beta being fixed by the initial data.
//
struct VorticityInputs
{
  std::function<double(double, double)> alpha;  // (x - M t, y)
  std::function<double(double, double)> beta;   // (x - M t, y)
  std::function<double(double, double, double)> curl_f;  // (x, y, t)
  double mach = 0.5;
};

enum class VorticityBranch
{
  Convected,  // M != 0, closed form above
  NoFlow,     // M == 0: psi = alpha + x beta + int_0^t (t - tau) curl f(x, y, tau) dtau
};

inline VorticityBranch BranchFor(double mach)
{
  return mach == 0.0 ? VorticityBranch::NoFlow : VorticityBranch::Convected;
}

inline const char *ToString(VorticityBranch branch)
{
  return branch == VorticityBranch::NoFlow ? "no_flow" : "convected";
}

inline double AnalyticVorticity(const VorticityInputs &in, double x, double y, double t,
                                double rel_tol = 1e-8)
{
  const double M = in.mach;
  const double xi = x - M * t;
  double psi = 0.0;
  if (in.alpha)
  {
    psi += in.alpha(xi, y);
  }
  if (in.beta)
  {
    psi += x * in.beta(xi, y);
  }
  if (!in.curl_f)
  {
    return psi;
  }
  if (BranchFor(M) == VorticityBranch::NoFlow)
  {
    // Double time integral of curl f written as a single Duhamel integral.
    return psi + quadrature::AdaptiveGauss(
                   [&](double tau) { return (t - tau) * in.curl_f(x, y, tau); }, 0.0, t, rel_tol);
  }
  const double integral = quadrature::AdaptiveGauss(
    [&](double a) { return (x - a) * in.curl_f(a, y, t - (x - a) / M); }, 0.0, x, rel_tol);
  return psi + integral / (M * M);
}

// alpha and beta for which the closed form is the causal response to curl f from rest at
// t = 0, i.e. psi(., 0) = d_t psi(., 0) = 0 when curl f vanishes for t < 0:
//   beta(p, y)  =  1/M int_0^{-p/M} g(p + M tau, y, tau) dtau
//   alpha(p, y) = -1/M int_0^{-p/M} (p + M tau) g(p + M tau, y, tau) dtau
inline VorticityInputs ZeroInitialDataInputs(std::function<double(double, double, double)> curl_f,
                                             double mach, double rel_tol = 1e-10)
{
  VorticityInputs in;
  in.mach = mach;
  in.curl_f = curl_f;
  if (mach == 0.0)
  {
    return in;
  }
  in.beta = [curl_f, mach, rel_tol](double p, double y) {
    return quadrature::AdaptiveGauss(
             [&](double tau) { return curl_f(p + mach * tau, y, tau); }, 0.0, -p / mach,
             rel_tol) /
           mach;
  };
  in.alpha = [curl_f, mach, rel_tol](double p, double y) {
    return -quadrature::AdaptiveGauss(
             [&](double tau) {
               const double a = p + mach * tau;
               return a * curl_f(a, y, tau);
             },
             0.0, -p / mach, rel_tol) /
           mach;
  };
  return in;
}

//
// Vorticity driven from rest by a Gaussian-potential source, evaluated along the flow
// characteristics:
//
//   psi(x, y, t) = int_0^t (t - tau) curl f(x - M (t - tau), y, tau) dtau.
//
// This is the closed form with the alpha, beta of ZeroInitialDataInputs. The integration
// window is clipped to where the characteristic meets the source support in space and
// time.
//
class ConvectedVorticity
{
public:
  ConvectedVorticity(const SourceSpec &source, double mach) : source_(source), mach_(mach) {}

  double Psi(const Point &p, double t) const
  {
    return Integrate(p, t, [&](const Point &q) { return source_.SpatialCurl(q); });
  }

  // Gradient of psi (spatial derivatives under the integral sign).
  Eigen::Vector2d GradPsi(const Point &p, double t) const
  {
    if (source_.kind != SourceKind::Rotational)
    {
      return Eigen::Vector2d::Zero();
    }
    return {Integrate(p, t, [&](const Point &q) { return source_.SpatialCurlGradient(q).x(); }),
            Integrate(p, t, [&](const Point &q) { return source_.SpatialCurlGradient(q).y(); })};
  }

  // Vector curl (d_y psi, -d_x psi).
  Eigen::Vector2d CurlPsi(const Point &p, double t) const
  {
    const Eigen::Vector2d g = GradPsi(p, t);
    return {g.y(), -g.x()};
  }

  // Convergence-checked evaluation of psi, for verification.
  double PsiAdaptive(const Point &p, double t, double rel_tol) const
  {
    if (source_.kind != SourceKind::Rotational || t <= 0.0)
    {
      return 0.0;
    }
    return source_.amplitude == 0.0
             ? 0.0
             : quadrature::AdaptiveGauss(
                 [&](double tau) {
                   return (t - tau) * source_.SpatialCurl({p.x - mach_ * (t - tau), p.y}) *
                          source_.time_profile(tau);
                 },
                 0.0, t, rel_tol, 16);
  }

private:
  template <typename G>
  double Integrate(const Point &p, double t, const G &spatial) const
  {
    if (source_.kind != SourceKind::Rotational || source_.amplitude == 0.0 || t <= 0.0)
    {
      return 0.0;
    }
    const double cut = source_.CutoffRadius();
    if (std::abs(p.y - source_.center.y) > cut)
    {
      return 0.0;
    }
    const auto [ts_lo, ts_hi] = source_.time_profile.Support();
    double lo = std::max(0.0, ts_lo), hi = std::min(t, ts_hi);
    const double dx = p.x - source_.center.x;
    if (mach_ == 0.0)
    {
      if (std::abs(dx) > cut)
      {
        return 0.0;
      }
    }
    else
    {
      // |dx - M (t - tau)| <= cut.
      const double r1 = t - (dx + cut) / mach_, r2 = t - (dx - cut) / mach_;
      lo = std::max(lo, std::min(r1, r2));
      hi = std::min(hi, std::max(r1, r2));
    }
    if (!(hi > lo))
    {
      return 0.0;
    }
    double scale = source_.time_profile.Scale();
    if (mach_ != 0.0)
    {
      scale = std::min(scale, source_.width / std::abs(mach_));
    }
    const int panels =
      std::isfinite(scale) ? std::max(1, static_cast<int>(std::ceil(2.0 * (hi - lo) / scale))) : 1;
    return quadrature::CompositeGauss(
             [&](double tau) {
               return (t - tau) * spatial(Point{p.x - mach_ * (t - tau), p.y}) *
                      source_.time_profile(tau);
             },
             lo, hi, panels)
      .first;
  }

  SourceSpec source_;
  double mach_;
};

}  // namespace galbrun

#endif  // GALBRUN_VORTICITY_HPP
