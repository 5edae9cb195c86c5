// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_SOURCES_HPP
#define GALBRUN_SOURCES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "galbrun/mesh.hpp"

namespace galbrun
{

enum class SourceKind : std::uint8_t
{
  None,
  Rotational,    // f = curl G, divergence-free
  Irrotational,  // f = grad G, curl-free
};

enum class TimeProfileKind : std::uint8_t
{
  GaussianPulse,
  Ricker,
  Continuous,
};

struct TimeProfile
{
  TimeProfileKind kind = TimeProfileKind::Ricker;
  double t0 = 0.6;
  double sigma = 0.1;

  double operator()(double t) const
  {
    const double u = (t - t0) / sigma;
    switch (kind)
    {
      case TimeProfileKind::GaussianPulse:
        return std::exp(-0.5 * u * u);
      case TimeProfileKind::Ricker:
        return (1.0 - u * u) * std::exp(-0.5 * u * u);
      case TimeProfileKind::Continuous:
        return 1.0;
    }
    return 0.0;
  }

  // Interval outside of which the profile is below ~1e-14 of its peak.
  std::pair<double, double> Support() const
  {
    if (kind == TimeProfileKind::Continuous)
    {
      return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    return {t0 - 8.5 * sigma, t0 + 8.5 * sigma};
  }

  // Shortest time scale on which the profile varies.
  double Scale() const
  {
    return kind == TimeProfileKind::Continuous ? std::numeric_limits<double>::infinity() : sigma;
  }
};

//
// Spatial Gaussian potential G(x) = amplitude * exp(-|x - c|^2 / (2 w^2)) turned into a
// force density by a curl (rotational) or a gradient (irrotational), times a time profile.
//
struct SourceSpec
{
  SourceKind kind = SourceKind::None;
  Point center;
  double width = 0.1;
  double amplitude = 1.0;
  TimeProfile time_profile;

  // Radius beyond which the potential is below ~1e-16 of its peak.
  double CutoffRadius() const { return 8.5 * width; }

  double Potential(const Point &p) const
  {
    const double dx = p.x - center.x, dy = p.y - center.y;
    return amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
  }

  // Force density without the time factor.
  Eigen::Vector2d SpatialForce(const Point &p) const
  {
    const double w2 = width * width;
    const double dx = p.x - center.x, dy = p.y - center.y;
    const double G = Potential(p);
    const double Gx = -dx / w2 * G, Gy = -dy / w2 * G;
    switch (kind)
    {
      case SourceKind::Rotational:
        return {Gy, -Gx};
      case SourceKind::Irrotational:
        return {Gx, Gy};
      case SourceKind::None:
        break;
    }
    return Eigen::Vector2d::Zero();
  }

  // Scalar curl of the spatial force: -Laplacian(G) for the rotational kind, 0 otherwise.
  double SpatialCurl(const Point &p) const
  {
    if (kind != SourceKind::Rotational)
    {
      return 0.0;
    }
    const double w2 = width * width;
    const double dx = p.x - center.x, dy = p.y - center.y, r2 = dx * dx + dy * dy;
    return Potential(p) * (2.0 / w2 - r2 / (w2 * w2));
  }

  Eigen::Vector2d SpatialCurlGradient(const Point &p) const
  {
    if (kind != SourceKind::Rotational)
    {
      return Eigen::Vector2d::Zero();
    }
    const double w2 = width * width;
    const double dx = p.x - center.x, dy = p.y - center.y, r2 = dx * dx + dy * dy;
    const double c = -Potential(p) * (4.0 / (w2 * w2) - r2 / (w2 * w2 * w2));
    return {c * dx, c * dy};
  }
};

inline Eigen::Vector2d EvalSource(const SourceSpec &spec, const Point &p, double t)
{
  if (spec.kind == SourceKind::None || spec.amplitude == 0.0)
  {
    return Eigen::Vector2d::Zero();
  }
  return spec.SpatialForce(p) * spec.time_profile(t);
}

inline double EvalSourceCurl(const SourceSpec &spec, const Point &p, double t)
{
  return spec.SpatialCurl(p) * spec.time_profile(t);
}

inline const char *ToString(SourceKind kind)
{
  switch (kind)
  {
    case SourceKind::None:
      return "none";
    case SourceKind::Rotational:
      return "rotational";
    case SourceKind::Irrotational:
      return "irrotational";
  }
  return "?";
}

inline const char *ToString(TimeProfileKind kind)
{
  switch (kind)
  {
    case TimeProfileKind::GaussianPulse:
      return "gaussian";
    case TimeProfileKind::Ricker:
      return "ricker";
    case TimeProfileKind::Continuous:
      return "continuous";
  }
  return "?";
}

}  // namespace galbrun

#endif  // GALBRUN_SOURCES_HPP
