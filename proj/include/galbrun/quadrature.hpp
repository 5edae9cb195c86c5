// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_QUADRATURE_HPP
#define GALBRUN_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

namespace galbrun::quadrature
{

// Point in barycentric coordinates (l0, l1, l2) with weight relative to the triangle area.
struct TrianglePoint
{
  std::array<double, 3> bary;
  double weight;
};

// Interior 3-point rule, exact for polynomials of degree 2.
inline constexpr std::array<TrianglePoint, 3> kTriangleDegree2 = {{
  {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
  {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
  {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
}};

namespace detail
{
inline constexpr double a1 = 0.059715871789769820, b1 = 0.470142064105115090;
inline constexpr double a2 = 0.797426985353087322, b2 = 0.101286507323456339;
inline constexpr double w0 = 0.225, w1 = 0.132394152788506181, w2 = 0.125939180544827153;
}  // namespace detail

// 7-point Radon rule, exact for degree 5. Used for error norms.
inline constexpr std::array<TrianglePoint, 7> kTriangleDegree5 = {{
  {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, detail::w0},
  {{detail::a1, detail::b1, detail::b1}, detail::w1},
  {{detail::b1, detail::a1, detail::b1}, detail::w1},
  {{detail::b1, detail::b1, detail::a1}, detail::w1},
  {{detail::a2, detail::b2, detail::b2}, detail::w2},
  {{detail::b2, detail::a2, detail::b2}, detail::w2},
  {{detail::b2, detail::b2, detail::a2}, detail::w2},
}};

// 2-point Gauss rule on [0, 1]: (parameter, weight relative to edge length).
struct EdgePoint
{
  double t;
  double weight;
};

inline const std::array<EdgePoint, 2> &EdgeGauss2()
{
  static const std::array<EdgePoint, 2> rule = {{
    {0.5 - 0.5 / std::sqrt(3.0), 0.5},
    {0.5 + 0.5 / std::sqrt(3.0), 0.5},
  }};
  return rule;
}

// Composite 10-point Gauss-Legendre on [a, b] with `panels` equal panels. Returns the
// integral of f and of |f|.
template <typename F>
std::pair<double, double> CompositeGauss(const F &f, double a, double b, int panels)
{
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto &x = Rule::abscissa();
  const auto &w = Rule::weights();
  const double len = (b - a) / panels;
  double sum = 0.0, abs_sum = 0.0;
  for (int p = 0; p < panels; p++)
  {
    const double mid = a + (p + 0.5) * len, half = 0.5 * len;
    double panel = 0.0, abs_panel = 0.0;
    // Boost stores the non-negative abscissae only; a zero node appears once.
    for (std::size_t k = 0; k < x.size(); k++)
    {
      if (x[k] == 0.0)
      {
        const double f0 = f(mid);
        panel += w[k] * f0;
        abs_panel += w[k] * std::abs(f0);
        continue;
      }
      const double fl = f(mid - half * x[k]), fr = f(mid + half * x[k]);
      panel += w[k] * (fl + fr);
      abs_panel += w[k] * (std::abs(fl) + std::abs(fr));
    }
    sum += half * panel;
    abs_sum += std::abs(half) * abs_panel;
  }
  return {sum, abs_sum};
}

// Composite Gauss with panel doubling until two successive estimates agree to `rel_tol`
// relative to the integral, or to 1e-14 of the integral of |f| when the integral itself
// cancels to nearly zero.
template <typename F>
double AdaptiveGauss(const F &f, double a, double b, double rel_tol = 1e-8,
                     int initial_panels = 4, int max_panels = 1 << 16)
{
  if (a == b)
  {
    return 0.0;
  }
  int panels = std::max(1, initial_panels);
  double coarse = CompositeGauss(f, a, b, panels).first;
  while (true)
  {
    panels *= 2;
    const auto [fine, abs_fine] = CompositeGauss(f, a, b, panels);
    const double scale = std::max(std::abs(fine), 1e-14 * abs_fine / std::max(rel_tol, 1e-300));
    if (std::abs(fine - coarse) <= rel_tol * scale || abs_fine == 0.0)
    {
      return fine;
    }
    if (panels >= max_panels)
    {
      throw std::runtime_error("AdaptiveGauss: no convergence");
    }
    coarse = fine;
  }
}

}  // namespace galbrun::quadrature

#endif  // GALBRUN_QUADRATURE_HPP
