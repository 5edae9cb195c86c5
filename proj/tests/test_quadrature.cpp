// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "galbrun/quadrature.hpp"

using namespace galbrun;

namespace
{

// Exact integral of l1^a l2^b l3^c over the reference triangle of area 1/2:
// a! b! c! / (a + b + c + 2)!.
double Monomial(int a, int b, int c)
{
  return std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1) / std::tgamma(a + b + c + 3);
}

template <typename Rule>
double Apply(const Rule &rule, int a, int b, int c)
{
  double s = 0.0;
  for (const auto &qp : rule)
  {
    s += qp.weight * 0.5 * std::pow(qp.bary[0], a) * std::pow(qp.bary[1], b) *
         std::pow(qp.bary[2], c);
  }
  return s;
}

}  // namespace

TEST(Quadrature, TriangleRulesIntegrateTheirDegree)
{
  for (int a = 0; a <= 5; a++)
  {
    for (int b = 0; a + b <= 5; b++)
    {
      for (int c = 0; a + b + c <= 5; c++)
      {
        EXPECT_NEAR(Apply(quadrature::kTriangleDegree5, a, b, c), Monomial(a, b, c), 1e-15)
          << a << b << c;
        if (a + b + c <= 2)
        {
          EXPECT_NEAR(Apply(quadrature::kTriangleDegree2, a, b, c), Monomial(a, b, c), 1e-15);
        }
      }
    }
  }
}

TEST(Quadrature, EdgeRuleIsExactForCubics)
{
  for (int p = 0; p <= 3; p++)
  {
    double s = 0.0;
    for (const auto &qp : quadrature::EdgeGauss2())
    {
      s += qp.weight * std::pow(qp.t, p);
    }
    EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15);
  }
}

TEST(Quadrature, AdaptiveGaussMatchesClosedForms)
{
  using std::numbers::pi;
  EXPECT_NEAR(quadrature::AdaptiveGauss([](double x) { return std::sin(x); }, 0.0, pi), 2.0,
              1e-12);
  // Sharp Gaussian: int exp(-x^2 / 2 s^2) = s sqrt(2 pi) on a wide interval.
  const double s = 0.01;
  EXPECT_NEAR(quadrature::AdaptiveGauss([&](double x) { return std::exp(-x * x / (2 * s * s)); },
                                        -1.0, 1.0, 1e-12),
              s * std::sqrt(2 * pi), 1e-12);
  // Reversed limits change the sign.
  EXPECT_NEAR(quadrature::AdaptiveGauss([](double x) { return x * x; }, 1.0, 0.0), -1.0 / 3.0,
              1e-14);
  EXPECT_EQ(quadrature::AdaptiveGauss([](double x) { return x; }, 2.0, 2.0), 0.0);
}
