// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef GALBRUN_STATE_HPP
#define GALBRUN_STATE_HPP

#include <cstdint>

#include <Eigen/Core>

namespace galbrun
{

// Two consecutive time levels of the displacement unknowns.
struct SimState
{
  Eigen::VectorXd xi_prev;  // level n-1
  Eigen::VectorXd xi_curr;  // level n
  std::int64_t step = 1;    // n
  double dt = 0.0;

  double Time() const { return static_cast<double>(step) * dt; }

  // Backward difference (xi^n - xi^{n-1}) / dt.
  Eigen::VectorXd Velocity() const { return (xi_curr - xi_prev) / dt; }
};

}  // namespace galbrun

#endif  // GALBRUN_STATE_HPP
