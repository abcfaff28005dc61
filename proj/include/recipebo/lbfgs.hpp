// Copyright 2026 The recipebo Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#ifndef RECIPEBO_LBFGS_HPP
#define RECIPEBO_LBFGS_HPP

#include <functional>

#include <Eigen/Core>

namespace recipebo {

// Objective for minimization: returns f(x) and writes the gradient into `grad`.
// A non-finite return marks an infeasible point; the line search backs off.
using GradientObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int max_iterations = 100;
  int memory = 6;
  double gradient_tolerance = 1e-6;  // on the projected gradient, inf-norm
  double relative_tolerance = 1e-10;  // on successive function values
  int max_line_search = 30;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected L-BFGS over the box [lower, upper]. The starting point is clamped
// into the box first. Never throws on a bad objective; returns the best point
// it reached.
LbfgsResult minimize_box(const GradientObjective& f, Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const LbfgsOptions& options = {});

}  // namespace recipebo

#endif  // RECIPEBO_LBFGS_HPP
