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


#ifndef RECIPEBO_TESTS_SUPPORT_HPP
#define RECIPEBO_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "recipebo/gp.hpp"
#include "recipebo/rng.hpp"
#include "recipebo/search_space.hpp"
#include "recipebo/svr.hpp"

namespace rbo_test {

using recipebo::Rng;

// ---- generators -------------------------------------------------------------

double uniform(Rng& rng, double lo, double hi);
long long uniform_int(Rng& rng, long long lo, long long hi);  // inclusive
double normal(Rng& rng);

// 1 to 5 variables of mixed kinds with random bounds and labels.
recipebo::SearchSpace random_space(Rng& rng);
recipebo::Point random_point(const recipebo::SearchSpace& space, Rng& rng);
// Coordinates in [-0.2, 1.2] so clamping is exercised too.
recipebo::LatentVector random_latent(const recipebo::SearchSpace& space, Rng& rng);
recipebo::KernelHyperparams random_hyperparams(std::size_t dim, Rng& rng);
Eigen::MatrixXd random_unit_rows(std::size_t n, std::size_t dim, Rng& rng);

// ---- oracles ----------------------------------------------------------------

// Closed form in long double, written from the textbook formula.
long double matern52_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const recipebo::KernelHyperparams& hp);

struct DensePrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Posterior by explicit inversion of the noisy Gram matrix (full-pivot LU),
// for inputs that are already snapped.
DensePrediction gp_dense_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const recipebo::KernelHyperparams& hp, double noise_total, double prior_mean,
                                const Eigen::VectorXd& x);

// Plain sample mean of max(N(mean, sd) - incumbent, 0) with its standard error.
struct MonteCarlo {
  double mean = 0.0;
  double standard_error = 0.0;
};
MonteCarlo ei_monte_carlo(double mean, double sd, double incumbent, std::size_t draws, std::uint64_t seed);

// Log-barrier interior-point solve of the doubled epsilon-SVR dual
//   min 1/2 b'Qb + p'b  s.t.  s'b = 0, 0 <= b <= C
// with Q = [K -K; -K K], p = [eps - y; eps + y], s = [1; -1].
struct QpSolution {
  Eigen::VectorXd beta;
  double objective = 0.0;
  int newton_steps = 0;
};
QpSolution svr_dual_barrier_oracle(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double eps);
double svr_dual_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double eps,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star);

// Negated Branin on the unit square (maximum about -0.397887).
double neg_branin01(double u, double v);

// ---- property suites ----------------------------------------------------------

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

}  // namespace rbo_test

#endif  // RECIPEBO_TESTS_SUPPORT_HPP
