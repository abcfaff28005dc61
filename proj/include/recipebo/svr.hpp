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

#ifndef RECIPEBO_SVR_HPP
#define RECIPEBO_SVR_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "recipebo/rng.hpp"

namespace recipebo {

struct SVRHyperparams {
  double C = 1.0;
  double gamma = 0.01;
  double epsilon_tube = 0.5;

  bool valid() const;
};

struct SmoOptions {
  double tolerance = 1e-3;          // maximal-violating-pair gap at convergence
  std::size_t max_iterations = 0;   // 0 -> max(1e7, 100 * 2n)
  bool record_objective = false;    // keep the dual objective after every update
};

// Solution of the epsilon-insensitive dual in the doubled-variable form
// min 1/2 b^T Q b + p^T b, s^T b = 0, 0 <= b <= C, with b = [alpha; alpha*].
struct SvrDualSolution {
  Eigen::VectorXd alpha;
  Eigen::VectorXd alpha_star;
  double bias = 0.0;
  double objective = 0.0;
  double kkt_gap = 0.0;  // m(b) - M(b) at exit
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;
};

// SMO with maximal-violating-pair working set selection on a precomputed
// Gram matrix.
SvrDualSolution solve_svr_dual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                               const SmoOptions& options = {});

struct SVRModel {
  SVRHyperparams hp;
  Eigen::MatrixXd support_vectors;  // rows
  Eigen::VectorXd coefficients;     // alpha - alpha*, each in [-C, C]
  double bias = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  double dual_objective = 0.0;

  std::size_t dim() const { return static_cast<std::size_t>(support_vectors.cols()); }
};

double rbf_kernel(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                  double gamma);
Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, double gamma);

// Rows of X are (snapped) latent vectors. Reaching the iteration cap returns
// the best-so-far model with `converged == false`.
SVRModel svr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SVRHyperparams& hp,
                 const SmoOptions& options = {});

double svr_predict(const SVRModel& model, const Eigen::VectorXd& x);

// Shuffled partition of 0..n-1 into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng& rng);

struct GridCell {
  double C = 0.0;
  double gamma = 0.0;
  double rmse = 0.0;  // mean over folds of held-out RMSE
  double mse = 0.0;   // mean over folds of held-out MSE
};

struct GridSearchResult {
  SVRHyperparams best;
  double cv_rmse = 0.0;
  double cv_mse = 0.0;
  std::vector<GridCell> table;  // C-major, grids sorted ascending
};

// Same folds for every (C, gamma) cell; ties prefer smaller C, then smaller
// gamma. A cell whose fit fails scores +inf.
GridSearchResult grid_search_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<double> C_grid,
                                std::vector<double> gamma_grid, std::size_t folds, Rng& rng,
                                double epsilon_tube = 0.5);

std::string svr_to_json(const SVRModel& model);
SVRModel svr_from_json(const std::string& text);
void save_svr(const SVRModel& model, const std::string& path);
SVRModel load_svr(const std::string& path);

}  // namespace recipebo

#endif  // RECIPEBO_SVR_HPP
