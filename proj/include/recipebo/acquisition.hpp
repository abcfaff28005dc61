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

#ifndef RECIPEBO_ACQUISITION_HPP
#define RECIPEBO_ACQUISITION_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "recipebo/gp.hpp"
#include "recipebo/rng.hpp"
#include "recipebo/search_space.hpp"

namespace recipebo {

struct AcquisitionConfig {
  std::size_t grid_size = 1000;
  std::size_t local_steps = 50;
  std::size_t n_gp_samples = 10;
};

// Expected improvement for maximization. Zero variance degenerates to
// max(mean - incumbent, 0).
double expected_improvement(double mean, double variance, double incumbent);

// Mean expected improvement across a set of posteriors sharing one incumbent.
double averaged_acquisition(const std::vector<GPPosterior>& posteriors, double incumbent, const LatentVector& x);

// Fits one posterior per hyperparameter sample on the same data and averages
// expected improvement across them. The incumbent is the best observed target.
class AveragedAcquisition {
 public:
  AveragedAcquisition(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<KernelHyperparams>& hp_samples, double prior_mean);

  double operator()(const LatentVector& x) const;
  double incumbent() const { return incumbent_; }
  const std::vector<GPPosterior>& posteriors() const { return posteriors_; }

 private:
  std::vector<GPPosterior> posteriors_;
  double incumbent_ = 0.0;
};

using AcquisitionFn = std::function<double(const LatentVector&)>;

struct AcquisitionMaximum {
  LatentVector x;
  double value = 0.0;
  double grid_value = 0.0;  // best value among the random candidates
  bool refined = false;     // local search improved on the grid seed
};

// Best of `grid_size` uniform (snapped) candidates, then quasi-Newton ascent
// over the real-valued coordinates with finite-difference gradients while the
// discrete blocks stay fixed. Never errors: a failed refinement keeps the seed.
AcquisitionMaximum maximize_acquisition(const SearchSpace& space, const AcquisitionFn& acquisition,
                                        const AcquisitionConfig& cfg, Rng& rng);

}  // namespace recipebo

#endif  // RECIPEBO_ACQUISITION_HPP
