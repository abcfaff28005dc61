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

#ifndef RECIPEBO_GP_HPP
#define RECIPEBO_GP_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "recipebo/rng.hpp"
#include "recipebo/search_space.hpp"

namespace recipebo {

// Matérn 5/2 kernel with one lengthscale per latent coordinate.
struct KernelHyperparams {
  double amplitude2 = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = 1e-6;

  bool valid() const;
};

// Bound box for hyperparameter search and sampling. Amplitude and noise
// bounds scale with the target variance.
struct HyperBounds {
  double amplitude_min_factor = 1e-3;
  double amplitude_max_factor = 1e3;
  double lengthscale_min = 1e-3;
  double lengthscale_max = 10.0;
  double noise_min = 1e-8;
  double noise_max_factor = 1.0;
};

// Concrete box in log-hyperparameter coordinates
// [log amplitude2, log lengthscale_1..d, log noise_variance].
struct LogHyperBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  bool contains(const KernelHyperparams& hp, double slack = 1e-9) const;
};

// Target variance used to scale the box; floored so constant targets still
// give a non-empty box.
double target_variance(const Eigen::VectorXd& y);
LogHyperBox make_log_box(const HyperBounds& bounds, double y_variance, std::size_t latent_dim);

Eigen::VectorXd pack_log(const KernelHyperparams& hp);
KernelHyperparams unpack_log(const Eigen::VectorXd& theta);

double matern52(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                const KernelHyperparams& hp);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact GP posterior. Inputs are snapped to the space's discrete cells before
// any kernel evaluation. The prior mean is a constant (callers typically pass
// the mean of the targets).
class GPPosterior {
 public:
  const SearchSpace& space() const { return space_; }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  const KernelHyperparams& hyperparams() const { return hp_; }
  double prior_mean() const { return prior_mean_; }
  double jitter() const { return jitter_; }
  // Lower-triangular factor of K + (noise + jitter) I.
  Eigen::MatrixXd cholesky_factor() const;
  const Eigen::VectorXd& alpha() const { return alpha_; }
  std::size_t size() const { return static_cast<std::size_t>(targets_.size()); }

  // Predictive distribution of the latent function; x is snapped internally.
  Prediction predict(const LatentVector& x) const;
  // Same, for an input already snapped by the caller.
  Prediction predict_snapped(const LatentVector& x) const;

  double log_marginal_likelihood() const;

 private:
  friend GPPosterior gp_fit(const SearchSpace&, const Eigen::MatrixXd&, const Eigen::VectorXd&,
                            const KernelHyperparams&, double);

  explicit GPPosterior(SearchSpace space) : space_(std::move(space)) {}

  SearchSpace space_;
  Eigen::MatrixXd inputs_;  // n x latent_dim, snapped
  Eigen::VectorXd targets_;
  KernelHyperparams hp_;
  double prior_mean_ = 0.0;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

// Rows of X are latent vectors. Throws NumericalError if the Gram matrix stays
// indefinite after jitter escalation; ValidationError on shape mismatch.
GPPosterior gp_fit(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const KernelHyperparams& hp, double prior_mean = 0.0);

Prediction gp_predict(const GPPosterior& post, const LatentVector& x);

double log_marginal_likelihood(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelHyperparams& hp, double prior_mean = 0.0);

// Analytic gradient with respect to the packed log hyperparameters, at the
// jitter level the factorization settled on (jitter scales with amp2).
double log_marginal_likelihood(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelHyperparams& hp, double prior_mean, Eigen::VectorXd& grad_log);

// Type-II maximum likelihood: quasi-Newton ascent in log space from `restarts`
// uniform draws inside the box. The prior mean is fixed at mean(y).
KernelHyperparams optimize_hyperparams(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       std::size_t restarts, Rng& rng, const HyperBounds& bounds = {});

struct SliceSamplerOptions {
  std::size_t burn_in = 20;  // full sweeps discarded before the first draw
  std::size_t thin = 1;      // sweeps between kept draws
  double step_width = 1.0;   // initial bracket width in log units
  std::size_t max_step_out = 8;
};

// Coordinate-wise slice sampler over the log-hyperparameter posterior
// (marginal likelihood times a log-uniform prior on the box). Keeps its chain
// state between calls so successive fits on growing data can warm-start.
class HyperparamSampler {
 public:
  explicit HyperparamSampler(HyperBounds bounds = {}, SliceSamplerOptions options = {})
      : bounds_(bounds), options_(options) {}

  // Burn-in applies on the first call only; later calls continue the chain
  // from its last state (clamped into the new box) using `warm_burn_in` sweeps.
  std::vector<KernelHyperparams> sample(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        std::size_t n_samples, Rng& rng, std::size_t warm_burn_in = 2);

  bool has_state() const { return state_.size() > 0; }
  const Eigen::VectorXd& state() const { return state_; }

 private:
  HyperBounds bounds_;
  SliceSamplerOptions options_;
  Eigen::VectorXd state_;
};

std::vector<KernelHyperparams> sample_hyperparams(const SearchSpace& space, const Eigen::MatrixXd& X,
                                                  const Eigen::VectorXd& y, std::size_t n_samples, Rng& rng,
                                                  const HyperBounds& bounds = {},
                                                  const SliceSamplerOptions& options = {});

}  // namespace recipebo

#endif  // RECIPEBO_GP_HPP
