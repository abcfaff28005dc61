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

#include "recipebo/acquisition.hpp"

#include <cmath>
#include <numbers>

#include "recipebo/error.hpp"
#include "recipebo/lbfgs.hpp"

namespace recipebo {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

constexpr double kFdStep = 1e-6;

}  // namespace

double expected_improvement(double mean, double variance, double incumbent) {
  const double diff = mean - incumbent;
  if (!(variance > 0.0)) return std::max(diff, 0.0);
  const double sigma = std::sqrt(variance);
  const double z = diff / sigma;
  return std::max(diff * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

double averaged_acquisition(const std::vector<GPPosterior>& posteriors, double incumbent, const LatentVector& x) {
  if (posteriors.empty()) throw ValidationError("averaged_acquisition: no posteriors");
  double sum = 0.0;
  for (const auto& post : posteriors) {
    const Prediction p = post.predict(x);
    sum += expected_improvement(p.mean, p.variance, incumbent);
  }
  return sum / static_cast<double>(posteriors.size());
}

AveragedAcquisition::AveragedAcquisition(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         const std::vector<KernelHyperparams>& hp_samples, double prior_mean) {
  if (hp_samples.empty()) throw ValidationError("averaged acquisition needs at least one hyperparameter sample");
  if (y.size() == 0) throw ValidationError("averaged acquisition needs at least one observation");
  incumbent_ = y.maxCoeff();
  posteriors_.reserve(hp_samples.size());
  for (const auto& hp : hp_samples) posteriors_.push_back(gp_fit(space, X, y, hp, prior_mean));
}

double AveragedAcquisition::operator()(const LatentVector& x) const {
  return averaged_acquisition(posteriors_, incumbent_, x);
}

AcquisitionMaximum maximize_acquisition(const SearchSpace& space, const AcquisitionFn& acquisition,
                                        const AcquisitionConfig& cfg, Rng& rng) {
  if (cfg.grid_size == 0) throw ValidationError("acquisition grid_size must be at least 1");
  AcquisitionMaximum best;
  bool have = false;
  for (const Point& p : sample_uniform(space, rng, cfg.grid_size)) {
    LatentVector x = to_latent(space, p);
    const double v = acquisition(x);
    if (!have || v > best.value) {
      best.x = std::move(x);
      best.value = v;
      have = true;
    }
  }
  best.grid_value = best.value;

  std::vector<Eigen::Index> free_dims;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space.variables()[i].is_real()) free_dims.push_back(static_cast<Eigen::Index>(space.offset(i)));
  if (free_dims.empty() || cfg.local_steps == 0) return best;

  const auto nf = static_cast<Eigen::Index>(free_dims.size());
  const LatentVector seed = best.x;
  const auto embed = [&](const Eigen::VectorXd& u) {
    LatentVector x = seed;
    for (Eigen::Index k = 0; k < nf; ++k) x[free_dims[static_cast<std::size_t>(k)]] = u[k];
    return x;
  };
  // Minimize the negated acquisition, normalized by the seed value so the
  // line search works at unit scale; one-sided differences at the box faces.
  const double scale = best.value > 0.0 ? best.value : 1.0;
  const auto neg = [&](const Eigen::VectorXd& u) { return -acquisition(embed(u)) / scale; };
  const GradientObjective objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
    const double f0 = neg(u);
    grad.resize(nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
      Eigen::VectorXd up = u, dn = u;
      up[k] = std::min(u[k] + kFdStep, 1.0);
      dn[k] = std::max(u[k] - kFdStep, 0.0);
      const double fu = up[k] == u[k] ? f0 : neg(up);
      const double fd = dn[k] == u[k] ? f0 : neg(dn);
      grad[k] = (fu - fd) / (up[k] - dn[k]);
    }
    return f0;
  };
  Eigen::VectorXd u0(nf);
  for (Eigen::Index k = 0; k < nf; ++k) u0[k] = seed[free_dims[static_cast<std::size_t>(k)]];

  LbfgsOptions opts;
  opts.max_iterations = static_cast<int>(cfg.local_steps);
  opts.gradient_tolerance = 1e-10;
  opts.relative_tolerance = 1e-12;
  const LbfgsResult res = minimize_box(objective, u0, Eigen::VectorXd::Zero(nf), Eigen::VectorXd::Ones(nf), opts);
  if (res.x.size() != nf || !res.x.allFinite()) return best;
  const LatentVector refined = snap_latent(space, embed(res.x));
  const double refined_value = acquisition(refined);
  if (std::isfinite(refined_value) && refined_value > best.value) {
    best.x = refined;
    best.value = refined_value;
    best.refined = true;
  }
  return best;
}

}  // namespace recipebo
