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

#include "recipebo/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "recipebo/error.hpp"
#include "recipebo/lbfgs.hpp"

namespace recipebo {

namespace {

constexpr double kSqrt5 = 2.23606797749978969641;
constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

void check_hyperparams(const KernelHyperparams& hp, std::size_t dim) {
  if (static_cast<std::size_t>(hp.lengthscales.size()) != dim)
    throw ValidationError("kernel has " + std::to_string(hp.lengthscales.size()) + " lengthscales, inputs have " +
                          std::to_string(dim) + " latent dims");
  if (!(hp.amplitude2 > 0.0) || !std::isfinite(hp.amplitude2) || !(hp.noise_variance >= 0.0) ||
      !std::isfinite(hp.noise_variance) || !hp.lengthscales.allFinite() || (hp.lengthscales.array() <= 0.0).any())
    throw ValidationError("kernel hyperparameters must be finite with positive amplitude and lengthscales");
}

Eigen::MatrixXd snap_rows(const SearchSpace& space, const Eigen::MatrixXd& X) {
  if (static_cast<std::size_t>(X.cols()) != space.latent_dim() && X.rows() > 0)
    throw ValidationError("inputs have " + std::to_string(X.cols()) + " columns, space latent_dim is " +
                          std::to_string(space.latent_dim()));
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(space.latent_dim()));
  if (space.all_real()) {
    out = X.cwiseMax(0.0).cwiseMin(1.0);
    return out;
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = snap_latent(space, X.row(i).transpose()).transpose();
  return out;
}

double matern_from_r(double r, double amp2) {
  const double sr = kSqrt5 * r;
  return amp2 * (1.0 + sr + sr * sr / 3.0) * std::exp(-sr);
}

// Noise-free Gram matrix of the scaled inputs Z = X / lengthscale.
Eigen::MatrixXd gram(const Eigen::MatrixXd& Z, double amp2) {
  const Eigen::Index n = Z.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = amp2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = matern_from_r((Z.row(i) - Z.row(j)).norm(), amp2);
      K(i, j) = k;
      K(j, i) = k;
    }
  }
  return K;
}

Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& lengthscales) {
  return X * lengthscales.cwiseInverse().asDiagonal();
}

struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

// Cholesky of K + (noise + jitter) I with jitter escalating x10 from
// 1e-10 * amp2 to 1e-4 * amp2.
Factorization factorize(const Eigen::MatrixXd& K, double amp2, double noise) {
  Factorization f;
  const Eigen::Index n = K.rows();
  if (n == 0) return f;
  for (double rel = kJitterStart; rel <= kJitterMax * 1.0000001; rel *= 10.0) {
    f.jitter = rel * amp2;
    Eigen::MatrixXd A = K;
    A.diagonal().array() += noise + f.jitter;
    f.llt.compute(A);
    if (f.llt.info() == Eigen::Success && (f.llt.matrixLLT().diagonal().array() > 0.0).all()) return f;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff() + noise;
  const double hi = es.eigenvalues().maxCoeff() + noise;
  throw NumericalError("Cholesky factorization failed: Gram matrix (n=" + std::to_string(n) +
                       ") not positive definite after jitter " + std::to_string(kJitterMax * amp2) +
                       "; eigenvalue range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

double lml_from(const Factorization& f, const Eigen::VectorXd& centered, Eigen::VectorXd* alpha_out) {
  const Eigen::Index n = centered.size();
  if (n == 0) return 0.0;
  Eigen::VectorXd alpha = f.llt.solve(centered);
  const double log_det_half = f.llt.matrixLLT().diagonal().array().log().sum();
  const double value = -0.5 * centered.dot(alpha) - log_det_half -
                       0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  if (alpha_out) *alpha_out = std::move(alpha);
  return value;
}

}  // namespace

bool KernelHyperparams::valid() const {
  return std::isfinite(amplitude2) && amplitude2 > 0.0 && std::isfinite(noise_variance) && noise_variance > 0.0 &&
         lengthscales.size() > 0 && lengthscales.allFinite() && (lengthscales.array() > 0.0).all();
}

bool LogHyperBox::contains(const KernelHyperparams& hp, double slack) const {
  const Eigen::VectorXd t = pack_log(hp);
  if (t.size() != lower.size()) return false;
  return ((t.array() >= lower.array() - slack) && (t.array() <= upper.array() + slack)).all();
}

double target_variance(const Eigen::VectorXd& y) {
  constexpr double kFloor = 1e-6;
  if (y.size() < 2) return 1.0;
  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  return std::max(var, kFloor);
}

LogHyperBox make_log_box(const HyperBounds& b, double y_variance, std::size_t latent_dim) {
  const auto d = static_cast<Eigen::Index>(latent_dim);
  LogHyperBox box;
  box.lower.resize(d + 2);
  box.upper.resize(d + 2);
  box.lower[0] = std::log(b.amplitude_min_factor * y_variance);
  box.upper[0] = std::log(b.amplitude_max_factor * y_variance);
  box.lower.segment(1, d).setConstant(std::log(b.lengthscale_min));
  box.upper.segment(1, d).setConstant(std::log(b.lengthscale_max));
  box.lower[d + 1] = std::log(b.noise_min);
  box.upper[d + 1] = std::log(std::max(b.noise_max_factor * y_variance, 10.0 * b.noise_min));
  return box;
}

Eigen::VectorXd pack_log(const KernelHyperparams& hp) {
  const Eigen::Index d = hp.lengthscales.size();
  Eigen::VectorXd t(d + 2);
  t[0] = std::log(hp.amplitude2);
  t.segment(1, d) = hp.lengthscales.array().log().matrix();
  t[d + 1] = std::log(hp.noise_variance);
  return t;
}

KernelHyperparams unpack_log(const Eigen::VectorXd& theta) {
  const Eigen::Index d = theta.size() - 2;
  KernelHyperparams hp;
  hp.amplitude2 = std::exp(theta[0]);
  hp.lengthscales = theta.segment(1, d).array().exp().matrix();
  hp.noise_variance = std::exp(theta[d + 1]);
  return hp;
}

double matern52(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                const KernelHyperparams& hp) {
  if (a.size() != b.size() || a.size() != hp.lengthscales.size())
    throw ValidationError("matern52: dimension mismatch (" + std::to_string(a.size()) + ", " +
                          std::to_string(b.size()) + ", " + std::to_string(hp.lengthscales.size()) + ")");
  const double r = (a - b).cwiseQuotient(hp.lengthscales).norm();
  return matern_from_r(r, hp.amplitude2);
}

Eigen::MatrixXd GPPosterior::cholesky_factor() const {
  return llt_.matrixL();
}

Prediction GPPosterior::predict(const LatentVector& x) const {
  if (static_cast<std::size_t>(x.size()) != space_.latent_dim())
    throw ValidationError("gp_predict: query has length " + std::to_string(x.size()) + ", expected " +
                          std::to_string(space_.latent_dim()));
  return predict_snapped(space_.all_real() ? LatentVector(x.cwiseMax(0.0).cwiseMin(1.0)) : snap_latent(space_, x));
}

Prediction GPPosterior::predict_snapped(const LatentVector& x) const {
  const Eigen::Index n = inputs_.rows();
  if (n == 0) return {prior_mean_, hp_.amplitude2};
  Eigen::VectorXd kstar(n);
  const Eigen::VectorXd inv_ls = hp_.lengthscales.cwiseInverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (inputs_.row(i).transpose() - x).cwiseProduct(inv_ls).norm();
    kstar[i] = matern_from_r(r, hp_.amplitude2);
  }
  Prediction p;
  p.mean = prior_mean_ + kstar.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(kstar);
  p.variance = std::max(0.0, hp_.amplitude2 - v.squaredNorm());
  return p;
}

double GPPosterior::log_marginal_likelihood() const {
  if (targets_.size() == 0) return 0.0;
  const Eigen::VectorXd centered = targets_.array() - prior_mean_;
  const double log_det_half = llt_.matrixLLT().diagonal().array().log().sum();
  return -0.5 * centered.dot(alpha_) - log_det_half -
         0.5 * static_cast<double>(targets_.size()) * std::log(2.0 * std::numbers::pi);
}

GPPosterior gp_fit(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const KernelHyperparams& hp, double prior_mean) {
  if (X.rows() != y.size())
    throw ValidationError("gp_fit: " + std::to_string(X.rows()) + " inputs but " + std::to_string(y.size()) +
                          " targets");
  if (!y.allFinite()) throw ValidationError("gp_fit: non-finite target");
  check_hyperparams(hp, space.latent_dim());
  GPPosterior post(space);
  post.inputs_ = snap_rows(space, X);
  post.targets_ = y;
  post.hp_ = hp;
  post.prior_mean_ = prior_mean;
  if (y.size() == 0) return post;
  const Eigen::MatrixXd K = gram(scale_inputs(post.inputs_, hp.lengthscales), hp.amplitude2);
  Factorization f = factorize(K, hp.amplitude2, hp.noise_variance);
  post.jitter_ = f.jitter;
  post.llt_ = std::move(f.llt);
  post.alpha_ = post.llt_.solve((y.array() - prior_mean).matrix());
  return post;
}

Prediction gp_predict(const GPPosterior& post, const LatentVector& x) { return post.predict(x); }

double log_marginal_likelihood(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelHyperparams& hp, double prior_mean) {
  if (X.rows() != y.size()) throw ValidationError("log_marginal_likelihood: input/target count mismatch");
  check_hyperparams(hp, space.latent_dim());
  const Eigen::MatrixXd Xs = snap_rows(space, X);
  const Eigen::MatrixXd K = gram(scale_inputs(Xs, hp.lengthscales), hp.amplitude2);
  const Factorization f = factorize(K, hp.amplitude2, hp.noise_variance);
  return lml_from(f, (y.array() - prior_mean).matrix(), nullptr);
}

double log_marginal_likelihood(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelHyperparams& hp, double prior_mean, Eigen::VectorXd& grad_log) {
  if (X.rows() != y.size()) throw ValidationError("log_marginal_likelihood: input/target count mismatch");
  check_hyperparams(hp, space.latent_dim());
  const Eigen::Index n = X.rows();
  const auto d = static_cast<Eigen::Index>(space.latent_dim());
  grad_log = Eigen::VectorXd::Zero(d + 2);
  if (n == 0) return 0.0;

  const Eigen::MatrixXd Xs = snap_rows(space, X);
  const Eigen::MatrixXd Z = scale_inputs(Xs, hp.lengthscales);
  const Eigen::MatrixXd K = gram(Z, hp.amplitude2);
  const Factorization f = factorize(K, hp.amplitude2, hp.noise_variance);
  Eigen::VectorXd alpha;
  const double value = lml_from(f, (y.array() - prior_mean).matrix(), &alpha);

  // dL/dtheta = 1/2 tr(W dK/dtheta), W = alpha alpha^T - (K + s I)^-1.
  Eigen::MatrixXd W = -f.llt.solve(Eigen::MatrixXd::Identity(n, n));
  W.noalias() += alpha * alpha.transpose();

  // The jitter is a multiple of amp2, so it moves with log amp2 too.
  grad_log[0] = 0.5 * (W.cwiseProduct(K).sum() + f.jitter * W.trace());
  grad_log[d + 1] = 0.5 * hp.noise_variance * W.trace();
  // dk/dlog(l_k) = amp2 * 5/3 * (1 + sqrt5 r) exp(-sqrt5 r) * (dz_k)^2
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const Eigen::VectorXd dz = (Z.row(i) - Z.row(j)).transpose();
      const double r = dz.norm();
      const double sr = kSqrt5 * r;
      const double c = hp.amplitude2 * (5.0 / 3.0) * (1.0 + sr) * std::exp(-sr);
      // Symmetric pair counted twice, times the 1/2 prefactor.
      grad_log.segment(1, d) += (W(i, j) * c) * dz.cwiseAbs2();
    }
  }
  return value;
}

KernelHyperparams optimize_hyperparams(const SearchSpace& space, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       std::size_t restarts, Rng& rng, const HyperBounds& bounds) {
  if (y.size() < 2) throw ValidationError("optimize_hyperparams: need at least 2 observations");
  if (restarts == 0) throw ValidationError("optimize_hyperparams: restarts must be at least 1");
  const double prior_mean = y.mean();
  const LogHyperBox box = make_log_box(bounds, target_variance(y), space.latent_dim());

  std::string last_failure = "no restart produced a finite likelihood";
  const GradientObjective negative_lml = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    try {
      const double v = log_marginal_likelihood(space, X, y, unpack_log(theta), prior_mean, grad);
      grad = -grad;
      return -v;
    } catch (const Error& e) {
      last_failure = e.what();
      grad = Eigen::VectorXd::Zero(theta.size());
      return std::numeric_limits<double>::infinity();
    }
  };

  LbfgsOptions opts;
  opts.max_iterations = 60;
  opts.gradient_tolerance = 1e-5;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  for (std::size_t r = 0; r < restarts; ++r) {
    Eigen::VectorXd start(box.lower.size());
    for (Eigen::Index i = 0; i < start.size(); ++i)
      start[i] = box.lower[i] + uniform01(rng) * (box.upper[i] - box.lower[i]);
    const LbfgsResult res = minimize_box(negative_lml, start, box.lower, box.upper, opts);
    if (std::isfinite(res.value) && res.value < best_value) {
      best_value = res.value;
      best_theta = res.x;
    }
  }
  if (best_theta.size() == 0) throw NumericalError("optimize_hyperparams: all restarts failed: " + last_failure);
  return unpack_log(best_theta);
}

std::vector<KernelHyperparams> HyperparamSampler::sample(const SearchSpace& space, const Eigen::MatrixXd& X,
                                                         const Eigen::VectorXd& y, std::size_t n_samples, Rng& rng,
                                                         std::size_t warm_burn_in) {
  if (y.size() < 2) throw ValidationError("sample_hyperparams: need at least 2 observations");
  const double prior_mean = y.mean();
  const double y_var = target_variance(y);
  const LogHyperBox box = make_log_box(bounds_, y_var, space.latent_dim());
  const Eigen::Index dim = box.lower.size();

  // Log-uniform prior on the box is flat in these coordinates.
  const auto log_density = [&](const Eigen::VectorXd& theta) {
    if ((theta.array() < box.lower.array()).any() || (theta.array() > box.upper.array()).any())
      return -std::numeric_limits<double>::infinity();
    try {
      return log_marginal_likelihood(space, X, y, unpack_log(theta), prior_mean);
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  std::size_t burn_in = warm_burn_in;
  if (state_.size() != dim) {
    KernelHyperparams init;
    init.amplitude2 = y_var;
    init.lengthscales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(space.latent_dim()), 0.5);
    init.noise_variance = 1e-2 * y_var;
    state_ = pack_log(init);
    burn_in = options_.burn_in;
  }
  state_ = state_.cwiseMax(box.lower).cwiseMin(box.upper);
  double current = log_density(state_);

  const auto sweep = [&]() {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double lo = box.lower[k];
      const double hi = box.upper[k];
      const double x0 = state_[k];
      // Exponential draw keeps the slice height well defined at -inf.
      const double log_height = current + std::log(std::max(uniform01(rng), 1e-300));
      Eigen::VectorXd probe = state_;
      const auto at = [&](double v) {
        probe[k] = v;
        return log_density(probe);
      };
      const double w = options_.step_width;
      double left = x0 - w * uniform01(rng);
      double right = left + w;
      auto j = static_cast<std::size_t>(std::floor(static_cast<double>(options_.max_step_out) * uniform01(rng)));
      std::size_t m = options_.max_step_out - 1 - j;
      left = std::max(left, lo);
      right = std::min(right, hi);
      while (j-- > 0 && left > lo && at(left) > log_height) left = std::max(left - w, lo);
      while (m-- > 0 && right < hi && at(right) > log_height) right = std::min(right + w, hi);

      double accepted = x0;
      double accepted_density = current;
      for (int tries = 0; tries < 100; ++tries) {
        const double cand = left + uniform01(rng) * (right - left);
        const double dens = at(cand);
        if (dens > log_height) {
          accepted = cand;
          accepted_density = dens;
          break;
        }
        if (cand < x0) {
          left = cand;
        } else {
          right = cand;
        }
      }
      state_[k] = accepted;
      current = accepted_density;
    }
  };

  for (std::size_t s = 0; s < burn_in; ++s) sweep();
  std::vector<KernelHyperparams> out;
  out.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t t = 0; t < std::max<std::size_t>(options_.thin, 1); ++t) sweep();
    out.push_back(unpack_log(state_));
  }
  return out;
}

std::vector<KernelHyperparams> sample_hyperparams(const SearchSpace& space, const Eigen::MatrixXd& X,
                                                  const Eigen::VectorXd& y, std::size_t n_samples, Rng& rng,
                                                  const HyperBounds& bounds, const SliceSamplerOptions& options) {
  HyperparamSampler sampler(bounds, options);
  return sampler.sample(space, X, y, n_samples, rng);
}

}  // namespace recipebo
