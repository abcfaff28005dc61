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


#include "support.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace rbo_test {

using namespace recipebo;

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

long long uniform_int(Rng& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

double normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument away from zero.
  const double u = 1.0 - uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

SearchSpace random_space(Rng& rng) {
  const long long n = uniform_int(rng, 1, 5);
  std::vector<VariableSpec> vars;
  for (long long i = 0; i < n; ++i) {
    const std::string name = "v" + std::to_string(i);
    switch (uniform_int(rng, 0, 2)) {
      case 0: {
        const double lo = uniform(rng, -100.0, 100.0);
        vars.push_back(real_var(name, lo, lo + uniform(rng, 0.01, 300.0)));
        break;
      }
      case 1: {
        const long long lo = uniform_int(rng, -20, 20);
        vars.push_back(integer_var(name, lo, lo + uniform_int(rng, 1, 15)));
        break;
      }
      default: {
        std::vector<std::string> labels;
        const long long k = uniform_int(rng, 2, 5);
        for (long long j = 0; j < k; ++j) labels.push_back("L" + std::to_string(j));
        vars.push_back(categorical_var(name, labels));
      }
    }
  }
  return SearchSpace(std::move(vars));
}

Point random_point(const SearchSpace& space, Rng& rng) {
  Point p;
  for (const auto& v : space.variables()) {
    if (const auto* r = std::get_if<RealDomain>(&v.domain)) {
      p.emplace_back(uniform(rng, r->lower, r->upper));
    } else if (const auto* z = std::get_if<IntegerDomain>(&v.domain)) {
      p.emplace_back(uniform_int(rng, z->lower, z->upper));
    } else {
      const auto& labels = std::get<CategoricalDomain>(v.domain).labels;
      p.emplace_back(labels[uniform_index(rng, labels.size())]);
    }
  }
  return p;
}

LatentVector random_latent(const SearchSpace& space, Rng& rng) {
  LatentVector v(space.latent_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(rng, -0.2, 1.2);
  return v;
}

KernelHyperparams random_hyperparams(std::size_t dim, Rng& rng) {
  KernelHyperparams hp;
  hp.amplitude2 = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  hp.lengthscales.resize(static_cast<Eigen::Index>(dim));
  for (auto& l : hp.lengthscales) l = std::exp(uniform(rng, std::log(0.05), std::log(2.0)));
  hp.noise_variance = std::exp(uniform(rng, std::log(1e-4), std::log(0.5)));
  return hp;
}

Eigen::MatrixXd random_unit_rows(std::size_t n, std::size_t dim, Rng& rng) {
  Eigen::MatrixXd X(n, dim);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = uniform01(rng);
  return X;
}

long double matern52_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelHyperparams& hp) {
  long double r2 = 0.0L;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const long double d = (static_cast<long double>(a[i]) - b[i]) / hp.lengthscales[i];
    r2 += d * d;
  }
  const long double r = std::sqrt(r2);
  const long double s5 = std::sqrt(5.0L);
  return hp.amplitude2 * (1.0L + s5 * r + 5.0L * r2 / 3.0L) * std::exp(-s5 * r);
}

DensePrediction gp_dense_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KernelHyperparams& hp,
                                double noise_total, double prior_mean, const Eigen::VectorXd& x) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      K(i, j) = static_cast<double>(matern52_oracle(X.row(i).transpose(), X.row(j).transpose(), hp));
    K(i, i) += noise_total;
    k[i] = static_cast<double>(matern52_oracle(X.row(i).transpose(), x, hp));
  }
  const Eigen::MatrixXd Kinv = K.fullPivLu().inverse();
  const Eigen::VectorXd centered = (y.array() - prior_mean).matrix();
  DensePrediction out;
  out.mean = prior_mean + k.dot(Kinv * centered);
  out.variance = hp.amplitude2 - k.dot(Kinv * k);
  return out;
}

MonteCarlo ei_monte_carlo(double mean, double sd, double incumbent, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  // Welford accumulation keeps the variance estimate stable over 1e7 draws.
  double m = 0.0, s = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = std::max(mean + sd * normal(rng) - incumbent, 0.0);
    const double d = v - m;
    m += d / static_cast<double>(i + 1);
    s += d * (v - m);
  }
  return {m, std::sqrt(s / static_cast<double>(draws - 1) / static_cast<double>(draws))};
}

namespace {

struct DualProblem {
  Eigen::MatrixXd Q;
  Eigen::VectorXd p;
  Eigen::VectorXd s;
};

DualProblem doubled_dual(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double eps) {
  const Eigen::Index n = K.rows();
  DualProblem d;
  d.Q.resize(2 * n, 2 * n);
  d.Q << K, -K, -K, K;
  d.p.resize(2 * n);
  d.p << (eps - y.array()).matrix(), (eps + y.array()).matrix();
  d.s.resize(2 * n);
  d.s << Eigen::VectorXd::Ones(n), -Eigen::VectorXd::Ones(n);
  return d;
}

}  // namespace

QpSolution svr_dual_barrier_oracle(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double eps) {
  const DualProblem d = doubled_dual(K, y, eps);
  const Eigen::Index m = d.p.size();
  Eigen::VectorXd b = Eigen::VectorXd::Constant(m, C / 2.0);  // strictly interior, s'b = 0

  auto barrier = [&](const Eigen::VectorXd& v, double t) {
    double phi = t * (0.5 * v.dot(d.Q * v) + d.p.dot(v));
    for (Eigen::Index i = 0; i < m; ++i) phi -= std::log(v[i]) + std::log(C - v[i]);
    return phi;
  };

  QpSolution out;
  double t = 1.0;
  while (static_cast<double>(2 * m) / t > 1e-10 * std::max(1.0, C)) {
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd g = t * (d.Q * b + d.p);
      Eigen::MatrixXd H = t * d.Q;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double lo = b[i], hi = C - b[i];
        g[i] += -1.0 / lo + 1.0 / hi;
        H(i, i) += 1.0 / (lo * lo) + 1.0 / (hi * hi);
      }
      // Equality-constrained Newton step through the Schur complement of the
      // constraint; the step also removes any drift in s'b.
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      const Eigen::VectorXd Hg = ldlt.solve(g);
      const Eigen::VectorXd Hs = ldlt.solve(d.s);
      const double nu = -(-d.s.dot(b) + d.s.dot(Hg)) / d.s.dot(Hs);
      const Eigen::VectorXd step = -(Hg + nu * Hs);
      const double decrement = -g.dot(step);
      if (decrement / 2.0 < 1e-14) break;
      double alpha = 1.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (step[i] < 0) alpha = std::min(alpha, -0.99 * b[i] / step[i]);
        if (step[i] > 0) alpha = std::min(alpha, 0.99 * (C - b[i]) / step[i]);
      }
      const double phi0 = barrier(b, t);
      while (alpha > 1e-16 && barrier(b + alpha * step, t) > phi0 - 0.25 * alpha * decrement) alpha *= 0.5;
      b += alpha * step;
      ++out.newton_steps;
    }
    t *= 10.0;
  }
  out.beta = b;
  out.objective = 0.5 * b.dot(d.Q * b) + d.p.dot(b);
  return out;
}

double svr_dual_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double eps,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star) {
  const Eigen::VectorXd coef = alpha - alpha_star;
  return 0.5 * coef.dot(K * coef) + eps * (alpha + alpha_star).sum() - y.dot(coef);
}

double neg_branin01(double u, double v) {
  const double x1 = 15.0 * u - 5.0, x2 = 15.0 * v;
  const double pi = std::numbers::pi;
  const double b = 5.1 / (4.0 * pi * pi), c = 5.0 / pi, t = 1.0 / (8.0 * pi);
  const double q = x2 - b * x1 * x1 + c * x1 - 6.0;
  return -(q * q + 10.0 * (1.0 - t) * std::cos(x1) + 10.0);
}

}  // namespace rbo_test
