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


#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "recipebo/acquisition.hpp"
#include "recipebo/config.hpp"
#include "recipebo/expert_sim.hpp"
#include "recipebo/harness.hpp"
#include "recipebo/optimizer.hpp"
#include "support.hpp"

namespace rbo_test {

using namespace recipebo;

namespace {

// Runs `body` for `cases` seeds derived from (seed, suite). The body returns
// an empty string on success or a description of the counterexample.
PropertyResult check(const std::string& name, std::size_t cases, std::uint64_t seed, std::uint64_t suite,
                     const std::function<std::string(Rng&)>& body) {
  PropertyResult r;
  r.name = name;
  r.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    Rng rng(derive_seed(derive_seed(seed, suite), c));
    std::string failure;
    try {
      failure = body(rng);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (!failure.empty()) {
      if (r.failures++ == 0) r.first_failure = "case " + std::to_string(c) + ": " + failure;
    }
  }
  return r;
}

bool same_point(const Point& a, const Point& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index() != b[i].index()) return false;
    if (const auto* x = std::get_if<double>(&a[i])) {
      const double y = std::get<double>(b[i]);
      if (std::abs(*x - y) > tol * std::max(1.0, std::abs(y))) return false;
    } else if (a[i] != b[i]) {
      return false;
    }
  }
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Latent vector inside the same discrete cell as `snapped`: real coordinates
// copied, integer coordinates nudged within the rounding interval, one-hot
// blocks replaced by noisy scores with the same argmax.
LatentVector same_cell(const SearchSpace& space, const LatentVector& snapped, Rng& rng) {
  LatentVector v = snapped;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& var = space.variables()[i];
    const auto off = static_cast<Eigen::Index>(space.offset(i));
    if (const auto* d = std::get_if<IntegerDomain>(&var.domain)) {
      const double half = 0.49 / static_cast<double>(d->upper - d->lower);
      v[off] = std::clamp(snapped[off] + uniform(rng, -half, half), 0.0, 1.0);
    } else if (var.is_categorical()) {
      const auto w = static_cast<Eigen::Index>(var.latent_width());
      for (Eigen::Index j = 0; j < w; ++j)
        v[off + j] = snapped[off + j] > 0.5 ? uniform(rng, 0.6, 1.0) : uniform(rng, 0.0, 0.55);
    }
  }
  return v;
}

Eigen::MatrixXd rows_of(const std::vector<LatentVector>& xs) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()), xs.empty() ? 0 : xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
  return X;
}

}  // namespace

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  const std::size_t kCases = 1000;

  out.push_back(check("latent round trip", kCases, seed, 1, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    const Point p = random_point(space, rng);
    const LatentVector v = to_latent(space, p);
    if ((v.array() < 0.0).any() || (v.array() > 1.0).any()) return "latent outside the unit cube";
    if (!same_point(from_latent(space, v), p, 1e-12)) return "from_latent(to_latent(p)) != p";
    if ((snap_latent(space, v) - v).cwiseAbs().maxCoeff() > 1e-12) return "encoded point not a fixed point of snap";
    return {};
  }));

  out.push_back(check("snap idempotent and decodes to a valid point", kCases, seed, 2, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    const LatentVector v = random_latent(space, rng);
    const LatentVector s = snap_latent(space, v);
    if ((snap_latent(space, s) - s).cwiseAbs().maxCoeff() != 0.0) return "snap not idempotent";
    const Point p = from_latent(space, v);
    if (auto err = validate_point(space, p)) return *err;
    if (!same_point(from_latent(space, s), p, 1e-12)) return "snapping changed the decoded point";
    return {};
  }));

  out.push_back(check("sample_uniform stays in bounds", kCases, seed, 3, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    for (const auto& p : sample_uniform(space, rng, 5))
      if (auto err = validate_point(space, p)) return *err;
    return {};
  }));

  out.push_back(check("gp prediction invariant within a discrete cell", kCases, seed, 4, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 6));
    std::vector<LatentVector> xs;
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(random_latent(space, rng));
      y[static_cast<Eigen::Index>(i)] = uniform(rng, 0.0, 10.0);
    }
    const auto post = gp_fit(space, rows_of(xs), y, random_hyperparams(space.latent_dim(), rng), y.mean());
    const LatentVector s = snap_latent(space, random_latent(space, rng));
    const Prediction a = gp_predict(post, s);
    const Prediction b = gp_predict(post, same_cell(space, s, rng));
    if (a.mean != b.mean || a.variance != b.variance) return "prediction changed inside a cell";
    return {};
  }));

  out.push_back(check("gp variance within [0, amplitude]", kCases, seed, 5, [](Rng& rng) -> std::string {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 4));
    const SearchSpace space = SearchSpace::unit_cube(d);
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 12));
    const Eigen::MatrixXd X = random_unit_rows(n, d, rng);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (auto& v : y) v = normal(rng);
    const KernelHyperparams hp = random_hyperparams(d, rng);
    const auto post = gp_fit(space, X, y, hp);
    for (int q = 0; q < 5; ++q) {
      const Prediction p = gp_predict(post, random_unit_rows(1, d, rng).row(0).transpose());
      if (!(p.variance >= 0.0) || p.variance > hp.amplitude2 * (1 + 1e-12)) return "variance " + fmt(p.variance);
    }
    return {};
  }));

  out.push_back(check("gram matrix symmetric positive semidefinite", kCases, seed, 6, [](Rng& rng) -> std::string {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 4));
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 12));
    const Eigen::MatrixXd X = random_unit_rows(n, d, rng);
    const KernelHyperparams hp = random_hyperparams(d, rng);
    Eigen::MatrixXd K(X.rows(), X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < X.rows(); ++j) K(i, j) = matern52(X.row(i).transpose(), X.row(j).transpose(), hp);
    if ((K - K.transpose()).cwiseAbs().maxCoeff() != 0.0) return "kernel not symmetric";
    K.diagonal().array() += hp.noise_variance;
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff();
    if (lo < -1e-8) return "min eigenvalue " + fmt(lo);
    return {};
  }));

  out.push_back(check("noiseless posterior mean interpolates", kCases, seed, 7, [](Rng& rng) -> std::string {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const SearchSpace space = SearchSpace::unit_cube(d);
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 8));
    // Stratified along the first coordinate so no two inputs nearly coincide.
    Eigen::MatrixXd X = random_unit_rows(n, d, rng);
    for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, 0) = (static_cast<double>(i) + uniform(rng, 0.25, 0.75)) / static_cast<double>(n);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (auto& v : y) v = uniform(rng, 0.0, 10.0);
    KernelHyperparams hp = random_hyperparams(d, rng);
    hp.lengthscales = hp.lengthscales.cwiseMin(0.5 / static_cast<double>(n));
    hp.noise_variance = 0.0;
    const auto post = gp_fit(space, X, y, hp, y.mean());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double err = std::abs(gp_predict(post, X.row(i).transpose()).mean - y[i]);
      if (err > 1e-6) return "interpolation error " + fmt(err);
    }
    return {};
  }));

  out.push_back(check("expected improvement nonnegative and monotone", kCases, seed, 8, [](Rng& rng) -> std::string {
    const double inc = uniform(rng, -5.0, 5.0);
    const double sd = std::exp(uniform(rng, std::log(1e-3), std::log(5.0)));
    double prev = -1.0;
    for (int k = 0; k <= 40; ++k) {
      const double m = inc - 6.0 + 0.3 * k;
      const double ei = expected_improvement(m, sd * sd, inc);
      if (!(ei >= 0.0)) return "negative EI";
      if (ei < prev - 1e-15) return "EI decreased in the mean at mean " + fmt(m);
      prev = ei;
    }
    const double m = inc - uniform(rng, 0.0, 5.0);
    prev = -1.0;
    for (int k = 0; k <= 40; ++k) {
      const double s = 0.1 * k;
      const double ei = expected_improvement(m, s * s, inc);
      if (ei < prev - 1e-15) return "EI decreased in sigma at sigma " + fmt(s);
      prev = ei;
    }
    return {};
  }));

  out.push_back(check("averaged acquisition permutation invariant", kCases, seed, 9, [](Rng& rng) -> std::string {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const SearchSpace space = SearchSpace::unit_cube(d);
    const Eigen::MatrixXd X = random_unit_rows(5, d, rng);
    Eigen::VectorXd y(5);
    for (auto& v : y) v = uniform(rng, 0.0, 10.0);
    std::vector<KernelHyperparams> hps;
    for (int s = 0; s < 4; ++s) hps.push_back(random_hyperparams(d, rng));
    const AveragedAcquisition a(space, X, y, hps, y.mean());
    std::vector<KernelHyperparams> shuffled = hps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const AveragedAcquisition b(space, X, y, shuffled, y.mean());
    const LatentVector x = random_unit_rows(1, d, rng).row(0).transpose();
    if (std::abs(a(x) - b(x)) > 1e-12 * std::max(1.0, std::abs(a(x)))) return "order changed the average";
    return {};
  }));

  out.push_back(check("kfold partition", kCases, seed, 10, [](Rng& rng) -> std::string {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 200));
    const std::size_t k = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long long>(n)));
    const auto folds = kfold_split(n, k, rng);
    if (folds.size() != k) return "wrong fold count";
    std::set<std::size_t> all;
    std::size_t lo = n, hi = 0, total = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      total += f.size();
      all.insert(f.begin(), f.end());
    }
    if (total != n || all.size() != n || *all.rbegin() != n - 1) return "not a partition";
    if (hi - lo > 1) return "fold sizes differ by more than one";
    return {};
  }));

  out.push_back(check("svr dual feasibility and KKT gap", kCases, seed, 11, [](Rng& rng) -> std::string {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 15));
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const Eigen::MatrixXd X = random_unit_rows(n, d, rng);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (auto& v : y) v = uniform(rng, 0.0, 10.0);
    SVRHyperparams hp;
    hp.C = std::exp(uniform(rng, std::log(0.05), std::log(100.0)));
    hp.gamma = std::exp(uniform(rng, std::log(0.01), std::log(30.0)));
    hp.epsilon_tube = uniform(rng, 0.01, 1.0);
    SmoOptions opts;
    opts.record_objective = true;
    const auto sol = solve_svr_dual(rbf_gram(X, hp.gamma), y, hp, opts);
    if (!sol.converged) return "did not converge";
    if (sol.kkt_gap > opts.tolerance) return "KKT gap " + fmt(sol.kkt_gap);
    for (Eigen::Index i = 0; i < sol.alpha.size(); ++i) {
      if (sol.alpha[i] < 0 || sol.alpha_star[i] < 0) return "negative multiplier";
      if (std::abs(sol.alpha[i] - sol.alpha_star[i]) > hp.C + 1e-8) return "coefficient above C";
    }
    for (std::size_t t = 1; t < sol.objective_history.size(); ++t)
      if (sol.objective_history[t] > sol.objective_history[t - 1] + 1e-12) return "dual objective increased";
    // Non-bound support vectors sit on the tube edge up to the tolerance.
    const SVRModel model = svr_fit(X, y, hp);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double c = sol.alpha[i] - sol.alpha_star[i];
      if (std::abs(c) > 1e-8 && std::abs(c) < hp.C - 1e-8) {
        const double r = std::abs(svr_predict(model, X.row(i).transpose()) - y[i]);
        if (r > hp.epsilon_tube + opts.tolerance + 1e-9) return "free support vector off the tube, residual " + fmt(r);
      }
    }
    return {};
  }));

  out.push_back(check("svr json round trip exact", kCases, seed, 12, [](Rng& rng) -> std::string {
    SVRModel m;
    const Eigen::Index n = uniform_int(rng, 0, 6), d = uniform_int(rng, 1, 4);
    m.hp.C = uniform(rng, 0.1, 100.0);
    m.hp.gamma = uniform(rng, 0.001, 5.0);
    m.hp.epsilon_tube = uniform(rng, 0.01, 1.0);
    m.support_vectors = Eigen::MatrixXd(n, d);
    m.coefficients.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) m.support_vectors(i, j) = uniform01(rng);
      m.coefficients[i] = uniform(rng, -m.hp.C, m.hp.C);
    }
    m.bias = uniform(rng, -10.0, 10.0);
    const SVRModel back = svr_from_json(svr_to_json(m));
    const Eigen::VectorXd x = random_unit_rows(1, static_cast<std::size_t>(d), rng).row(0).transpose();
    if (std::abs(svr_predict(back, x) - svr_predict(m, x)) > 1e-12) return "prediction changed";
    return {};
  }));

  for (const std::string name : {"hotdog", "cesar"}) {
    const Benchmark bench = builtin_benchmark(name);
    out.push_back(check("quality clipped to [0, 10] on " + name + " (100 draws per case)", kCases, seed,
                        name == "hotdog" ? 13 : 14, [&](Rng& rng) -> std::string {
                          for (int k = 0; k < 100; ++k) {
                            const double q = sample_quality(bench.quality_model, random_point(bench.space, rng), rng);
                            if (!(q >= kQualityMin && q <= kQualityMax)) return "quality " + fmt(q);
                          }
                          return {};
                        }));
  }

  out.push_back(check("rule order does not change the aggregate", kCases, seed, 15, [](Rng& rng) -> std::string {
    const SearchSpace space = SearchSpace::unit_cube(1);
    std::vector<ExpertRule> rules;
    const long long k = uniform_int(rng, 1, 6);
    for (long long r = 0; r < k; ++r) {
      ExpertRule rule;
      rule.name = "r" + std::to_string(r);
      rule.when.push_back({"x0", uniform(rng, 0.0, 0.5), uniform(rng, 0.5, 1.0), {}});
      rule.distribution = Distribution::gaussian(uniform(rng, 0.0, 10.0), 1e-12);
      rule.weight = uniform(rng, 0.1, 3.0);
      rules.push_back(rule);
    }
    std::vector<ExpertRule> shuffled = rules;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Distribution fallback = Distribution::gaussian(5.0, 1e-12);
    const QualityModel a(space, rules, fallback), b(space, shuffled, fallback);
    const Point p{uniform01(rng)};
    Rng ra(1), rb(2);
    const double qa = sample_quality(a, p, ra), qb = sample_quality(b, p, rb);
    if (std::abs(qa - qb) > 1e-9) return fmt(qa) + " vs " + fmt(qb);
    return {};
  }));

  out.push_back(check("trace invariants", kCases, seed, 16, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    OptimizationConfig cfg;
    cfg.budget = static_cast<std::size_t>(uniform_int(rng, 1, 12));
    cfg.n_init = std::min<std::size_t>(cfg.budget, 3);
    cfg.seed = rng();
    std::size_t calls = 0;
    const Trace t = random_search_run(
        [&](const Point&) {
          ++calls;
          return uniform(rng, 0.0, 10.0);
        },
        space, cfg);
    if (t.size() != cfg.budget || calls != cfg.budget) return "budget not respected";
    double best = -1.0;
    for (const auto& e : t.entries) {
      if (auto err = validate_point(space, e.point)) return *err;
      best = std::max(best, e.y);
      if (e.best_so_far != best) return "running best wrong";
    }
    const Recommendation rec = recommend(t);
    if (rec.quality != best) return "recommendation is not the best observation";
    if (t.entries[rec.iteration - 1].y != best) return "recommendation points at the wrong iteration";
    for (std::size_t i = 0; i + 1 < rec.iteration; ++i)
      if (t.entries[i].y == best) return "later tie preferred";
    return {};
  }));

  out.push_back(check("histogram counts and modal bins", kCases, seed, 17, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    std::vector<Point> recs;
    const long long n = uniform_int(rng, 1, 30);
    for (long long i = 0; i < n; ++i) recs.push_back(random_point(space, rng));
    const std::size_t bins = static_cast<std::size_t>(uniform_int(rng, 1, 12));
    const auto modal = most_voted_recipe(space, recs, bins);
    if (modal.size() != space.size()) return "one modal bin per variable expected";
    for (std::size_t v = 0; v < space.size(); ++v) {
      const auto h = histogram(space, recs, space.variables()[v].name, bins);
      std::size_t total = 0, top = 0;
      for (const auto& b : h.bins) {
        total += b.count;
        top = std::max(top, b.count);
      }
      if (total != recs.size()) return "histogram loses recommendations";
      if (modal[v].count != top) return "modal bin is not the largest";
      for (const auto& b : h.bins) {
        if (b.count == top) {
          if (b.label != modal[v].label) return "tie not broken towards the lowest bin";
          break;
        }
      }
    }
    return {};
  }));

  out.push_back(check("sign test p value in (0, 1] and symmetric", kCases, seed, 18, [](Rng& rng) -> std::string {
    const long long n = uniform_int(rng, 1, 60);
    std::vector<double> a, b;
    for (long long i = 0; i < n; ++i) {
      a.push_back(static_cast<double>(uniform_int(rng, 0, 3)));
      b.push_back(static_cast<double>(uniform_int(rng, 0, 3)));
    }
    const double p = sign_test_p_value(a, b), q = sign_test_p_value(b, a);
    if (!(p > 0.0 && p <= 1.0)) return "p = " + fmt(p);
    if (std::abs(p - q) > 1e-12) return "asymmetric";
    return {};
  }));

  out.push_back(check("space json round trip", kCases, seed, 19, [](Rng& rng) -> std::string {
    const SearchSpace space = random_space(rng);
    const SearchSpace back = space_from_json(nlohmann::json::parse(space_to_json(space).dump()));
    if (!(back == space)) return "space changed";
    const Point p = random_point(space, rng);
    if (!same_point(point_from_json(space, point_to_json(space, p)), p, 0.0)) return "point changed";
    return {};
  }));

  return out;
}

}  // namespace rbo_test
