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

#include "recipebo/optimizer.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "recipebo/error.hpp"

namespace recipebo {

namespace {

std::string describe_point(const SearchSpace& space, const Point& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size() && i < space.size(); ++i) {
    if (i) out += ", ";
    out += space.variables()[i].name + "=" + format_value(p[i]);
  }
  return out + "}";
}

void record(Trace& trace, const SearchSpace& space, const Objective& objective, Point point) {
  const double y = objective(point);
  if (!std::isfinite(y))
    throw NumericalError("objective returned non-finite value at " + describe_point(space, point));
  const double best = trace.entries.empty() ? y : std::max(trace.entries.back().best_so_far, y);
  trace.entries.push_back({trace.entries.size() + 1, std::move(point), y, best});
}

}  // namespace

std::vector<double> Trace::best_curve() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.best_so_far);
  return out;
}

std::vector<double> Trace::raw_curve() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.y);
  return out;
}

void validate_config(const OptimizationConfig& cfg) {
  if (cfg.budget < 1) throw ValidationError("budget must be at least 1");
  if (cfg.n_init < 1 || cfg.n_init > cfg.budget)
    throw ValidationError("n_init must satisfy 1 <= n_init <= budget (n_init=" + std::to_string(cfg.n_init) +
                          ", budget=" + std::to_string(cfg.budget) + ")");
  if (cfg.budget > cfg.n_init && cfg.n_init < 2)
    throw ValidationError("n_init must be at least 2 when GP steps follow (hyperparameter fitting needs 2 points)");
  if (cfg.acquisition.grid_size < 1) throw ValidationError("acquisition grid_size must be at least 1");
  if (cfg.acquisition.n_gp_samples < 1) throw ValidationError("acquisition n_gp_samples must be at least 1");
}

Trace bo_run(const Objective& objective, const SearchSpace& space, const OptimizationConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  Trace trace;
  trace.entries.reserve(cfg.budget);
  for (Point& p : sample_uniform(space, rng, cfg.n_init)) record(trace, space, objective, std::move(p));

  const auto d = static_cast<Eigen::Index>(space.latent_dim());
  Eigen::MatrixXd X(static_cast<Eigen::Index>(cfg.budget), d);
  Eigen::VectorXd y(static_cast<Eigen::Index>(cfg.budget));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = to_latent(space, trace.entries[i].point).transpose();
    y[static_cast<Eigen::Index>(i)] = trace.entries[i].y;
  }

  HyperparamSampler sampler(cfg.bounds, cfg.sampler);
  while (trace.size() < cfg.budget) {
    const auto n = static_cast<Eigen::Index>(trace.size());
    const Eigen::MatrixXd Xn = X.topRows(n);
    const Eigen::VectorXd yn = y.head(n);
    std::vector<KernelHyperparams> hps;
    if (cfg.hyper_mode == HyperparamMode::kSample) {
      hps = sampler.sample(space, Xn, yn, cfg.acquisition.n_gp_samples, rng, cfg.warm_burn_in);
    } else {
      hps.push_back(optimize_hyperparams(space, Xn, yn, cfg.ml_restarts, rng, cfg.bounds));
    }
    const AveragedAcquisition acq(space, Xn, yn, hps, yn.mean());
    const AcquisitionMaximum next =
        maximize_acquisition(space, [&](const LatentVector& x) { return acq(x); }, cfg.acquisition, rng);
    Point p = from_latent(space, next.x);
    X.row(n) = to_latent(space, p).transpose();
    record(trace, space, objective, std::move(p));
    y[n] = trace.entries.back().y;
  }
  return trace;
}

Trace random_search_run(const Objective& objective, const SearchSpace& space, const OptimizationConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  Trace trace;
  trace.entries.reserve(cfg.budget);
  for (Point& p : sample_uniform(space, rng, cfg.budget)) record(trace, space, objective, std::move(p));
  return trace;
}

Recommendation recommend(const Trace& trace) {
  if (trace.entries.empty()) throw ValidationError("recommend: empty trace");
  const TraceEntry* best = &trace.entries.front();
  for (const auto& e : trace.entries)
    if (e.y > best->y) best = &e;
  return {best->point, best->y, best->iteration};
}

void write_trace_csv(std::ostream& out, const SearchSpace& space, const Trace& trace) {
  out << "iteration";
  for (const auto& var : space.variables()) out << ',' << var.name;
  out << ",y,best_so_far\n";
  for (const auto& e : trace.entries) {
    out << e.iteration;
    for (const auto& v : e.point) out << ',' << format_value(v);
    out << ',' << format_value(e.y) << ',' << format_value(e.best_so_far) << '\n';
  }
}

}  // namespace recipebo
