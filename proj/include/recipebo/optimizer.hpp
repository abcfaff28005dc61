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

#ifndef RECIPEBO_OPTIMIZER_HPP
#define RECIPEBO_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "recipebo/acquisition.hpp"
#include "recipebo/gp.hpp"
#include "recipebo/search_space.hpp"

namespace recipebo {

// Quality score of a configuration; larger is better. May be stochastic.
using Objective = std::function<double(const Point&)>;

enum class HyperparamMode {
  kSample,    // slice-sampled hyperparameters, averaged acquisition
  kOptimize,  // single type-II ML estimate
};

struct OptimizationConfig {
  std::size_t budget = 50;
  std::size_t n_init = 3;
  std::uint64_t seed = 42;
  AcquisitionConfig acquisition;
  HyperparamMode hyper_mode = HyperparamMode::kSample;
  std::size_t ml_restarts = 3;
  HyperBounds bounds;
  SliceSamplerOptions sampler;
  std::size_t warm_burn_in = 2;
};

struct TraceEntry {
  std::size_t iteration = 0;  // 1-based
  Point point;
  double y = 0.0;
  double best_so_far = 0.0;
};

struct Trace {
  std::vector<TraceEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<double> best_curve() const;
  std::vector<double> raw_curve() const;
};

void validate_config(const OptimizationConfig& cfg);

// Initial design: the first n_init draws of Rng(seed) via sample_uniform, so a
// random search with the same seed evaluates the same first n_init points.
Trace bo_run(const Objective& objective, const SearchSpace& space, const OptimizationConfig& cfg);
Trace random_search_run(const Objective& objective, const SearchSpace& space, const OptimizationConfig& cfg);

struct Recommendation {
  Point point;
  double quality = 0.0;
  std::size_t iteration = 0;
};

// Best observed entry; the earliest iteration wins ties.
Recommendation recommend(const Trace& trace);

// Columns: iteration, one per variable, y, best_so_far.
void write_trace_csv(std::ostream& out, const SearchSpace& space, const Trace& trace);

}  // namespace recipebo

#endif  // RECIPEBO_OPTIMIZER_HPP
