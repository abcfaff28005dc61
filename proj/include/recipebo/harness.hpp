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

#ifndef RECIPEBO_HARNESS_HPP
#define RECIPEBO_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recipebo/expert_sim.hpp"
#include "recipebo/optimizer.hpp"
#include "recipebo/svr.hpp"

namespace recipebo {

struct SurrogateConfig {
  std::vector<double> C_grid = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> gamma_grid = {0.001, 0.01, 0.1, 1.0};
  double epsilon_tube = 0.5;
  std::size_t folds = 10;
};

struct ExperimentConfig {
  Benchmark benchmark = hotdog_benchmark();
  std::size_t replications = 100;
  std::size_t iterations = 50;
  std::uint64_t seed = 42;
  OptimizationConfig optimizer;  // budget and seed are set per replication
  SurrogateConfig surrogate;
  DatasetOptions dataset = {{}, 45, 500, 3};  // empty resolution -> benchmark default
  std::size_t histogram_bins = 10;
  std::size_t threads = 0;  // 0 -> hardware concurrency
};

void validate_config(const ExperimentConfig& cfg);

// Seeds for each stage, derived from the master seed.
struct SeedPlan {
  std::uint64_t master = 0;
  std::uint64_t dataset = 0;
  std::uint64_t cross_validation = 0;
  std::vector<std::uint64_t> replications;
};
SeedPlan plan_seeds(std::uint64_t master, std::size_t replications);

struct Curve {
  std::string method;  // "bo" | "random_search" | "expert"
  std::vector<double> mean;
  std::vector<double> std;
};

struct HistogramBin {
  std::string label;
  std::optional<double> lower;  // numeric bins
  std::optional<double> upper;
  std::size_t count = 0;
};

struct VariableHistogram {
  std::string variable;
  std::vector<HistogramBin> bins;
};

struct SurrogateSummary {
  SVRHyperparams hp;
  double cv_rmse = 0.0;
  double cv_mse = 0.0;
  std::size_t dataset_rows = 0;
  std::size_t real_rows = 0;
  std::size_t support_vectors = 0;
  bool converged = true;
  std::vector<GridCell> table;
};

struct ExperimentReport {
  std::string benchmark;
  std::vector<VariableSpec> variables;
  std::size_t iterations = 0;
  std::size_t replications = 0;
  SeedPlan seeds;
  SurrogateSummary surrogate;
  double expert_quality = 0.0;
  std::vector<Curve> best_curves;  // best-so-far; bo, random_search, expert
  std::vector<Curve> raw_curves;   // raw per-iteration quality; bo, random_search
  std::vector<double> bo_final;    // per replication, in replication order
  std::vector<double> rs_final;
  std::vector<Point> recommendations;
  std::vector<VariableHistogram> histograms;
  std::vector<HistogramBin> most_voted;  // one per variable
  double wall_time_s = 0.0;  // written only when `record_timing` is set on export

  SearchSpace space() const { return SearchSpace(variables); }
  const Curve& best_curve(const std::string& method) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Dataset generation, surrogate selection and fit, then paired BO / random
// search replications against the surrogate. Errors are rethrown with the
// stage name prefixed.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// Equal-width bins over a numeric variable's bounds (last bin closed), one bin
// per label for categoricals.
VariableHistogram histogram(const SearchSpace& space, const std::vector<Point>& recommendations,
                            const std::string& variable, std::size_t bins);

// Modal bin per variable; lowest bin index wins ties.
std::vector<HistogramBin> most_voted_recipe(const SearchSpace& space, const std::vector<Point>& recommendations,
                                            std::size_t bins);

// curves.csv, raw_curves.csv, histograms.csv, recipe.txt, summary.json,
// report.json and one SVG line plot per curve plus a combined plot.
void export_report(const ExperimentReport& report, const std::string& out_dir, bool record_timing = false);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

// Two-sided exact sign test on paired differences (ties dropped).
double sign_test_p_value(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace recipebo

#endif  // RECIPEBO_HARNESS_HPP
