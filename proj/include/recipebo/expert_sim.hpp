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

#ifndef RECIPEBO_EXPERT_SIM_HPP
#define RECIPEBO_EXPERT_SIM_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recipebo/rng.hpp"
#include "recipebo/search_space.hpp"

namespace recipebo {

inline constexpr double kQualityMin = 0.0;
inline constexpr double kQualityMax = 10.0;

// One conjunct of a rule predicate: an inclusive interval for numeric
// variables or a label set for categorical ones.
struct Condition {
  std::string variable;
  std::optional<double> min;
  std::optional<double> max;
  std::vector<std::string> labels;
};

enum class Family { kGaussian, kGamma };

struct Distribution {
  Family family = Family::kGaussian;
  double a = 5.0;  // Gaussian mean | Gamma shape
  double b = 1.0;  // Gaussian sd   | Gamma scale

  static Distribution gaussian(double mean, double sd) { return {Family::kGaussian, mean, sd}; }
  static Distribution gamma(double shape, double scale) { return {Family::kGamma, shape, scale}; }
  double mean() const { return family == Family::kGaussian ? a : a * b; }
  double draw(Rng& rng) const;
};

struct ExpertRule {
  std::string name;
  std::vector<Condition> when;  // conjunctive; empty fires everywhere
  Distribution distribution;
  double weight = 1.0;
};

// Quality of a configuration as the weighted mean of one draw per firing rule,
// clipped to [0, 10]. The fallback distribution is used when nothing fires.
class QualityModel {
 public:
  QualityModel(const SearchSpace& space, std::vector<ExpertRule> rules,
               Distribution fallback = Distribution::gaussian(5.0, 2.0));

  const std::vector<ExpertRule>& rules() const { return rules_; }
  const Distribution& fallback() const { return fallback_; }
  bool fires(std::size_t rule, const Point& point) const;
  // Indices of the rules whose predicate holds at `point`.
  std::vector<std::size_t> firing(const Point& point) const;

 private:
  struct ResolvedCondition {
    std::size_t var = 0;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::string> labels;
  };

  SearchSpace space_;
  std::vector<ExpertRule> rules_;
  std::vector<std::vector<ResolvedCondition>> resolved_;
  Distribution fallback_;
};

double sample_quality(const QualityModel& model, const Point& point, Rng& rng);

double jury_mean(const std::vector<double>& evaluations);

enum class Provenance { kReal, kSimulated };

struct DatasetRow {
  Point point;
  double quality = 0.0;
  Provenance provenance = Provenance::kReal;
};

struct Dataset {
  std::vector<DatasetRow> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t count(Provenance p) const;
};

struct DatasetOptions {
  std::vector<std::size_t> grid_resolution;  // one per variable
  std::size_t max_grid_points = 0;            // 0 keeps the full grid
  std::size_t n_sim = 500;
  std::size_t jury_size = 3;
};

// Real-tagged rows: grid points (uniformly subsampled without replacement to
// max_grid_points when the grid is larger), each scored by a jury of N draws.
// Simulated rows: n_sim uniform points with one draw each.
Dataset generate_dataset(const QualityModel& model, const SearchSpace& space, const DatasetOptions& options, Rng& rng);

// CSV with one column per variable plus `quality`; an optional `provenance`
// column is accepted and ignored. All rows are tagged real.
Dataset load_real_dataset(const std::string& path, const SearchSpace& space);
Dataset parse_real_dataset(std::istream& in, const SearchSpace& space);

// Header: variable names, quality, provenance.
void write_dataset_csv(std::ostream& out, const SearchSpace& space, const Dataset& data);

// Target region for one variable of a benchmark's planted optimum.
struct TargetRegion {
  std::string variable;
  std::optional<double> min;
  std::optional<double> max;
  std::vector<std::string> labels;
};

struct Benchmark {
  std::string name;
  SearchSpace space;
  QualityModel quality_model;
  Point expert_point;
  std::vector<TargetRegion> targets;
  std::vector<std::size_t> grid_resolution;
};

Benchmark hotdog_benchmark();
Benchmark cesar_benchmark();
// "hotdog" | "cesar"
Benchmark builtin_benchmark(const std::string& name);

// A point inside every target region, drawn uniformly within each region.
Point sample_target_point(const Benchmark& bench, Rng& rng);
bool in_target(const TargetRegion& region, const Value& value);

}  // namespace recipebo

#endif  // RECIPEBO_EXPERT_SIM_HPP
