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

#ifndef RECIPEBO_SEARCH_SPACE_HPP
#define RECIPEBO_SEARCH_SPACE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "recipebo/rng.hpp"

namespace recipebo {

struct RealDomain {
  double lower = 0.0;
  double upper = 1.0;
};

struct IntegerDomain {
  long long lower = 0;
  long long upper = 1;
};

struct CategoricalDomain {
  std::vector<std::string> labels;
};

using Domain = std::variant<RealDomain, IntegerDomain, CategoricalDomain>;

struct VariableSpec {
  std::string name;
  Domain domain;

  bool is_real() const { return std::holds_alternative<RealDomain>(domain); }
  bool is_integer() const { return std::holds_alternative<IntegerDomain>(domain); }
  bool is_categorical() const { return std::holds_alternative<CategoricalDomain>(domain); }
  // Number of latent coordinates this variable occupies.
  std::size_t latent_width() const;
};

VariableSpec real_var(std::string name, double lower, double upper);
VariableSpec integer_var(std::string name, long long lower, long long upper);
VariableSpec categorical_var(std::string name, std::vector<std::string> labels);

// A value in domain units: double for Real, long long for Integer, label for
// Categorical.
using Value = std::variant<double, long long, std::string>;
using Point = std::vector<Value>;

// Unit-cube coordinates; categorical variables occupy a one-hot block.
using LatentVector = Eigen::VectorXd;

// Returns a message naming the offending variable, or nullopt when well formed.
std::optional<std::string> validate(const std::vector<VariableSpec>& variables);

class SearchSpace {
 public:
  // Throws ValidationError when `validate` reports a problem.
  explicit SearchSpace(std::vector<VariableSpec> variables);

  // All-real space [0,1]^d, handy for purely continuous problems.
  static SearchSpace unit_cube(std::size_t dims);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  std::size_t size() const { return variables_.size(); }
  std::size_t latent_dim() const { return latent_dim_; }
  // First latent coordinate of variable i.
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool all_real() const;

  bool operator==(const SearchSpace& other) const;

 private:
  std::vector<VariableSpec> variables_;
  std::vector<std::size_t> offsets_;
  std::size_t latent_dim_ = 0;
};

std::optional<std::string> validate_point(const SearchSpace& space, const Point& point);

LatentVector to_latent(const SearchSpace& space, const Point& point);
Point from_latent(const SearchSpace& space, const LatentVector& v);
LatentVector snap_latent(const SearchSpace& space, const LatentVector& v);

std::vector<Point> sample_uniform(const SearchSpace& space, Rng& rng, std::size_t n);

// Cartesian product of per-variable equispaced values; the last variable
// varies fastest.
std::vector<Point> uniform_grid(const SearchSpace& space, const std::vector<std::size_t>& resolution);

std::string format_value(const Value& value);

}  // namespace recipebo

#endif  // RECIPEBO_SEARCH_SPACE_HPP
