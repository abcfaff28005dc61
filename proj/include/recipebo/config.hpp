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

#ifndef RECIPEBO_CONFIG_HPP
#define RECIPEBO_CONFIG_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "recipebo/expert_sim.hpp"
#include "recipebo/harness.hpp"
#include "recipebo/search_space.hpp"

namespace recipebo {

// {"variables": [{"name", "kind": "real"|"integer"|"categorical", "lower",
// "upper" | "labels"}, ...]}
SearchSpace space_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const SearchSpace& space);

// Space grammar plus "name", "rules", "fallback", "expert_point", "targets"
// and "grid_resolution".
Benchmark benchmark_from_json(const nlohmann::json& j);
nlohmann::json benchmark_to_json(const Benchmark& bench);

// Experiment settings. "benchmark" names a built-in, "benchmark_file" points
// to a benchmark config (resolved relative to `base_dir`). Every other field
// is optional and falls back to the defaults in ExperimentConfig.
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

Point point_from_json(const SearchSpace& space, const nlohmann::json& j);
nlohmann::json point_to_json(const SearchSpace& space, const Point& p);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace recipebo

#endif  // RECIPEBO_CONFIG_HPP
