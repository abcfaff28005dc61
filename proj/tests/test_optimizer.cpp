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


#include <doctest.h>

#include <cmath>
#include <sstream>

#include "recipebo/error.hpp"
#include "recipebo/optimizer.hpp"

using namespace recipebo;

namespace {

double concave(const Point& p) {
  const double x = std::get<double>(p[0]);
  return 1.0 - (x - 0.5) * (x - 0.5);
}

OptimizationConfig small(std::size_t budget, std::uint64_t seed) {
  OptimizationConfig cfg;
  cfg.budget = budget;
  cfg.n_init = 3;
  cfg.seed = seed;
  cfg.acquisition.grid_size = 200;
  cfg.acquisition.local_steps = 20;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  OptimizationConfig cfg;
  cfg.budget = 5;
  cfg.n_init = 6;
  CHECK_THROWS_AS(validate_config(cfg), Error);
  cfg.n_init = 0;
  CHECK_THROWS_AS(validate_config(cfg), Error);
  cfg.n_init = 5;
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("bo_run basics") {
  const SearchSpace s = SearchSpace::unit_cube(1);
  std::size_t calls = 0;
  const auto counted = [&](const Point& p) {
    ++calls;
    return concave(p);
  };
  OptimizationConfig cfg = small(3, 1);
  const Trace design = bo_run(counted, s, cfg);
  CHECK(design.size() == 3);
  CHECK(calls == 3);
  const Trace rs = random_search_run(concave, s, cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(design.entries[i].point == rs.entries[i].point);

  // Dense-grid oracle for the optimum location.
  double best_x = 0.0, best_v = -1e300;
  for (int i = 0; i <= 100000; ++i) {
    const double v = concave({i / 100000.0});
    if (v > best_v) best_v = v, best_x = i / 100000.0;
  }
  const Trace t = bo_run(concave, s, small(20, 4));
  CHECK(t.size() == 20);
  CHECK(std::abs(std::get<double>(recommend(t).point[0]) - best_x) <= 0.05);
  const Trace again = bo_run(concave, s, small(20, 4));
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.entries[i].point == again.entries[i].point);
    CHECK(t.entries[i].y == again.entries[i].y);
  }

  const Trace bad_design = random_search_run(concave, s, small(5, 2));
  CHECK_THROWS_AS(bo_run([](const Point&) { return std::nan(""); }, s, small(5, 2)), Error);
  CHECK(bad_design.size() == 5);
}

TEST_CASE("random search trails bo on a concave objective") {
  const SearchSpace s = SearchSpace::unit_cube(1);
  double bo = 0.0, rs = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    OptimizationConfig cfg = small(10, seed);
    cfg.acquisition.n_gp_samples = 3;
    bo += recommend(bo_run(concave, s, cfg)).quality;
    rs += recommend(random_search_run(concave, s, cfg)).quality;
  }
  CHECK(rs <= bo);
}

TEST_CASE("random search trace") {
  const SearchSpace s = SearchSpace::unit_cube(2);
  OptimizationConfig cfg = small(1, 3);
  cfg.n_init = 1;
  const Trace one = random_search_run(concave, s, cfg);
  REQUIRE(one.size() == 1);
  CHECK(one.entries[0].best_so_far == one.entries[0].y);
  const auto curve = random_search_run(concave, s, small(30, 3)).best_curve();
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] >= curve[i - 1]);
}

TEST_CASE("recommend") {
  Trace t;
  for (double y : {2.0, 7.0, 5.0}) t.entries.push_back({t.size() + 1, {y}, y, 0.0});
  CHECK(recommend(t).iteration == 2);
  CHECK(recommend(t).quality == 7.0);
  Trace single;
  single.entries.push_back({1, {0.25}, 3.0, 3.0});
  CHECK(std::get<double>(recommend(single).point[0]) == 0.25);
  Trace tie;
  tie.entries.push_back({1, {0.1}, 7.0, 7.0});
  tie.entries.push_back({2, {0.2}, 7.0, 7.0});
  CHECK(recommend(tie).iteration == 1);
  CHECK_THROWS_AS(recommend(Trace{}), Error);
}

TEST_CASE("trace csv") {
  const SearchSpace s({real_var("t", 0, 10), categorical_var("c", {"a", "b"})});
  Trace t;
  t.entries.push_back({1, {2.5, std::string("b")}, 4.0, 4.0});
  t.entries.push_back({2, {7.0, std::string("a")}, 3.0, 4.0});
  std::ostringstream os;
  write_trace_csv(os, s, t);
  CHECK(os.str() == "iteration,t,c,y,best_so_far\n1,2.5,b,4,4\n2,7,a,3,4\n");
}
