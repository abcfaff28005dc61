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

#include <string>

#include "recipebo/error.hpp"
#include "recipebo/expert_sim.hpp"

namespace recipebo {

namespace {

// Rules for the planted optimum, and ruined dishes, outweigh ordinary ones in
// the weighted mean.
constexpr double kIdeal = 2.0;
constexpr double kRuin = 1.5;

Condition range(const std::string& var, double lo, double hi) { return {var, lo, hi, {}}; }
Condition among(const std::string& var, std::vector<std::string> labels) { return {var, {}, {}, std::move(labels)}; }

// Spread of a single evaluator's score around a rule's typical value. Tasters
// agree about a dish done exactly right and disagree about everything else.
struct Panel {
  double sd;
  double agreed_sd;

  ExpertRule good(std::string name, Condition c, double mean, double weight = 1.0) const {
    return {std::move(name), {std::move(c)}, Distribution::gaussian(mean, sd), weight};
  }
  ExpertRule ideal(std::string name, Condition c, double mean) const {
    return {std::move(name), {std::move(c)}, Distribution::gaussian(mean, agreed_sd), kIdeal};
  }
};

// Overcooked / overdosed regions: right-skewed low scores.
ExpertRule ruined(std::string name, std::vector<Condition> when, double scale, double weight = kRuin) {
  return {std::move(name), std::move(when), Distribution::gamma(2.0, scale), weight};
}

}  // namespace

Benchmark cesar_benchmark() {
  SearchSpace space({
      real_var("sausage_time_s", 0, 200),
      real_var("bread_time_s", 0, 200),
      categorical_var("cooking_place", {"pan", "microwave"}),
      integer_var("bbq_sauce_tsp", 0, 9),
      integer_var("mayonnaise_tsp", 0, 9),
      integer_var("mustard_tsp", 0, 9),
  });

  const Panel p{6.5, 0.75};
  std::vector<ExpertRule> rules = {
      p.good("sausage raw", range("sausage_time_s", 0, 20), 1.5, kIdeal),
      p.good("sausage underdone", range("sausage_time_s", 20, 35), 5.0),
      p.good("sausage nearly", range("sausage_time_s", 35, 45), 7.5),
      p.ideal("sausage just right", range("sausage_time_s", 45, 55), 9.5),
      p.good("sausage a bit long", range("sausage_time_s", 55, 70), 7.5),
      p.good("sausage well done", range("sausage_time_s", 70, 90), 5.5),
      ruined("sausage burnt", {range("sausage_time_s", 90, 200)}, 1.0, 1.0),

      p.good("bread soft", range("bread_time_s", 0, 50), 1.5, kIdeal),
      p.good("bread warm", range("bread_time_s", 50, 80), 5.0),
      p.good("bread golden", range("bread_time_s", 80, 100), 7.5),
      p.ideal("bread crisp", range("bread_time_s", 100, 115), 9.5),
      p.good("bread crunchy", range("bread_time_s", 115, 135), 7.5),
      p.good("bread dry", range("bread_time_s", 135, 160), 5.0),
      ruined("bread burnt", {range("bread_time_s", 160, 200)}, 1.0, 1.0),

      p.ideal("pan fried", among("cooking_place", {"pan"}), 8.5),
      p.good("microwaved", among("cooking_place", {"microwave"}), 4.0),
      ruined("rubbery microwave sausage", {among("cooking_place", {"microwave"}), range("sausage_time_s", 120, 200)},
             0.75, 2.0),
  };
  for (const std::string sauce : {"bbq_sauce_tsp", "mayonnaise_tsp", "mustard_tsp"}) {
    rules.push_back(p.ideal(sauce + " none", range(sauce, 0, 0), 9.0));
    rules.push_back(p.good(sauce + " a little", range(sauce, 1, 2), 6.5));
    rules.push_back(p.good(sauce + " plenty", range(sauce, 3, 5), 4.0));
    rules.push_back(ruined(sauce + " drowned", {range(sauce, 6, 9)}, 1.25, 1.0));
  }

  QualityModel model(space, std::move(rules));
  Point expert = {80.0, 90.0, std::string("pan"), 1LL, 2LL, 1LL};
  std::vector<TargetRegion> targets = {
      {"sausage_time_s", 45.0, 55.0, {}}, {"bread_time_s", 100.0, 115.0, {}}, {"cooking_place", {}, {}, {"pan"}},
      {"bbq_sauce_tsp", 0.0, 0.0, {}},    {"mayonnaise_tsp", 0.0, 0.0, {}},   {"mustard_tsp", 0.0, 0.0, {}},
  };
  return {"cesar", space, std::move(model), std::move(expert), std::move(targets), {3, 3, 2, 2, 2, 2}};
}

Benchmark hotdog_benchmark() {
  SearchSpace space({
      integer_var("ceramic_intensity_bread", 1, 9),
      real_var("bread_time_s", 5, 50),
      integer_var("ceramic_intensity_chicken", 1, 9),
      real_var("chicken_time_s", 1, 200),
      categorical_var("cesar_brand", {"X", "Y"}),
      categorical_var("lettuce_brand", {"X", "Y", "Z", "T"}),
  });

  const Panel p{6.0, 0.75};
  std::vector<ExpertRule> rules = {
      p.good("bread ceramic low", range("ceramic_intensity_bread", 1, 3), 2.5),
      p.good("bread ceramic medium", range("ceramic_intensity_bread", 4, 5), 4.5),
      p.good("bread ceramic high", range("ceramic_intensity_bread", 6, 7), 6.5),
      p.good("bread ceramic hotter", range("ceramic_intensity_bread", 8, 8), 8.0),
      p.ideal("bread ceramic max", range("ceramic_intensity_bread", 9, 9), 9.5),

      p.good("bread cold", range("bread_time_s", 5, 9), 2.0, kIdeal),
      p.good("bread warm", range("bread_time_s", 9, 12), 7.0),
      p.ideal("bread toasted", range("bread_time_s", 12, 15), 9.5),
      p.good("bread well toasted", range("bread_time_s", 15, 20), 7.5),
      p.good("bread dark", range("bread_time_s", 20, 30), 4.5),
      ruined("bread burnt", {range("bread_time_s", 30, 50)}, 1.25),
      ruined("bread charred", {range("ceramic_intensity_bread", 8, 9), range("bread_time_s", 30, 50)}, 0.75),

      p.good("chicken ceramic low", range("ceramic_intensity_chicken", 1, 3), 2.0),
      p.good("chicken ceramic medium", range("ceramic_intensity_chicken", 4, 5), 4.5),
      p.good("chicken ceramic high", range("ceramic_intensity_chicken", 6, 6), 6.5),
      p.good("chicken ceramic hotter", range("ceramic_intensity_chicken", 7, 7), 8.0),
      p.ideal("chicken ceramic ideal", range("ceramic_intensity_chicken", 8, 8), 9.5),
      ruined("chicken scorched", {range("ceramic_intensity_chicken", 9, 9)}, 1.25),

      ruined("chicken raw", {range("chicken_time_s", 1, 40)}, 1.0),
      p.good("chicken underdone", range("chicken_time_s", 40, 55), 5.0),
      p.good("chicken nearly", range("chicken_time_s", 55, 70), 7.5),
      p.ideal("chicken juicy", range("chicken_time_s", 70, 100), 9.5),
      p.good("chicken firm", range("chicken_time_s", 100, 120), 7.5),
      p.good("chicken tough", range("chicken_time_s", 120, 145), 4.5),
      ruined("chicken dry", {range("chicken_time_s", 145, 200)}, 1.0),

      p.ideal("brand X", among("cesar_brand", {"X"}), 9.0),
      p.good("brand Y", among("cesar_brand", {"Y"}), 4.0),

      p.good("lettuce X", among("lettuce_brand", {"X"}), 5.5),
      p.ideal("lettuce Y", among("lettuce_brand", {"Y"}), 9.0),
      p.good("lettuce Z", among("lettuce_brand", {"Z"}), 4.5),
      p.good("lettuce T", among("lettuce_brand", {"T"}), 3.5),
  };

  QualityModel model(space, std::move(rules));
  Point expert = {7LL, 20.0, 6LL, 110.0, std::string("Y"), std::string("X")};
  std::vector<TargetRegion> targets = {
      {"ceramic_intensity_bread", 9.0, 9.0, {}},   {"bread_time_s", 12.0, 15.0, {}},
      {"ceramic_intensity_chicken", 8.0, 8.0, {}}, {"chicken_time_s", 70.0, 100.0, {}},
      {"cesar_brand", {}, {}, {"X"}},              {"lettuce_brand", {}, {}, {"Y"}},
  };
  return {"hotdog", space, std::move(model), std::move(expert), std::move(targets), {3, 3, 3, 3, 2, 4}};
}

Benchmark builtin_benchmark(const std::string& name) {
  if (name == "hotdog") return hotdog_benchmark();
  if (name == "cesar") return cesar_benchmark();
  throw ValidationError("unknown benchmark '" + name + "' (expected hotdog or cesar)");
}

}  // namespace recipebo
