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

#include <map>

#include "recipebo/error.hpp"
#include "recipebo/search_space.hpp"

using namespace recipebo;

TEST_CASE("validate names the offending variable") {
  CHECK_FALSE(validate({real_var("t", 0, 1)}).has_value());
  CHECK(validate({}).value() == "search space has no variables");
  CHECK(validate({real_var("t", 5, 5)}).value().find("'t'") != std::string::npos);
  CHECK(validate({real_var("a", 0, 1), integer_var("a", 0, 3)}).value().find("duplicate") != std::string::npos);
  CHECK(validate({categorical_var("c", {"x", "x"})}).has_value());
  CHECK(validate({categorical_var("c", {"x"})}).has_value());
  CHECK_THROWS_AS(SearchSpace({integer_var("k", 3, 1)}), Error);
}

TEST_CASE("to_latent scales and one-hot encodes") {
  SearchSpace s({real_var("t", 5, 15), categorical_var("place", {"pan", "microwave"}), integer_var("k", 1, 9)});
  CHECK(s.latent_dim() == 4);
  const LatentVector v = to_latent(s, {8.0, std::string("pan"), 9LL});
  CHECK(v[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);
  CHECK(v[3] == 1.0);
  CHECK_THROWS_AS(to_latent(s, {8.0, std::string("oven"), 9LL}), Error);
  CHECK_THROWS_AS(to_latent(s, {8.0, std::string("pan"), 10LL}), Error);
  CHECK_THROWS_AS(to_latent(s, {8.0, std::string("pan")}), Error);
}

TEST_CASE("from_latent decodes with documented tie-breaks") {
  SearchSpace cat({categorical_var("brand", {"X", "Y"})});
  LatentVector v(2);
  v << 0.4, 0.6;
  CHECK(std::get<std::string>(from_latent(cat, v)[0]) == "Y");
  v << 0.5, 0.5;
  CHECK(std::get<std::string>(from_latent(cat, v)[0]) == "X");

  SearchSpace k({integer_var("k", 1, 9)});
  CHECK(std::get<long long>(from_latent(k, LatentVector::Constant(1, 0.5))[0]) == 5);
  // 1 + 0.0625 * 8 = 1.5 rounds half up.
  CHECK(std::get<long long>(from_latent(k, LatentVector::Constant(1, 0.0625))[0]) == 2);

  SearchSpace r({real_var("t", 0, 200)});
  CHECK(std::get<double>(from_latent(r, LatentVector::Constant(1, 0.25))[0]) == 50.0);
  CHECK_THROWS_AS(from_latent(r, LatentVector::Zero(2)), Error);
}

TEST_CASE("snap_latent") {
  SearchSpace k({integer_var("k", 1, 9)});
  CHECK(snap_latent(k, LatentVector::Constant(1, 0.47))[0] == 0.5);

  SearchSpace cat({categorical_var("c", {"a", "b"})});
  LatentVector v(2);
  v << 0.2, 0.8;
  const LatentVector s = snap_latent(cat, v);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 1.0);

  const SearchSpace cube = SearchSpace::unit_cube(3);
  LatentVector x(3);
  x << 0.1, 0.77, 0.333;
  CHECK((snap_latent(cube, x) - x).norm() == 0.0);
  CHECK_THROWS_AS(snap_latent(cube, LatentVector::Zero(2)), Error);
}

TEST_CASE("sample_uniform") {
  SearchSpace s({real_var("t", 0, 1), integer_var("k", 1, 9)});
  Rng a(5), b(5);
  CHECK(sample_uniform(s, a, 0).empty());
  CHECK(sample_uniform(s, a, 20) == sample_uniform(s, b, 20));

  // Each of the nine values expects 10 000 hits; the binomial sd is about 94,
  // so 500 is more than five sd.
  SearchSpace k({integer_var("k", 1, 9)});
  Rng rng(2024);
  std::map<long long, int> freq;
  for (const auto& p : sample_uniform(k, rng, 90000)) ++freq[std::get<long long>(p[0])];
  CHECK(freq.size() == 9);
  double chi2 = 0.0;
  for (const auto& [value, count] : freq) {
    CHECK(count >= 9500);
    CHECK(count <= 10500);
    chi2 += (count - 10000.0) * (count - 10000.0) / 10000.0;
  }
  CHECK(chi2 < 26.12);  // 0.999 quantile, 8 degrees of freedom
}

TEST_CASE("uniform_grid") {
  SearchSpace r({real_var("t", 0, 10)});
  const auto g = uniform_grid(r, {3});
  REQUIRE(g.size() == 3);
  CHECK(std::get<double>(g[0][0]) == 0.0);
  CHECK(std::get<double>(g[1][0]) == 5.0);
  CHECK(std::get<double>(g[2][0]) == 10.0);

  SearchSpace rc({real_var("t", 0, 10), categorical_var("c", {"a", "b"})});
  CHECK(uniform_grid(rc, {3, 2}).size() == 6);
  CHECK_THROWS_AS(uniform_grid(rc, {3, 3}), Error);

  const auto corners = uniform_grid(SearchSpace::unit_cube(2), {2, 2});
  REQUIRE(corners.size() == 4);
  CHECK(std::get<double>(corners[0][0]) == 0.0);
  CHECK(std::get<double>(corners[0][1]) == 0.0);
  CHECK(std::get<double>(corners[1][1]) == 1.0);
  CHECK(std::get<double>(corners[3][0]) == 1.0);
  CHECK(std::get<double>(corners[3][1]) == 1.0);
}
