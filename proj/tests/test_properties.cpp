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

#include "support.hpp"

TEST_CASE("property suites") {
  for (const auto& r : rbo_test::run_property_suites(20261018)) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.cases >= 1000);
    CHECK(r.failures == 0);
  }
}
