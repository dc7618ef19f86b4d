// Copyright 2026 The oddcov Authors
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

#include "oddcov/odd_spec.hpp"

#include <string>

#include "gtest/gtest.h"
#include "oddcov/errors.hpp"
#include "support.hpp"

namespace oddcov {
namespace {

using testing::verticalcas;

constexpr const char* kMinimal = R"({
  "parameters": [
    {"name": "x", "kind": "continuous", "range": [0, 10], "bin_scheme": {"count": 5}},
    {"name": "mode", "kind": "categorical", "levels": ["a", "b"]}
  ],
  "constraints": [{"name": "low", "expression": "x < 8"}]
})";

bool has_path(const std::vector<Diagnostic>& diags, const std::string& path) {
  for (const auto& d : diags) {
    if (d.path == path) return true;
  }
  return false;
}

TEST(OddSpecTest, LoadsBundledSpec) {
  const OddSpec spec = verticalcas();
  ASSERT_EQ(spec.parameters.size(), 5u);
  EXPECT_EQ(spec.parameters[0].name, "h");
  EXPECT_EQ(spec.parameters[0].unit, "ft");
  EXPECT_EQ(spec.parameters[4].levels.size(), 9u);
  EXPECT_EQ(spec.groupings.size(), 2u);
  EXPECT_EQ(spec.constraints.size(), 2u);
  EXPECT_TRUE(validate_spec(spec).empty());
}

TEST(OddSpecTest, SerializeRoundTrips) {
  const OddSpec spec = verticalcas();
  EXPECT_EQ(parse_spec(serialize_spec(spec)), spec);
  const OddSpec small = parse_spec(kMinimal);
  EXPECT_EQ(parse_spec(serialize_spec(small)), small);
}

TEST(OddSpecTest, DefaultsApply) {
  const OddSpec spec = parse_spec(kMinimal);
  EXPECT_TRUE(spec.constraints[0].enabled);
  EXPECT_EQ(spec.column_for("x"), "x");
  EXPECT_TRUE(validate_spec(spec).empty());
}

TEST(OddSpecTest, RejectsUnknownField) {
  EXPECT_THROW(parse_spec(R"({"parameters": [], "extra": 1})"), SpecError);
  EXPECT_THROW(parse_spec(R"({"parameters": [{"name": "x", "kind": "continuous",
      "range": [0, 1], "bin_scheme": {"count": 1}, "colour": "red"}]})"),
               SpecError);
}

TEST(OddSpecTest, SyntaxErrorNamesLine) {
  try {
    parse_spec("{\n  \"parameters\": [,\n}");
    FAIL() << "expected SpecError";
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(OddSpecTest, EmptyParameterListAndDuplicates) {
  EXPECT_THROW(parse_spec(R"({"parameters": []})"), SpecError);
  EXPECT_THROW(parse_spec(R"({"parameters": [
      {"name": "x", "kind": "categorical", "levels": ["a"]},
      {"name": "x", "kind": "categorical", "levels": ["b"]}]})"),
               SpecError);
}

TEST(OddSpecTest, SchemeShapeIsChecked) {
  EXPECT_THROW(parse_spec(R"({"parameters": [{"name": "x", "kind": "continuous",
      "range": [0, 1], "bin_scheme": {"count": 2, "width": 0.5}}]})"),
               SpecError);
  EXPECT_THROW(parse_spec(R"({"parameters": [{"name": "x", "kind": "continuous",
      "range": [0, 1]}]})"),
               SpecError);
  EXPECT_THROW(parse_spec(R"({"parameters": [{"name": "x", "kind": "categorical",
      "levels": ["a"], "range": [0, 1]}]})"),
               SpecError);
}

TEST(OddSpecTest, ValidationFindsEveryProblem) {
  OddSpec spec = parse_spec(kMinimal);
  spec.parameters[0].min = 20;  // min > max
  spec.constraints.push_back({"bad", "speed > 3", true});
  spec.dataset_mapping.push_back({"nope", "col"});
  const auto diags = validate_spec(spec);
  EXPECT_TRUE(has_errors(diags));
  EXPECT_TRUE(has_path(diags, "parameters[0].range"));
  EXPECT_TRUE(has_path(diags, "constraints[1].expression"));
  EXPECT_TRUE(has_path(diags, "dataset_mapping.nope"));
  EXPECT_THROW(require_valid(spec), SpecError);
}

TEST(OddSpecTest, DiagnosticsSortedNumerically) {
  std::string doc = R"({"parameters": [)";
  for (int i = 0; i < 12; ++i) {
    doc += (i ? "," : "");
    doc += R"({"name": "p)" + std::to_string(i) +
           R"(", "kind": "continuous", "range": [1, 0], "bin_scheme": {"count": 1}})";
  }
  doc += "]}";
  const auto diags = validate_spec(parse_spec(doc));
  ASSERT_EQ(diags.size(), 12u);
  EXPECT_EQ(diags[1].path, "parameters[1].range");
  EXPECT_EQ(diags[2].path, "parameters[2].range");
  EXPECT_EQ(diags[11].path, "parameters[11].range");
}

TEST(OddSpecTest, WidthBeyondRangeIsAnError) {
  OddSpec spec = parse_spec(kMinimal);
  spec.parameters[0].bin_scheme = WidthScheme{11.0};
  EXPECT_TRUE(has_path(validate_spec(spec), "parameters[0].bin_scheme.width"));
}

TEST(OddSpecTest, ConstraintTypeErrors) {
  OddSpec spec = parse_spec(kMinimal);
  spec.constraints[0].expression = "x + 1";
  EXPECT_TRUE(has_path(validate_spec(spec), "constraints[0].expression"));
  spec.constraints[0].expression = "x <";
  EXPECT_TRUE(has_path(validate_spec(spec), "constraints[0].expression"));
}

TEST(OddSpecTest, ConstraintsSeeEffectiveNames) {
  OddSpec spec = parse_spec(kMinimal);
  spec.groupings.push_back({"both", {"x", "mode"}, GroupingMode::collapse, {}, 1});
  spec.constraints[0].expression = "both == 0";
  EXPECT_TRUE(validate_spec(spec).empty());
  spec.constraints[0].expression = "x < 3";
  EXPECT_TRUE(has_errors(validate_spec(spec)));
}

TEST(OddSpecTest, GroupingOwnershipAndTotality) {
  OddSpec spec = parse_spec(kMinimal);
  spec.groupings.push_back({"g1", {"x"}, GroupingMode::collapse, {}, 1});
  spec.groupings.push_back({"g2", {"x"}, GroupingMode::collapse, {}, 1});
  EXPECT_TRUE(has_path(validate_spec(spec), "groupings[1].sources[0]"));

  spec.groupings.pop_back();
  spec.groupings[0] = {"g", {"mode"}, GroupingMode::map, {{{0}, 0}}, 1};
  EXPECT_TRUE(has_path(validate_spec(spec), "groupings[0].map_table"));
  spec.groupings[0].map_table.push_back({{1}, 0});
  EXPECT_TRUE(validate_spec(spec).empty());
}

TEST(OddSpecTest, HashCoversIndexSpaceOnly) {
  const OddSpec base = verticalcas();
  const std::string h = spec_hash(base);
  EXPECT_EQ(h.size(), 16u);

  OddSpec other = base;
  other.constraints.clear();
  other.dataset_mapping.clear();
  EXPECT_EQ(spec_hash(other), h);

  other.parameters[3].bin_scheme = CountScheme{60};
  EXPECT_NE(spec_hash(other), h);
  EXPECT_NE(spec_hash(without_groupings(base, {"s_adv"})), h);
}

TEST(OddSpecTest, WithoutGroupings) {
  const OddSpec base = verticalcas();
  const OddSpec ungrouped = without_groupings(base, {"hdot_int"});
  ASSERT_EQ(ungrouped.groupings.size(), 1u);
  EXPECT_EQ(ungrouped.groupings[0].target_name, "s_adv");
  EXPECT_THROW(without_groupings(base, {"missing"}), SpecError);
}

TEST(OddSpecTest, MappingDefaultsAndOverrides) {
  OddSpec spec = parse_spec(kMinimal);
  spec.dataset_mapping.push_back({"x", "x_col"});
  EXPECT_EQ(spec.column_for("x"), "x_col");
  EXPECT_EQ(spec.column_for("mode"), "mode");
}

}  // namespace
}  // namespace oddcov
