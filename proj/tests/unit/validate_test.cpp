// Copyright (c) 2026, The pastekit Authors. All rights reserved.
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

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "pastekit/dataset.hpp"
#include "pastekit/validate.hpp"

namespace pastekit {
namespace {

bool has_code(const std::vector<ValidationIssue>& issues, const std::string& code) {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.code == code; });
}

Dataset small() {
  Dataset d;
  d.images.push_back({1, 4, 4, "a.png"});
  d.categories.push_back({1, "x", FrequencyBand::Unknown});
  d.annotations.push_back(Annotation::from_mask(1, 1, 1, RleMask::from_counts(4, 4, {5, 2, 9})));
  return d;
}

TEST(Validate, CleanDataset) { EXPECT_TRUE(validate_dataset(small()).empty()); }

TEST(Validate, FixturesAreClean) {
  for (const char* name : {"coco_fixture.json", "lvis_fixture.json"}) {
    const auto issues =
        validate_dataset_json(read_text_file(std::string(PASTEKIT_TEST_DATA_DIR) + "/" + name));
    EXPECT_TRUE(issues.empty()) << name << ": " << (issues.empty() ? "" : issues[0].message);
  }
}

TEST(Validate, BboxAndAreaMismatch) {
  Dataset d = small();
  d.annotations[0].bbox.w += 1;
  d.annotations[0].area = 99;
  const auto issues = validate_dataset(d);
  EXPECT_TRUE(has_code(issues, "bbox_mismatch"));
  EXPECT_TRUE(has_code(issues, "area_mismatch"));
}

TEST(Validate, DanglingAndDuplicate) {
  Dataset d = small();
  d.annotations.push_back(d.annotations[0]);
  d.annotations.back().category_id = 5;
  const auto issues = validate_dataset(d);
  EXPECT_TRUE(has_code(issues, "duplicate_id"));
  EXPECT_TRUE(has_code(issues, "dangling_reference"));
}

TEST(Validate, EmptyMaskAndSizeMismatch) {
  Dataset d = small();
  d.annotations[0] = Annotation::from_mask(1, 1, 1, RleMask::empty(4, 4));
  EXPECT_TRUE(has_code(validate_dataset(d), "empty_mask"));
  d.annotations[0] = Annotation::from_mask(1, 1, 1, RleMask::full(3, 4));
  EXPECT_TRUE(has_code(validate_dataset(d), "mask_size_mismatch"));
}

TEST(Validate, JsonDeclaredValuesChecked) {
  const auto issues = validate_dataset_json(R"({"images":[{"id":1,"width":4,"height":4,"file_name":"a"}],
      "annotations":[{"id":1,"image_id":1,"category_id":1,"segmentation":[[0,0,4,0,4,4,0,4]],
                      "area":15,"bbox":[0,0,4,3]}],
      "categories":[{"id":1,"name":"x"}]})");
  EXPECT_TRUE(has_code(issues, "area_mismatch"));
  EXPECT_TRUE(has_code(issues, "bbox_mismatch"));
}

TEST(Validate, JsonNonCanonicalCounts) {
  const auto issues = validate_dataset_json(R"({"images":[{"id":1,"width":3,"height":3,"file_name":"a"}],
      "annotations":[{"id":1,"image_id":1,"category_id":1,"segmentation":{"size":[3,3],"counts":[2,0,3,4]}}],
      "categories":[{"id":1,"name":"x"}]})");
  EXPECT_TRUE(has_code(issues, "rle_noncanonical"));
}

TEST(Validate, JsonParseFailureIsOneIssue) {
  const auto issues = validate_dataset_json("{");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].code, "parse");
}

}  // namespace
}  // namespace pastekit
