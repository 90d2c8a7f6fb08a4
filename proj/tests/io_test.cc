// Copyright 2026 The propeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "propeval/io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.h"
#include "propeval/errors.h"

namespace propeval {
namespace {

const std::string kFixtures = PROPEVAL_FIXTURES_DIR;

int LineOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.line();
  }
  return -1;
}

TEST(VocTest, FixtureMatchesExpectedCanonicalBytes) {
  const Dataset d = LoadDataset(kFixtures + "/voc", DatasetFormat::kVoc);
  EXPECT_EQ(DatasetToCanonicalJson(d), ReadFile(kFixtures + "/voc_expected.json"));
}

TEST(VocTest, SingleFileEqualsDirectory) {
  EXPECT_EQ(LoadDataset(kFixtures + "/voc/000005.xml", DatasetFormat::kVoc),
            LoadDataset(kFixtures + "/voc", DatasetFormat::kVoc));
}

TEST(VocTest, ExclusiveCoordinatesSkipPlusOne) {
  VocOptions o;
  o.exclusive_coordinates = true;
  const Dataset d = LoadDataset(kFixtures + "/voc", DatasetFormat::kVoc, o);
  EXPECT_EQ(d.instances()[0].box, BoundingBox(263, 211, 324, 339));
}

std::string VocDoc(const std::string& bndbox) {
  return "<annotation><filename>x.jpg</filename><size><width>10</width>"
         "<height>10</height></size><object><name>a</name><bndbox>" +
         bndbox + "</bndbox></object></annotation>";
}

TEST(VocTest, ClipsWithWarningAndRejectsOutside) {
  std::vector<std::string> warnings;
  auto prev = SetWarningHandler(
      [&](std::string_view m) { warnings.emplace_back(m); });
  const Dataset d = ParseVocAnnotations(
      {{"doc", VocDoc("<xmin>5</xmin><ymin>5</ymin><xmax>20</xmax><ymax>9</ymax>")}});
  SetWarningHandler(prev);
  EXPECT_EQ(d.instances()[0].box, BoundingBox(5, 5, 10, 10));
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(ParseVocAnnotations({{"doc", VocDoc("<xmin>15</xmin><ymin>5</ymin>"
                                                   "<xmax>20</xmax><ymax>9</ymax>")}}),
               InputError);
}

TEST(VocTest, ErrorsNameDocumentAndField) {
  try {
    ParseVocAnnotations({{"bad.xml", VocDoc("<xmin>1</xmin><ymin>1</ymin><xmax>3</xmax>")}});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.source(), "bad.xml");
    EXPECT_NE(std::string(e.what()).find("ymax"), std::string::npos);
  }
  EXPECT_EQ(LineOf([] {
              ParseVocAnnotations({{"broken.xml", "<annotation>\n<size>\n</annotation>"}});
            }),
            3);
}

TEST(CocoTest, FixtureMatchesExpectedCanonicalBytes) {
  const Dataset d = LoadDataset(kFixtures + "/coco.json", DatasetFormat::kCoco);
  EXPECT_EQ(DatasetToCanonicalJson(d), ReadFile(kFixtures + "/coco_expected.json"));
}

TEST(CocoTest, Errors) {
  const std::string base =
      R"({"images":[{"id":1,"width":10,"height":10}],)"
      R"("categories":[{"id":4,"name":"a"}],"annotations":[)";
  EXPECT_THROW(ParseCocoAnnotations(base + R"({"id":1,"image_id":2,"category_id":4,"bbox":[0,0,1,1]}]})"),
               InputError);
  EXPECT_THROW(ParseCocoAnnotations(base + R"({"id":1,"image_id":1,"category_id":5,"bbox":[0,0,1,1]}]})"),
               InputError);
  EXPECT_THROW(ParseCocoAnnotations(base + R"({"id":1,"image_id":1,"category_id":4,"bbox":[0,0,0,1]}]})"),
               InputError);
  EXPECT_THROW(ParseCocoAnnotations(base + R"({"id":1,"image_id":1,"category_id":4,"bbox":[0,0,1,1]},)"
                                           R"({"id":1,"image_id":1,"category_id":4,"bbox":[0,0,2,1]}]})"),
               InputError);
  try {
    ParseCocoAnnotations(base + R"({"id":77,"image_id":9,"category_id":4,"bbox":[0,0,1,1]}]})");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("77"), std::string::npos);
  }
  EXPECT_EQ(LineOf([] { ParseCocoAnnotations("{\n\"images\": [\n,]}"); }), 3);
}

TEST(CanonicalTest, RoundTrip) {
  const Dataset d = LoadDataset(kFixtures + "/coco.json", DatasetFormat::kCoco);
  const std::string text = DatasetToCanonicalJson(d);
  const Dataset back = DatasetFromCanonicalJson(text);
  EXPECT_EQ(back, d);
  EXPECT_EQ(DatasetToCanonicalJson(back), text);
}

TEST(DetectFormatTest, ByContent) {
  EXPECT_EQ(DetectDatasetFormat(kFixtures + "/voc"), DatasetFormat::kVoc);
  EXPECT_EQ(DetectDatasetFormat(kFixtures + "/coco.json"), DatasetFormat::kCoco);
  EXPECT_EQ(DetectDatasetFormat(kFixtures + "/coco_expected.json"),
            DatasetFormat::kCanonical);
}

ProposalSet RandomProposals(uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0, 500);
  ProposalSet p("m");
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 40; ++k) {
      const double x = u(gen), y = u(gen);
      p.Add("img" + std::to_string(i), BoundingBox(x, y, x + 1 + u(gen), y + 1e-3 + u(gen)),
            u(gen) / 500 - 0.3);
    }
  }
  p.Normalize();
  return p;
}

TEST(ProposalCsvTest, RoundTripIsIdentity) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const ProposalSet p = RandomProposals(seed);
    const std::string text = ProposalsToCsv(p);
    const ProposalSet back = ProposalsFromCsv(text, "mem", "m");
    EXPECT_EQ(back, p);
    EXPECT_EQ(ProposalsToCsv(back), text);
  }
}

TEST(ProposalJsonTest, RoundTripIsIdentity) {
  const ProposalSet p = RandomProposals(3);
  const ProposalSet back = ProposalsFromJson(ProposalsToJson(p), "mem");
  EXPECT_EQ(back, p);
}

TEST(ProposalCsvTest, ErrorsCarryLineNumbers) {
  const std::string h = "image_id,x_min,y_min,x_max,y_max,score\n";
  EXPECT_EQ(LineOf([&] { ProposalsFromCsv(h + "a,0,0,1,1,0.5\na,0,0,1\n", "f", "m"); }), 3);
  EXPECT_EQ(LineOf([&] { ProposalsFromCsv(h + "a,0,0,x,1,0.5\n", "f", "m"); }), 2);
  EXPECT_EQ(LineOf([&] { ProposalsFromCsv(h + "a,0,0,1,1,nan\n", "f", "m"); }), 2);
  EXPECT_EQ(LineOf([&] { ProposalsFromCsv(h + "\na,5,0,1,1,0.5\n", "f", "m"); }), 3);
  EXPECT_EQ(LineOf([&] { ProposalsFromCsv("id,x\n", "f", "m"); }), 1);
  // Rows of one image need not be contiguous; CRLF is accepted.
  const ProposalSet p =
      ProposalsFromCsv(h + "a,0,0,1,1,0.1\r\nb,0,0,1,1,0.2\r\na,0,0,2,2,0.3\r\n", "f", "m");
  EXPECT_EQ(p.ForImage("a").size(), 2u);
  EXPECT_EQ(p.ForImage("a")[0].score, 0.3);
}

TEST(LoadProposalsTest, MissingFileNamesPath) {
  try {
    LoadProposals("/nonexistent/p.csv", ProposalFormat::kCsv);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/p.csv"), std::string::npos);
  }
}

TEST(LoadProposalsTest, MethodNameFromStem) {
  const auto dir = std::filesystem::temp_directory_path() / "propeval_io_test";
  const std::string path = (dir / "edge_boxes.csv").string();
  SaveProposals(RandomProposals(1), path, ProposalFormat::kCsv);
  EXPECT_EQ(LoadProposals(path, ProposalFormat::kCsv).method_name(), "edge_boxes");
  std::filesystem::remove_all(dir);
}

TEST(NameListTest, InlineAndFile) {
  EXPECT_EQ(ReadNameList("a, b,c"), (std::vector<std::string>{"a", "b", "c"}));
  const auto dir = std::filesystem::temp_directory_path() / "propeval_names_test";
  WriteFile((dir / "names.txt").string(), "# comment\ndog\n\n car # trailing\n");
  EXPECT_EQ(ReadNameList((dir / "names.txt").string()),
            (std::vector<std::string>{"dog", "car"}));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace propeval
