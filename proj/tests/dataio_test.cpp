// Copyright 2026 The NRP Authors.
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


#include "nrp/dataio.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

namespace nrp {
namespace {

DatasetSchema small_schema() {
  return schema_from_json(nlohmann::json::parse(R"({
    "name": "small",
    "columns": [
      {"name": "id", "kind": "drop"},
      {"name": "age", "kind": "numeric", "private": true},
      {"name": "sex", "kind": "binary-categorical", "private": true,
       "value_map": {"F": 1, "M": 0}},
      {"name": "score", "kind": "numeric"}
    ]})"));
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

LoadedDataset parse(const std::string& text, const LoadOptions& opt = {}) {
  std::istringstream in(text);
  return parse_csv(in, small_schema(), opt);
}

TEST(SchemaTest, RetainedAndPrivate) {
  const DatasetSchema s = small_schema();
  EXPECT_EQ(s.retained_names(), (std::vector<std::string>{"age", "sex", "score"}));
  EXPECT_EQ(s.private_indices(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(schema_to_json(schema_from_json(schema_to_json(s))), schema_to_json(s));
}

TEST(SchemaTest, Rejections) {
  auto bad = [](const char* text) {
    return code_of([&] { schema_from_json(nlohmann::json::parse(text)); });
  };
  EXPECT_EQ(bad(R"({"name": "x"})"), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"kind": "numeric"}]})"), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"name": "a", "kind": "text"}]})"),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"name": "a", "kind": "binary"}]})"),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"name": "a", "kind": "drop", "private": true}]})"),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"name": "a", "kind": "drop"}]})"),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(bad(R"({"columns": [{"name": "a", "private": "yes"}]})"),
            ErrorCode::kSchemaMismatch);
}

TEST(CsvTest, ParsesFixture) {
  const auto ds = parse("id,age,sex,score\nP1, 40 ,F,1.5\nP2,60,M,-0.5\n\nP3,20,F,2\n");
  ASSERT_EQ(ds.tuples.size(), 3u);
  EXPECT_EQ(ds.column_names, (std::vector<std::string>{"age", "sex", "score"}));
  // score is shifted by +0.5 so every value is nonnegative.
  EXPECT_EQ(ds.column_shift, (Vec{0.0, 0.0, 0.5}));
  EXPECT_EQ(ds.tuples[0].values, (Vec{40.0, 1.0, 2.0}));
  EXPECT_EQ(ds.tuples[1].values, (Vec{60.0, 0.0, 0.0}));
  EXPECT_EQ(ds.tuples[2].values, (Vec{20.0, 1.0, 2.5}));
  EXPECT_EQ(ds.tuples[2].agent_id, 2u);
  EXPECT_EQ(ds.tuples[0].private_indices, (std::vector<std::size_t>{0, 1}));
  for (const auto& t : ds.tuples) EXPECT_NO_THROW(validate(t));
}

TEST(CsvTest, RawModeKeepsNegatives) {
  const auto ds = parse("id,age,sex,score\nP1,40,F,-1\n", LoadOptions{false});
  EXPECT_EQ(ds.tuples[0].values[2], -1.0);
  EXPECT_EQ(ds.column_shift, (Vec{0.0, 0.0, 0.0}));
}

TEST(CsvTest, HeaderOrderIsFreeAndBomAndCrlfAreAccepted) {
  const auto ds = parse("\xEF\xBB\xBFscore,sex,id,age\r\n1,M,P1,30\r\n");
  EXPECT_EQ(ds.tuples[0].values, (Vec{30.0, 0.0, 1.0}));
}

TEST(CsvTest, CellErrorsReportRowAndColumn) {
  try {
    parse("id,age,sex,score\nP1,40,F,1\nP2,abc,M,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), "age");
  }
  try {
    parse("id,age,sex,score\nP1,40,X,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), "sex");
  }
  EXPECT_EQ(code_of([] { parse("id,age,sex,score\nP1,40,F,inf\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse("id,age,sex,score\nP1,40,F\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse("id,age,sex,score\nP1,,F,1\n"); }), ErrorCode::kParseError);
}

TEST(CsvTest, HeaderErrors) {
  EXPECT_EQ(code_of([] { parse(""); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { parse("id,age,sex\n"); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { parse("id,age,sex,score,extra\n"); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(code_of([] { parse("id,age,age,sex,score\n"); }), ErrorCode::kSchemaMismatch);
}

TEST(CsvTest, MissingFiles) {
  EXPECT_EQ(code_of([] { load_csv("/nonexistent/x.csv", small_schema()); }),
            ErrorCode::kFileNotFound);
  EXPECT_EQ(code_of([] { load_schema("/nonexistent/s.json"); }), ErrorCode::kFileNotFound);
}

TEST(CsvTest, WriteThenReadIsBitExact) {
  Rng rng(1);
  std::vector<DataTuple> tuples;
  for (std::size_t i = 0; i < 20; ++i) {
    tuples.push_back({{rng.gaussian() * 1e-7, rng.uniform(), 1.0 / 3.0 + i}, {}, i});
  }
  std::ostringstream out;
  write_csv(out, {"a", "b", "c"}, tuples);
  const DatasetSchema s =
      schema_from_json(nlohmann::json::parse(R"({"columns": [{"name": "a"}, {"name": "b"},
                                                             {"name": "c"}]})"));
  std::istringstream in(out.str());
  const auto back = parse_csv(in, s, LoadOptions{false});
  ASSERT_EQ(back.tuples.size(), tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) EXPECT_EQ(back.tuples[i].values, tuples[i].values);
  EXPECT_THROW(write_csv(out, {"a"}, tuples), Error);
}

TEST(CsvTest, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "nrp_dataio_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "t.csv").string();
  const std::vector<DataTuple> tuples{{{1.0, 2.0}, {}, 0}, {{3.0, 4.5}, {}, 1}};
  write_csv(path, {"x", "y"}, tuples);
  const DatasetSchema s =
      schema_from_json(nlohmann::json::parse(R"({"columns": [{"name": "x"}, {"name": "y"}]})"));
  const auto back = load_csv(path, s);
  EXPECT_EQ(back.tuples[1].values, (Vec{3.0, 4.5}));
  std::filesystem::remove_all(dir);
}

TEST(SummaryTest, BruteForce) {
  const std::vector<DataTuple> tuples{{{3.0, 0.0}, {}, 0}, {{0.0, 4.0}, {}, 1},
                                      {{1.0, 1.0}, {}, 2}};
  const auto s = summarize(tuples);
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.min, (Vec{0.0, 0.0}));
  EXPECT_EQ(s.max, (Vec{3.0, 4.0}));
  EXPECT_NEAR(s.mean[0], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.mean[1], 5.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.alpha, 4.0);
  EXPECT_EQ(code_of([] { summarize(std::vector<DataTuple>{}); }), ErrorCode::kEmptyDataset);
}

TEST(LookalikeTest, ShapeMatchesHospitalLayout) {
  Rng rng(2);
  const Lookalike look = generate_lookalike(60, rng);
  EXPECT_EQ(look.schema.retained_names().size(), 50u);
  EXPECT_EQ(look.schema.private_indices().size(), 12u);
  std::size_t binary = 0, dropped = 0;
  for (const auto& c : look.schema.columns) {
    binary += c.kind == ColumnKind::kBinary;
    dropped += c.kind == ColumnKind::kDrop;
  }
  EXPECT_EQ(binary, 6u);
  EXPECT_EQ(dropped, 2u);

  std::istringstream in(look.csv);
  const auto ds = parse_csv(in, look.schema);
  ASSERT_EQ(ds.tuples.size(), 60u);
  bool shifted = false;
  for (double s : ds.column_shift) shifted |= s > 0.0;
  EXPECT_TRUE(shifted);
  for (const auto& t : ds.tuples) {
    ASSERT_EQ(t.size(), 50u);
    for (double v : t.values) EXPECT_GE(v, 0.0);
  }
  // Same seed, same table.
  Rng again(2);
  EXPECT_EQ(generate_lookalike(60, again).csv, look.csv);
}

}  // namespace
}  // namespace nrp
