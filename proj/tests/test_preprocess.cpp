#include <gtest/gtest.h>

#include "fixture.hpp"
#include "oracles.hpp"
#include "sqlfill/preprocess.hpp"
#include "sqlfill/sql_model.hpp"

using namespace sqlfill;
using sqlfill::testing::fixture_corpus;
using sqlfill::testing::fixture_db;
using sqlfill::testing::fixture_schema;

namespace {

using Tokens = std::vector<std::string>;

const DbSchema& world() { return fixture_schema("world"); }

// Table "match" plus a column "match" in another table, for the tie-break.
DbSchema tie_schema() {
  DbSchema s;
  s.db_id = "tie";
  s.columns.push_back({std::nullopt, "*", "*", ColumnType::text});
  s.tables.push_back({"match", "match", {1}});
  s.tables.push_back({"game", "game", {2}});
  s.columns.push_back({0, "id", "id", ColumnType::number});
  s.columns.push_back({1, "match", "match", ColumnType::text});
  return s;
}

void expect_partition(const PreprocessedQuestion& pq) {
  std::size_t next = 0;
  for (const Segment& seg : pq.segments) {
    EXPECT_EQ(seg.start, next);
    EXPECT_LE(seg.start, seg.end);
    next = seg.end + 1;
  }
  EXPECT_EQ(next, pq.tokens.size());
}

}  // namespace

TEST(Tokenize, SpanishQuestion) {
  EXPECT_EQ(tokenize("List of countries where Spanish is an official language."),
            (Tokens{"list", "of", "countries", "where", "spanish", "is", "an", "official", "language"}));
}

TEST(Tokenize, EmptyAndQuoted) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("show \"New York\" city"), (Tokens{"show", "new york", "city"}));
  EXPECT_EQ(tokenize("show \"  New   York \" city"), (Tokens{"show", "new york", "city"}));
}

TEST(Tokenize, NumbersAndPunctuation) {
  EXPECT_EQ(tokenize("above 75.5, below 3.2?"), (Tokens{"above", "75.5", "below", "3.2"}));
  EXPECT_EQ(tokenize("end. Next"), (Tokens{"end", "next"}));
  EXPECT_EQ(tokenize("Stark's Park"), (Tokens{"stark", "s", "park"}));
}

TEST(Segment, OfficialLanguage) {
  const auto pq = segment_question(tokenize("List of countries where Spanish is an official language."), world());
  expect_partition(pq);
  const Segment& last = pq.segments.back();
  EXPECT_EQ(last.start, 8u);
  EXPECT_EQ(last.indicator, Indicator::column);
  EXPECT_EQ(last.ordinal, 17u);
  for (std::size_t i = 0; i + 1 < pq.segments.size(); ++i) EXPECT_EQ(pq.segments[i].indicator, Indicator::none);
}

TEST(Segment, LongestMatchWins) {
  const auto pq = segment_question(tokenize("show each country code"), world());
  expect_partition(pq);
  ASSERT_EQ(pq.segments.size(), 3u);
  EXPECT_EQ(pq.segments[2].start, 2u);
  EXPECT_EQ(pq.segments[2].end, 3u);
  EXPECT_EQ(pq.segments[2].indicator, Indicator::column);
  EXPECT_EQ(pq.segments[2].ordinal, 13u);
}

TEST(Segment, NothingMatches) {
  const auto pq = segment_question(tokenize("hello there friend"), world());
  ASSERT_EQ(pq.segments.size(), 3u);
  for (const auto& s : pq.segments) {
    EXPECT_EQ(s.indicator, Indicator::none);
    EXPECT_EQ(s.start, s.end);
  }
}

TEST(Segment, ColumnBeatsTableAtEqualLength) {
  const auto pq = segment_question(tokenize("which match"), tie_schema());
  ASSERT_EQ(pq.segments.size(), 2u);
  EXPECT_EQ(pq.segments[1].indicator, Indicator::column);
  EXPECT_EQ(pq.segments[1].ordinal, 2u);
}

TEST(Segment, TableMatch) {
  const auto pq = segment_question(tokenize("every city"), world());
  EXPECT_EQ(pq.segments[1].indicator, Indicator::table);
  EXPECT_EQ(pq.segments[1].ordinal, 1u);
}

TEST(Segment, PartitionOnFixture) {
  for (const Example& ex : fixture_corpus()) expect_partition(segment_question(tokenize(ex.question), fixture_schema(ex.db_id)));
}

TEST(Enhance, Names) {
  const auto names = enhance_column_names(world());
  ASSERT_EQ(names.size(), world().columns.size());
  EXPECT_EQ(names[0], "*");
  EXPECT_EQ(names[6], "country population");
  EXPECT_EQ(names[17], "countrylanguage language");
}

TEST(Annotate, SpanishCell) {
  Database db = fixture_db("world");
  const auto base = segment_question(tokenize("List of countries where Spanish is an official language."), world());
  const auto pq = annotate_cell_matches(base, db, world());
  EXPECT_EQ(pq.tokens, base.tokens);
  EXPECT_EQ(pq.segments, base.segments);
  ASSERT_EQ(pq.annotations.size(), 1u);
  EXPECT_EQ(pq.annotations[0], (Annotation{4, 17, "countrylanguage language"}));
}

TEST(Annotate, MultiTokenAndTwoColumns) {
  Database db = fixture_db("world");
  const auto pq = annotate_cell_matches(segment_question(tokenize("Which district is Madrid in, near New York?"), world()),
                                        db, world());
  // "madrid" is both a city name and a district; "new york" likewise.
  ASSERT_EQ(pq.annotations.size(), 4u);
  EXPECT_EQ(pq.annotations[0], (Annotation{3, 12, "city name"}));
  EXPECT_EQ(pq.annotations[1], (Annotation{3, 14, "city district"}));
  EXPECT_EQ(pq.annotations[2], (Annotation{6, 12, "city name"}));
  EXPECT_EQ(pq.annotations[3], (Annotation{6, 14, "city district"}));
}

TEST(Annotate, NoMatches) {
  Database db = fixture_db("world");
  const auto pq = annotate_cell_matches(segment_question(tokenize("hello there"), world()), db, world());
  EXPECT_TRUE(pq.annotations.empty());
}

TEST(Labels, SimpleAndNested) {
  const auto simple = derive_column_labels(sql::parse_sql("SELECT name FROM country", world()), world());
  std::vector<int> expected(world().columns.size(), 0);
  expected[2] = 1;
  EXPECT_EQ(simple.labels, expected);

  const auto nested = derive_column_labels(
      sql::parse_sql("SELECT name FROM country WHERE code NOT IN (SELECT country_code FROM countrylanguage)", world()),
      world());
  EXPECT_EQ(nested.labels[16], 1);
  EXPECT_EQ(nested.labels[0], 0);
}

TEST(Labels, StringScanOracleOnFixture) {
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    const auto q = sql::parse_sql(ex.gold_sql, schema);
    const auto oracle = sqlfill::testing::scan_labels(q, schema);
    EXPECT_EQ(derive_column_labels(q, schema).labels, oracle) << ex.gold_sql;
    EXPECT_EQ(derive_column_labels(sql::mask_values(q), schema).labels, oracle);
  }
}

TEST(Export, RecordFields) {
  const auto pq = segment_question(tokenize("every city"), world());
  const auto rec = preprocess_record("world", pq, enhance_column_names(world()), std::nullopt);
  EXPECT_EQ(rec["db_id"], "world");
  EXPECT_EQ(rec["tokens"].size(), 2u);
  EXPECT_EQ(rec["segments"][1]["indicator"], "table");
  EXPECT_EQ(rec["enhanced_columns"].size(), world().columns.size());
  EXPECT_TRUE(rec.contains("annotations"));
}
