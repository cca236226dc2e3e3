#include <gtest/gtest.h>

#include "fixture.hpp"
#include "sqlfill/database.hpp"
#include "sqlfill/errors.hpp"
#include "sqlfill/sql_model.hpp"

using namespace sqlfill;
using namespace sqlfill::sql;
using sqlfill::testing::fixture_corpus;
using sqlfill::testing::fixture_schema;

namespace {

const DbSchema& world() { return fixture_schema("world"); }

ErrorKind parse_error_kind(std::string_view text, const DbSchema& schema) {
  try {
    parse_sql(text, schema);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

}  // namespace

TEST(SqlModel, ResolvesAliases) {
  const SqlQuery q = parse_sql(
      "SELECT T1.name FROM country AS T1 JOIN countrylanguage AS T2 ON T1.code = T2.country_code "
      "WHERE T2.language = 'Spanish'",
      world());
  ASSERT_EQ(q.from.size(), 2u);
  EXPECT_EQ(q.select[0].expr.left.col.column, 2u);
  const Condition& c = q.where.conditions[0];
  EXPECT_EQ(c.left->left.col.column, 17u);
  EXPECT_EQ(std::get<ValueSlot>(*c.right), ValueSlot::string("Spanish"));
}

TEST(SqlModel, CaseInsensitiveKeywordsAndNames) {
  const SqlQuery a = parse_sql("select NAME from Country where Continent = 'Asia'", world());
  const SqlQuery b = parse_sql("SELECT name FROM country WHERE continent = 'Asia'", world());
  EXPECT_EQ(a, b);
}

TEST(SqlModel, UnknownNamesAreBindingErrors) {
  EXPECT_EQ(parse_error_kind("SELECT name FROM planet", world()), ErrorKind::binding);
  EXPECT_EQ(parse_error_kind("SELECT colour FROM country", world()), ErrorKind::binding);
  EXPECT_EQ(parse_error_kind("SELECT T9.name FROM country AS T1", world()), ErrorKind::binding);
}

TEST(SqlModel, UnsupportedSyntaxIsGrammarError) {
  EXPECT_EQ(parse_error_kind("SELECT name FROM country LEFT JOIN city", world()), ErrorKind::grammar);
  EXPECT_EQ(parse_error_kind("SELECT name FROM country WHERE", world()), ErrorKind::grammar);
  EXPECT_EQ(parse_error_kind("SELECT name FROM country UNION ALL SELECT name FROM city", world()),
            ErrorKind::grammar);
}

TEST(SqlModel, QuotesAreDoubledOnPrint) {
  const SqlQuery q = parse_sql("SELECT name FROM country WHERE government_form = 'People''s Republic'", world());
  EXPECT_EQ(std::get<ValueSlot>(*q.where.conditions[0].right).payload, "People's Republic");
  const std::string printed = print_sql(q, world());
  EXPECT_NE(printed.find("'People''s Republic'"), std::string::npos);
  EXPECT_EQ(parse_sql(printed, world()), q);

  const SqlQuery obrien = parse_sql("SELECT name FROM city WHERE name = \"O'Brien\"", world());
  EXPECT_NE(print_sql(obrien, world()).find("'O''Brien'"), std::string::npos);
}

TEST(SqlModel, PrintParseFixpointOnFixture) {
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    const SqlQuery q = parse_sql(ex.gold_sql, schema);
    const std::string printed = print_sql(q, schema);
    const SqlQuery again = parse_sql(printed, schema);
    EXPECT_EQ(again, q) << ex.gold_sql << "\n" << printed;
    EXPECT_EQ(print_sql(again, schema), printed);
    const SqlQuery qualified = parse_sql(print_sql(q, schema, PrintStyle::qualified), schema);
    EXPECT_EQ(qualified, q) << print_sql(q, schema, PrintStyle::qualified);
  }
}

TEST(SqlModel, MaskingIsIdempotentAndKeepsShape) {
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    const SqlQuery q = parse_sql(ex.gold_sql, schema);
    const SqlQuery m = mask_values(q);
    EXPECT_EQ(mask_values(m), m);
    EXPECT_EQ(collect_all_slots(q, schema).size(), collect_value_slots(m, schema).size());
    for (const SlotInfo& s : collect_all_slots(m, schema)) EXPECT_TRUE(s.value.is_mask());
    EXPECT_EQ(parse_sql(print_sql(m, schema), schema), m);
  }
}

TEST(SqlModel, SlotOrderFollowsTraversal) {
  const SqlQuery q = parse_sql(
      "SELECT T1.name FROM country AS T1 JOIN countrylanguage AS T2 ON T1.code = T2.country_code "
      "WHERE T2.language = 'Spanish' AND T1.population > (SELECT avg(population) FROM country "
      "WHERE continent = 'Europe') ORDER BY T1.name LIMIT 2",
      world());
  const auto slots = collect_all_slots(q, world());
  ASSERT_EQ(slots.size(), 3u);
  EXPECT_EQ(slots[0].value.payload, "Spanish");
  EXPECT_EQ(slots[0].context.column, 17u);
  EXPECT_EQ(slots[1].value.payload, "Europe");
  EXPECT_EQ(slots[1].context.column, 3u);
  EXPECT_EQ(slots[2].context.kind, SlotContext::Kind::limit);
  for (std::size_t i = 0; i < slots.size(); ++i) EXPECT_EQ(slots[i].slot_id, i);
}

TEST(SqlModel, SlotContextsForNumbers) {
  const SqlQuery q = parse_sql(
      "SELECT name FROM city WHERE population BETWEEN 1 AND 2 AND name = 'x' GROUP BY name "
      "HAVING count(*) > 3",
      world());
  const auto slots = collect_all_slots(q, world());
  ASSERT_EQ(slots.size(), 4u);
  EXPECT_TRUE(slots[0].context.wants_number());
  EXPECT_TRUE(slots[1].context.wants_number());
  EXPECT_FALSE(slots[2].context.wants_number());
  EXPECT_TRUE(slots[3].context.wants_number());
}

TEST(SqlModel, SetSlotReplacesValue) {
  SqlQuery q = mask_values(parse_sql("SELECT name FROM country WHERE continent = 'Asia' LIMIT 3", world()));
  EXPECT_TRUE(set_slot(q, 1, ValueSlot::number("5")));
  EXPECT_TRUE(set_slot(q, 0, ValueSlot::string("Europe")));
  EXPECT_FALSE(set_slot(q, 7, ValueSlot::number("1")));
  EXPECT_EQ(print_sql(q, world()), "SELECT name FROM country WHERE continent = 'Europe' LIMIT 5");
}

TEST(SqlModel, ParsesMaskToken) {
  const SqlQuery q = parse_sql("SELECT name FROM country WHERE continent = <mask> LIMIT <mask>", world());
  EXPECT_EQ(collect_value_slots(q, world()).size(), 2u);
}

TEST(SqlModel, ExecutablePrintRunsOnDatabase) {
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    Database db = sqlfill::testing::fixture_db(ex.db_id);
    const std::string printed = print_sql(parse_sql(ex.gold_sql, schema), schema);
    EXPECT_NO_THROW(db.query(printed)) << printed;
  }
}

TEST(SqlModel, ReferencedColumnsIncludeNested) {
  const SqlQuery q = parse_sql(
      "SELECT name FROM country WHERE code NOT IN (SELECT country_code FROM countrylanguage WHERE "
      "language = 'English')",
      world());
  EXPECT_EQ(referenced_columns(q), (std::vector<std::size_t>{1, 2, 16, 17}));
}
