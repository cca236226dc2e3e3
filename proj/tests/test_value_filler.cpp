#include <gtest/gtest.h>

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "fixture.hpp"
#include "oracles.hpp"
#include "sqlfill/errors.hpp"
#include "sqlfill/value_filler.hpp"

using namespace sqlfill;
using sqlfill::testing::fixture_corpus;
using sqlfill::testing::fixture_db;
using sqlfill::testing::fixture_db_root;
using sqlfill::testing::fixture_schema;
using sqlfill::testing::fixture_schemas;
using sqlfill::testing::brute_force_candidates;

namespace {

const DbSchema& world() { return fixture_schema("world"); }

PreprocessedQuestion question(const std::string& text, const DbSchema& schema) {
  return segment_question(tokenize(text), schema);
}

std::vector<std::string> number_texts(const std::vector<NumberCandidate>& ns) {
  std::vector<std::string> out;
  for (const auto& n : ns) out.push_back(n.text);
  return out;
}

// Scratch database with wildcard characters in its cells.
struct ScratchDb {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "sqlfill_scratch";
  DbSchema schema;

  ScratchDb() {
    std::filesystem::create_directories(dir / "scratch");
    const auto path = database_path(dir, "scratch");
    std::filesystem::remove(path);
    sqlite3* db = nullptr;
    sqlite3_open(path.c_str(), &db);
    sqlite3_exec(db,
                 "CREATE TABLE deal (label TEXT);"
                 "INSERT INTO deal VALUES ('100% cotton'), ('100 percent'), ('1000 units'), ('save 100%'),"
                 "('a_b c'), ('axb c'), ('back\\slash x');",
                 nullptr, nullptr, nullptr);
    sqlite3_close(db);
    schema.db_id = "scratch";
    schema.columns.push_back({std::nullopt, "*", "*", ColumnType::text});
    schema.columns.push_back({0, "label", "label", ColumnType::text});
    schema.tables.push_back({"deal", "deal", {1}});
  }
  ~ScratchDb() { std::filesystem::remove_all(dir); }
};

}  // namespace

TEST(Retrieval, EscapesWildcards) {
  EXPECT_EQ(escape_like("100%"), "100\\%");
  EXPECT_EQ(escape_like("a_b"), "a\\_b");
  EXPECT_EQ(escape_like("x\\y"), "x\\\\y");
}

TEST(Retrieval, PercentTokenMatchesLiterally) {
  ScratchDb scratch;
  Database db(database_path(scratch.dir, "scratch"));
  const auto got = retrieve_cell_candidates("100%", db, scratch.schema);
  std::vector<std::string> values;
  for (const auto& c : got) values.push_back(c.value);
  EXPECT_EQ(values, (std::vector<std::string>{"100% cotton", "save 100%"}));
  EXPECT_EQ(retrieve_cell_candidates("a_b", db, scratch.schema).size(), 1u);
  EXPECT_EQ(retrieve_cell_candidates("back\\slash", db, scratch.schema).size(), 1u);
  for (const std::string tok : {"100%", "a_b", "100", "c", "back\\slash"})
    EXPECT_EQ(retrieve_cell_candidates(tok, db, scratch.schema), brute_force_candidates(tok, db, scratch.schema));
}

TEST(Retrieval, SpanishAndMissing) {
  Database db = fixture_db("world");
  const auto got = retrieve_cell_candidates("spanish", db, world());
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], (CellCandidate{2, 17, "Spanish"}));
  EXPECT_TRUE(retrieve_cell_candidates("zzzz", db, world()).empty());
}

TEST(Retrieval, MatchesBruteForceOnFixtureTokens) {
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    Database db = fixture_db(ex.db_id);
    for (const std::string& tok : tokenize(ex.question))
      EXPECT_EQ(retrieve_cell_candidates(tok, db, schema), brute_force_candidates(tok, db, schema)) << tok;
  }
}

TEST(Numbers, Extraction) {
  EXPECT_EQ(number_texts(extract_numbers(question("more than 3 students", world()))), (std::vector<std::string>{"3"}));
  EXPECT_EQ(number_texts(extract_numbers(question("top five oldest", world()))), (std::vector<std::string>{"5"}));
  EXPECT_EQ(number_texts(extract_numbers(question("between 10 and 20", world()))),
            (std::vector<std::string>{"10", "20"}));
  EXPECT_EQ(number_texts(extract_numbers(question("above 75.5", world()))), (std::vector<std::string>{"75.5"}));
  EXPECT_TRUE(extract_numbers(question("no numbers here", world())).empty());
}

TEST(Candidates, SpanishProjection) {
  Database db = fixture_db("world");
  const auto cands =
      build_candidates(question("List of countries where Spanish is an official language.", world()), &db, world());
  ASSERT_EQ(cands.projection.size(), 1u);
  const auto& queue = cands.projection.at({2, 17});
  ASSERT_EQ(queue.size(), 1u);
  EXPECT_EQ(queue[0].value, "Spanish");
  EXPECT_TRUE(cands.numbers.empty());
}

TEST(Candidates, UsaIsNotUnitedStates) {
  Database db = fixture_db("world");
  const auto cands = build_candidates(question("Which cities are in the usa?", world()), &db, world());
  EXPECT_FALSE(cands.projection.contains({0, 2}));
  // The code columns do hold "USA" verbatim.
  ASSERT_TRUE(cands.projection.contains({0, 1}));
  EXPECT_EQ(cands.projection.at({0, 1})[0].value, "USA");
}

TEST(Candidates, WithoutDatabaseOnlyNumbers) {
  const auto cands = build_candidates(question("top 3 countries in Europe", world()), nullptr, world());
  EXPECT_TRUE(cands.projection.empty());
  EXPECT_EQ(number_texts(cands.numbers), (std::vector<std::string>{"3"}));
}

TEST(Fill, SpanishOfficialLanguage) {
  Database db = fixture_db("world");
  const auto masked = sql::mask_values(sql::parse_sql(
      "SELECT T1.name FROM country AS T1 JOIN countrylanguage AS T2 ON T1.code = T2.country_code "
      "WHERE T2.language = 'Spanish' AND T2.is_official = 1",
      world()));
  const auto cands =
      build_candidates(question("List of countries where Spanish is an official language.", world()), &db, world());
  const FillResult r = fill_heuristic(masked, cands, world());
  ASSERT_EQ(r.fills.size(), 2u);
  EXPECT_EQ(r.fills[0], (SlotFill{0, FillSource::projection, "Spanish"}));
  EXPECT_EQ(r.fills[1], (SlotFill{1, FillSource::default_one, "1"}));
  EXPECT_NE(r.sql.find("'Spanish'"), std::string::npos);
  EXPECT_EQ(r.sql.find("<mask>"), std::string::npos);
}

TEST(Fill, NumberRules) {
  CandidateSet cands;
  cands.numbers.push_back({"3", 3.0, 0});
  const auto masked = sql::mask_values(sql::parse_sql(
      "SELECT name FROM country WHERE population > 1 AND gnp > 2 LIMIT 5", world()));
  const FillResult r = fill_heuristic(masked, cands, world());
  ASSERT_EQ(r.fills.size(), 3u);
  EXPECT_EQ(r.fills[0], (SlotFill{0, FillSource::number, "3"}));
  EXPECT_EQ(r.fills[1], (SlotFill{1, FillSource::default_one, "1"}));
  EXPECT_EQ(r.fills[2], (SlotFill{2, FillSource::default_one, "1"}));
}

TEST(Fill, PlaceholderWithoutProjection) {
  const auto masked = sql::mask_values(sql::parse_sql("SELECT count(*) FROM city WHERE name = 'x'", world()));
  const FillResult r = fill_heuristic(masked, CandidateSet{}, world());
  ASSERT_EQ(r.fills.size(), 1u);
  EXPECT_EQ(r.fills[0].source, FillSource::placeholder);
  EXPECT_EQ(r.fills[0].value, "value");
  EXPECT_NE(r.sql.find("'value'"), std::string::npos);
}

TEST(Fill, QueueConsumedInOrder) {
  CandidateSet cands;
  cands.projection[{0, 2}] = {{"France", 0}, {"Canada", 1}};
  const auto masked = sql::mask_values(
      sql::parse_sql("SELECT code FROM country WHERE name = 'a' OR name = 'b' OR name = 'c'", world()));
  const FillResult r = fill_heuristic(masked, cands, world());
  ASSERT_EQ(r.fills.size(), 3u);
  EXPECT_EQ(r.fills[0].value, "France");
  EXPECT_EQ(r.fills[1].value, "Canada");
  EXPECT_EQ(r.fills[2].source, FillSource::placeholder);
}

TEST(Fill, UnresolvedContextRaises) {
  sql::SqlQuery q = sql::parse_sql("SELECT name FROM country WHERE name = 'x'", world());
  q = sql::mask_values(q);
  // Point the condition at a column the schema does not have.
  q.where.conditions[0].left->left.col = sql::ColumnRef{99, 0};
  try {
    fill_heuristic(q, CandidateSet{}, world());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::context);
  }
}

TEST(Fill, StopwordSkipMatchesNoSkipOracle) {
  const FillerOptions skip{85.0, true};
  const FillerOptions no_skip{85.0, false};
  for (const Example& ex : fixture_corpus()) {
    const DbSchema& schema = fixture_schema(ex.db_id);
    Database db = fixture_db(ex.db_id);
    const auto pq = question(ex.question, schema);
    const auto masked = sql::mask_values(sql::parse_sql(ex.gold_sql, schema));
    const auto a = fill_heuristic(masked, build_candidates(pq, &db, schema, skip), schema);
    const auto b = fill_heuristic(masked, build_candidates(pq, &db, schema, no_skip), schema);
    EXPECT_EQ(a.sql, b.sql) << ex.question;
  }
}

TEST(Export, FillerExamples) {
  Database db = fixture_db("world");
  const Example ex{"List of countries where Spanish is an official language.",
                   "SELECT T1.name FROM country AS T1 JOIN countrylanguage AS T2 ON T1.code = T2.country_code "
                   "WHERE T2.language = 'Spanish' AND T2.is_official = 1",
                   "world"};
  const auto gold = sql::parse_sql(ex.gold_sql, world());
  const auto cands = build_candidates(question(ex.question, world()), &db, world());
  const FillerExample fe = make_filler_example(ex, gold, cands, world());
  ASSERT_EQ(fe.candidates.size(), 1u);
  EXPECT_EQ(fe.candidates[0], (FillerCandidate{"Spanish", "countrylanguage.language"}));
  ASSERT_EQ(fe.slots.size(), 2u);
  EXPECT_EQ(fe.slots[0].gold_index, 0u);
  EXPECT_EQ(fe.slots[0].context, "countrylanguage.language");
  EXPECT_FALSE(fe.slots[1].gold_index.has_value());
  EXPECT_NE(fe.masked_sql.find("<mask>"), std::string::npos);
}

TEST(Export, FemaleHasNoGoldIndex) {
  const DbSchema& school = fixture_schema("school");
  Database db = fixture_db("school");
  const Example ex{"How many female students are there?", "SELECT count(*) FROM student WHERE sex = 'F'", "school"};
  const auto cands = build_candidates(question(ex.question, school), &db, school);
  const FillerExample fe = make_filler_example(ex, sql::parse_sql(ex.gold_sql, school), cands, school);
  ASSERT_EQ(fe.slots.size(), 1u);
  EXPECT_FALSE(fe.slots[0].gold_index.has_value());
  EXPECT_EQ(fe.slots[0].gold_value, "F");
}

TEST(Export, CorpusSerialVsParallel) {
  std::ostringstream serial, parallel;
  const auto a = export_filler_examples(fixture_corpus(), fixture_schemas(), fixture_db_root(), {}, serial, 1);
  const auto b = export_filler_examples(fixture_corpus(), fixture_schemas(), fixture_db_root(), {}, parallel, 3);
  EXPECT_EQ(a.written, fixture_corpus().size());
  EXPECT_EQ(a.skipped, 0u);
  EXPECT_EQ(b.written, a.written);
  EXPECT_EQ(serial.str(), parallel.str());
}
