#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlfill/corpus.hpp"
#include "sqlfill/database.hpp"

namespace sqlfill::testing {

inline std::filesystem::path fixture_dir() { return SQLFILL_FIXTURE_DIR; }
inline std::filesystem::path fixture_db_root() { return SQLFILL_FIXTURE_DB_ROOT; }

inline const SchemaMap& fixture_schemas() {
  static const SchemaMap schemas = load_schemas(fixture_dir() / "tables.json");
  return schemas;
}

inline const std::vector<Example>& fixture_corpus() {
  static const std::vector<Example> corpus = load_examples(fixture_dir() / "dev.json", fixture_schemas());
  return corpus;
}

/// Hand-traced hardness label per corpus entry.
inline std::vector<std::string> fixture_hardness() {
  std::ifstream in(fixture_dir() / "dev_hardness.json");
  return nlohmann::json::parse(in).get<std::vector<std::string>>();
}

inline const DbSchema& fixture_schema(const std::string& db_id) { return fixture_schemas().at(db_id); }

inline Database fixture_db(const std::string& db_id) {
  return Database(database_path(fixture_db_root(), db_id));
}

}  // namespace sqlfill::testing
