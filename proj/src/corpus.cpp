#include "sqlfill/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sqlfill/errors.hpp"

namespace sqlfill {

using nlohmann::json;

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

std::string db_label(const json& entry) {
  if (entry.is_object() && entry.contains("db_id") && entry["db_id"].is_string())
    return entry["db_id"].get<std::string>();
  return "<unknown>";
}

DbSchema parse_one_schema(const json& entry) {
  const std::string label = db_label(entry);
  try {
    DbSchema schema;
    schema.db_id = entry.at("db_id").get<std::string>();
    for (const auto& name : entry.at("table_names_original")) {
      TableDef table;
      table.raw_name = name.get<std::string>();
      table.display_name = normalize_name(table.raw_name);
      schema.tables.push_back(std::move(table));
    }
    const auto& names = entry.at("column_names_original");
    const auto& types = entry.at("column_types");
    if (names.size() != types.size())
      throw Error(ErrorKind::format, "db '" + label + "': column_names_original and column_types differ in length");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& pair = names[i];
      const int table = pair.at(0).get<int>();
      ColumnDef column;
      column.raw_name = pair.at(1).get<std::string>();
      column.col_type = column_type_from_string(types[i].get<std::string>());
      if (table >= 0) {
        column.table_index = static_cast<std::size_t>(table);
        column.display_name = normalize_name(column.raw_name);
      } else {
        column.display_name = column.raw_name;
      }
      schema.columns.push_back(std::move(column));
    }
    for (const auto& key : entry.value("primary_keys", json::array())) {
      // Newer Spider releases nest composite keys as lists.
      if (key.is_array()) {
        for (const auto& part : key) schema.primary_keys.push_back(part.get<std::size_t>());
      } else {
        schema.primary_keys.push_back(key.get<std::size_t>());
      }
    }
    for (const auto& fk : entry.value("foreign_keys", json::array()))
      schema.foreign_keys.emplace_back(fk.at(0).get<std::size_t>(), fk.at(1).get<std::size_t>());
    return schema;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, "db '" + label + "': malformed schema entry: " + e.what());
  }
}

}  // namespace

const char* to_string(ColumnType type) {
  switch (type) {
    case ColumnType::text: return "text";
    case ColumnType::number: return "number";
    case ColumnType::time: return "time";
    case ColumnType::boolean: return "boolean";
    case ColumnType::other: return "others";
  }
  return "others";
}

ColumnType column_type_from_string(std::string_view name) {
  if (iequals(name, "text")) return ColumnType::text;
  if (iequals(name, "number")) return ColumnType::number;
  if (iequals(name, "time")) return ColumnType::time;
  if (iequals(name, "boolean")) return ColumnType::boolean;
  return ColumnType::other;
}

std::string normalize_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (c == '_' || std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::optional<std::size_t> DbSchema::find_table(std::string_view raw_name) const {
  for (std::size_t i = 0; i < tables.size(); ++i)
    if (iequals(tables[i].raw_name, raw_name)) return i;
  return std::nullopt;
}

std::optional<std::size_t> DbSchema::find_column(std::size_t table, std::string_view raw_name) const {
  if (table >= tables.size()) return std::nullopt;
  for (std::size_t c : tables[table].column_indices)
    if (iequals(columns[c].raw_name, raw_name)) return c;
  return std::nullopt;
}

std::vector<std::size_t> DbSchema::text_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (!columns[i].is_star() && columns[i].col_type == ColumnType::text) out.push_back(i);
  return out;
}

void validate_schema(const DbSchema& schema) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::validation, "db '" + schema.db_id + "': " + what);
  };
  if (schema.db_id.empty()) fail("empty db_id");
  if (schema.columns.empty() || !schema.columns[0].is_star() || schema.columns[0].raw_name != "*")
    fail("column 0 must be the '*' pseudo-column");
  for (std::size_t i = 1; i < schema.columns.size(); ++i) {
    const auto& col = schema.columns[i];
    if (col.is_star()) fail("column " + std::to_string(i) + " has no table");
    if (*col.table_index >= schema.tables.size())
      fail("column " + std::to_string(i) + " references table " + std::to_string(*col.table_index));
  }
  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    if (schema.tables[t].display_name.empty()) fail("table " + std::to_string(t) + " has an empty name");
    for (std::size_t c : schema.tables[t].column_indices)
      if (c >= schema.columns.size() || schema.columns[c].table_index != t)
        fail("table " + std::to_string(t) + " lists foreign column " + std::to_string(c));
  }
  for (std::size_t key : schema.primary_keys)
    if (key == 0 || key >= schema.columns.size()) fail("primary key " + std::to_string(key) + " out of range");
  for (const auto& [a, b] : schema.foreign_keys) {
    if (a == 0 || b == 0 || a >= schema.columns.size() || b >= schema.columns.size())
      fail("foreign key (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
    if (schema.columns[a].table_index == schema.columns[b].table_index)
      fail("foreign key (" + std::to_string(a) + ", " + std::to_string(b) + ") within one table");
  }
}

SchemaMap parse_schemas(const json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::format, "tables document must be a JSON array");
  SchemaMap out;
  for (const auto& entry : doc) {
    DbSchema schema = parse_one_schema(entry);
    // column_indices are derived, so dangling table ordinals surface in validation below
    for (std::size_t i = 1; i < schema.columns.size(); ++i) {
      const auto& t = schema.columns[i].table_index;
      if (t && *t < schema.tables.size()) schema.tables[*t].column_indices.push_back(i);
    }
    validate_schema(schema);
    const std::string id = schema.db_id;
    if (!out.emplace(id, std::move(schema)).second)
      throw Error(ErrorKind::validation, "db '" + id + "': duplicate db_id");
  }
  return out;
}

SchemaMap load_schemas(const std::filesystem::path& path) { return parse_schemas(read_json_file(path)); }

json serialize_schema(const DbSchema& schema) {
  json entry;
  entry["db_id"] = schema.db_id;
  json table_names = json::array(), table_names_original = json::array();
  for (const auto& t : schema.tables) {
    table_names.push_back(t.display_name);
    table_names_original.push_back(t.raw_name);
  }
  json column_names = json::array(), column_names_original = json::array(), types = json::array();
  for (const auto& c : schema.columns) {
    const int table = c.table_index ? static_cast<int>(*c.table_index) : -1;
    column_names.push_back(json::array({table, c.display_name}));
    column_names_original.push_back(json::array({table, c.raw_name}));
    types.push_back(to_string(c.col_type));
  }
  json fks = json::array();
  for (const auto& [a, b] : schema.foreign_keys) fks.push_back(json::array({a, b}));
  entry["table_names"] = table_names;
  entry["table_names_original"] = table_names_original;
  entry["column_names"] = column_names;
  entry["column_names_original"] = column_names_original;
  entry["column_types"] = types;
  entry["primary_keys"] = schema.primary_keys;
  entry["foreign_keys"] = fks;
  return entry;
}

json serialize_schemas(const SchemaMap& schemas) {
  json out = json::array();
  for (const auto& [id, schema] : schemas) out.push_back(serialize_schema(schema));
  return out;
}

std::vector<Example> parse_examples(const json& doc, const SchemaMap& schemas) {
  if (!doc.is_array()) throw Error(ErrorKind::format, "examples document must be a JSON array");
  std::vector<Example> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& record = doc[i];
    Example ex;
    try {
      ex.question = record.at("question").get<std::string>();
      ex.gold_sql = record.at("query").get<std::string>();
      ex.db_id = record.at("db_id").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::format, "example " + std::to_string(i) + ": " + e.what());
    }
    if (!schemas.contains(ex.db_id))
      throw Error(ErrorKind::validation,
                  "example " + std::to_string(i) + ": unknown database '" + ex.db_id + "'");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<Example> load_examples(const std::filesystem::path& path, const SchemaMap& schemas) {
  return parse_examples(read_json_file(path), schemas);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::availability, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::format, path.string() + ": " + e.what());
  }
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::availability, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::format, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sqlfill
