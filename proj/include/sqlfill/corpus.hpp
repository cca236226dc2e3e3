#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sqlfill {

enum class ColumnType { text, number, time, boolean, other };

const char* to_string(ColumnType type);
ColumnType column_type_from_string(std::string_view name);

/// Lowercase, underscores to spaces, whitespace runs collapsed, trimmed.
std::string normalize_name(std::string_view raw);

struct ColumnDef {
  /// Ordinal into DbSchema::tables; empty for the `*` pseudo-column.
  std::optional<std::size_t> table_index;
  std::string raw_name;
  std::string display_name;
  ColumnType col_type = ColumnType::text;

  bool is_star() const { return !table_index.has_value(); }
  bool operator==(const ColumnDef&) const = default;
};

struct TableDef {
  std::string raw_name;
  std::string display_name;
  std::vector<std::size_t> column_indices;

  bool operator==(const TableDef&) const = default;
};

struct DbSchema {
  std::string db_id;
  std::vector<TableDef> tables;
  std::vector<ColumnDef> columns;  // columns[0] is `*`
  std::vector<std::size_t> primary_keys;
  std::vector<std::pair<std::size_t, std::size_t>> foreign_keys;

  bool operator==(const DbSchema&) const = default;

  std::optional<std::size_t> find_table(std::string_view raw_name) const;
  std::optional<std::size_t> find_column(std::size_t table, std::string_view raw_name) const;
  /// Ordinals of non-star text columns, in schema order.
  std::vector<std::size_t> text_columns() const;
};

using SchemaMap = std::map<std::string, DbSchema, std::less<>>;

/// Parses a Spider `tables.json` document and validates every schema.
SchemaMap parse_schemas(const nlohmann::json& doc);
SchemaMap load_schemas(const std::filesystem::path& path);

/// Inverse of parse_schemas; emits the `_original` fields plus normalized names.
nlohmann::json serialize_schemas(const SchemaMap& schemas);
nlohmann::json serialize_schema(const DbSchema& schema);

/// Throws validation error naming the db_id on the first broken invariant.
void validate_schema(const DbSchema& schema);

struct Example {
  std::string question;
  std::string gold_sql;
  std::string db_id;

  bool operator==(const Example&) const = default;
};

std::vector<Example> parse_examples(const nlohmann::json& doc, const SchemaMap& schemas);
std::vector<Example> load_examples(const std::filesystem::path& path, const SchemaMap& schemas);

/// Reads a whole JSON file, raising a format error on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Reads a JSON-lines file: one object per non-empty line.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

}  // namespace sqlfill
