#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqlfill/corpus.hpp"

struct sqlite3;

namespace sqlfill {

/// One result cell. Blobs are carried as raw bytes in the string alternative.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
using Row = std::vector<Cell>;

struct ResultSet {
  std::vector<std::string> column_names;
  std::vector<Row> rows;
};

/// Raised when a query exceeds its deadline.
class QueryTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when SQLite rejects a statement (syntax error, unknown column, write attempt).
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only handle on one SQLite corpus database. Not thread-safe; each worker
/// opens its own.
class Database {
 public:
  /// Opens `path` read-only; availability error when the file is missing.
  explicit Database(const std::filesystem::path& path);
  ~Database();

  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  Database(Database&& other) noexcept;
  Database& operator=(Database&& other) noexcept;

  /// Runs one statement with positional text parameters. A zero timeout means unbounded.
  ResultSet query(std::string_view sql, const std::vector<std::string>& params = {},
                  std::chrono::milliseconds timeout = std::chrono::milliseconds{0}) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  sqlite3* handle_ = nullptr;
  std::filesystem::path path_;
};

/// `<root>/<db_id>/<db_id>.sqlite`
std::filesystem::path database_path(const std::filesystem::path& root, std::string_view db_id);

Database open_database(const DbSchema& schema, const std::filesystem::path& root);

/// Quotes an identifier for SQLite ("name" with embedded quotes doubled).
std::string quote_identifier(std::string_view name);

/// Text rendering of a cell as SQLite would CAST it; empty for NULL.
std::string cell_to_text(const Cell& cell);

}  // namespace sqlfill
