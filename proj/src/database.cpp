#include "sqlfill/database.hpp"

#include <sqlite3.h>

#include <cmath>
#include <cstdio>
#include <utility>

#include "sqlfill/errors.hpp"

namespace sqlfill {

namespace {

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool expired = false;
};

int progress_callback(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (std::chrono::steady_clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

struct StatementGuard {
  sqlite3_stmt* stmt = nullptr;
  ~StatementGuard() { sqlite3_finalize(stmt); }
};

}  // namespace

Database::Database(const std::filesystem::path& path) : path_(path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorKind::availability, "database file not found: " + path.string());
  const int rc = sqlite3_open_v2(path.c_str(), &handle_, SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX, nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = handle_ ? sqlite3_errmsg(handle_) : "out of memory";
    sqlite3_close(handle_);
    handle_ = nullptr;
    throw Error(ErrorKind::availability, "cannot open " + path.string() + ": " + msg);
  }
  sqlite3_exec(handle_, "PRAGMA query_only = 1", nullptr, nullptr, nullptr);
}

Database::~Database() {
  if (handle_) sqlite3_close(handle_);
}

Database::Database(Database&& other) noexcept
    : handle_(std::exchange(other.handle_, nullptr)), path_(std::move(other.path_)) {}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    if (handle_) sqlite3_close(handle_);
    handle_ = std::exchange(other.handle_, nullptr);
    path_ = std::move(other.path_);
  }
  return *this;
}

ResultSet Database::query(std::string_view sql, const std::vector<std::string>& params,
                          std::chrono::milliseconds timeout) const {
  if (!handle_) throw Error(ErrorKind::internal, "query on a moved-from database handle");
  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  if (timeout.count() > 0) sqlite3_progress_handler(handle_, 1000, progress_callback, &deadline);

  StatementGuard guard;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(handle_, sql.data(), static_cast<int>(sql.size()), &guard.stmt, &tail);
  auto clear_handler = [&] {
    if (timeout.count() > 0) sqlite3_progress_handler(handle_, 0, nullptr, nullptr);
  };
  if (rc != SQLITE_OK || guard.stmt == nullptr) {
    clear_handler();
    if (deadline.expired) throw QueryTimeout("query timed out");
    throw QueryError(guard.stmt == nullptr && rc == SQLITE_OK ? "empty statement" : sqlite3_errmsg(handle_));
  }
  if (!sqlite3_stmt_readonly(guard.stmt)) {
    clear_handler();
    throw QueryError("write statements are rejected on corpus databases");
  }
  for (std::size_t i = 0; i < params.size(); ++i)
    sqlite3_bind_text(guard.stmt, static_cast<int>(i + 1), params[i].data(),
                      static_cast<int>(params[i].size()), SQLITE_TRANSIENT);

  ResultSet result;
  const int ncols = sqlite3_column_count(guard.stmt);
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(guard.stmt, c);
    result.column_names.emplace_back(name ? name : "");
  }
  while ((rc = sqlite3_step(guard.stmt)) == SQLITE_ROW) {
    Row row;
    row.reserve(static_cast<std::size_t>(ncols));
    for (int c = 0; c < ncols; ++c) {
      switch (sqlite3_column_type(guard.stmt, c)) {
        case SQLITE_INTEGER: row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(guard.stmt, c))); break;
        case SQLITE_FLOAT: row.emplace_back(sqlite3_column_double(guard.stmt, c)); break;
        case SQLITE_NULL: row.emplace_back(std::monostate{}); break;
        default: {
          const auto* bytes = static_cast<const char*>(sqlite3_column_blob(guard.stmt, c));
          const int n = sqlite3_column_bytes(guard.stmt, c);
          row.emplace_back(std::string(bytes ? bytes : "", static_cast<std::size_t>(n)));
        }
      }
    }
    result.rows.push_back(std::move(row));
  }
  clear_handler();
  if (rc != SQLITE_DONE) {
    if (deadline.expired || rc == SQLITE_INTERRUPT) throw QueryTimeout("query timed out");
    throw QueryError(sqlite3_errmsg(handle_));
  }
  return result;
}

std::filesystem::path database_path(const std::filesystem::path& root, std::string_view db_id) {
  const std::string id(db_id);
  return root / id / (id + ".sqlite");
}

Database open_database(const DbSchema& schema, const std::filesystem::path& root) {
  return Database(database_path(root, schema.db_id));
}

std::string quote_identifier(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string cell_to_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      // SQLite renders REAL with %!.15g; integral values keep a trailing ".0".
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.15g", v);
      std::string s = buf;
      if (std::isfinite(v) && s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace sqlfill
