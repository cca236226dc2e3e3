#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqlfill/database.hpp"

namespace sqlfill {

/// Lazily opened database handles for one worker thread.
class DatabasePool {
 public:
  explicit DatabasePool(std::optional<std::filesystem::path> root = std::nullopt) : root_(std::move(root)) {}

  /// Null when the pool has no root or the database file is missing.
  const Database* find(const std::string& db_id);
  /// Like find, but raises an availability error instead of returning null.
  const Database& get(const std::string& db_id);

  bool has_root() const { return root_.has_value(); }

 private:
  std::optional<std::filesystem::path> root_;
  std::map<std::string, Database, std::less<>> open_;
};

/// One pool per worker, all sharing `root`.
std::vector<DatabasePool> make_pools(int jobs, const std::optional<std::filesystem::path>& root);

/// Runs body(index, worker) for index in [0, n). `jobs` <= 1 runs serially in
/// index order on the calling thread; otherwise an OpenMP team of `jobs`
/// threads shares the range, with worker in [0, jobs). The exception thrown
/// at the lowest index, if any, is rethrown after all iterations finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t, int)>& body);

}  // namespace sqlfill
