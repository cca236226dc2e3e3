#include "sqlfill/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <vector>

#include "sqlfill/errors.hpp"

namespace sqlfill {

const Database* DatabasePool::find(const std::string& db_id) {
  if (!root_) return nullptr;
  if (auto it = open_.find(db_id); it != open_.end()) return &it->second;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(database_path(*root_, db_id), ec)) return nullptr;
  return &open_.emplace(db_id, Database(database_path(*root_, db_id))).first->second;
}

const Database& DatabasePool::get(const std::string& db_id) {
  if (!root_) throw Error(ErrorKind::availability, "no database root configured for '" + db_id + "'");
  if (const Database* db = find(db_id)) return *db;
  throw Error(ErrorKind::availability, "database file not found: " + database_path(*root_, db_id).string());
}

std::vector<DatabasePool> make_pools(int jobs, const std::optional<std::filesystem::path>& root) {
  std::vector<DatabasePool> pools;
  for (int i = 0; i < std::max(jobs, 1); ++i) pools.emplace_back(root);
  return pools;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t, int)>& body) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i), omp_get_thread_num());
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sqlfill
