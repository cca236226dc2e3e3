#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlfill/corpus.hpp"
#include "sqlfill/database.hpp"
#include "sqlfill/preprocess.hpp"
#include "sqlfill/sql_model.hpp"

namespace sqlfill {

struct CellCandidate {
  std::size_t table = 0;
  std::size_t column = 0;
  std::string value;

  auto operator<=>(const CellCandidate&) const = default;
};

/// Escapes LIKE wildcards (`%`, `_`) and the escape character itself with '\'.
std::string escape_like(std::string_view token);

/// Runs, for every text column, the four-pattern LIKE lookup
/// (`tok %`, `% tok`, `% tok %`, `tok`) and returns the distinct matching cells
/// ordered by (table, column, value).
std::vector<CellCandidate> retrieve_cell_candidates(std::string_view token, const Database& db,
                                                    const DbSchema& schema);

struct QueuedValue {
  std::string value;
  std::size_t collection_index = 0;

  bool operator==(const QueuedValue&) const = default;
};

struct NumberCandidate {
  std::string text;  // canonical literal, e.g. "5" for "five"
  double value = 0.0;
  std::size_t collection_index = 0;

  bool operator==(const NumberCandidate&) const = default;
};

using ColumnKey = std::pair<std::size_t, std::size_t>;  // (table, column)

struct CandidateSet {
  std::map<ColumnKey, std::vector<QueuedValue>> projection;
  std::vector<NumberCandidate> numbers;

  bool operator==(const CandidateSet&) const = default;
};

struct FillerOptions {
  double threshold = 85.0;       // minimum similarity ratio, 0-100
  bool skip_stopwords = true;    // skip short tokens and stopwords during retrieval
};

/// True for tokens that are not sent to retrieval when stopword skipping is on.
bool is_skipped_token(std::string_view token);

std::vector<NumberCandidate> extract_numbers(const PreprocessedQuestion& pq);

/// Builds the projection and number list. A null `db` yields numbers only.
CandidateSet build_candidates(const PreprocessedQuestion& pq, const Database* db, const DbSchema& schema,
                              const FillerOptions& options = {});

enum class FillSource { projection, number, default_one, placeholder };

const char* to_string(FillSource source);

inline constexpr std::string_view kPlaceholderValue = "value";

struct SlotFill {
  std::size_t slot_id = 0;
  FillSource source = FillSource::placeholder;
  std::string value;

  bool operator==(const SlotFill&) const = default;
};

struct FillResult {
  std::string sql;
  sql::SqlQuery query;
  std::vector<SlotFill> fills;
};

/// Fills every mask slot of `masked` in slot-id order. Number contexts (and
/// LIMIT) take the next unused number, else 1. Other contexts take the next
/// unused projected value for their (table, column), else the placeholder.
FillResult fill_heuristic(const sql::SqlQuery& masked, const CandidateSet& cands, const DbSchema& schema);

struct FillerCandidate {
  std::string value;
  std::string source;  // "table.column" or "NUMBER"

  bool operator==(const FillerCandidate&) const = default;
};

struct FillerSlot {
  std::size_t slot_id = 0;
  std::string context;  // "table.column" or "LIMIT"
  std::optional<std::string> gold_value;
  std::optional<std::size_t> gold_index;
};

/// Training record for a neural filler: question, masked SQL, candidates.
struct FillerExample {
  std::string db_id;
  std::string question;
  std::string masked_sql;
  std::vector<FillerCandidate> candidates;
  std::vector<FillerSlot> slots;
};

/// Projection and number candidates merged in collection order.
std::vector<FillerCandidate> ordered_candidates(const CandidateSet& cands, const DbSchema& schema);

FillerExample make_filler_example(const Example& example, const sql::SqlQuery& gold, const CandidateSet& cands,
                                  const DbSchema& schema);

nlohmann::json to_json(const FillerExample& example);

struct ExportStats {
  std::size_t written = 0;
  std::size_t skipped = 0;  // gold SQL failed to parse
};

/// Writes one FillerExample per parseable example as JSON lines, in corpus
/// order. Without a database root (or a missing database file) candidates
/// degrade to numbers only.
ExportStats export_filler_examples(const std::vector<Example>& corpus, const SchemaMap& schemas,
                                   const std::optional<std::filesystem::path>& db_root,
                                   const FillerOptions& options, std::ostream& out, int jobs = 1);

}  // namespace sqlfill
