#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlfill/corpus.hpp"
#include "sqlfill/database.hpp"
#include "sqlfill/sql_model.hpp"

namespace sqlfill {

// ---------------------------------------------------------------------------
// Exact set match
// ---------------------------------------------------------------------------

/// Value-agnostic canonical form: every clause reduced to a sorted component
/// multiset (order-by kept as a sequence), literals collapsed to one token.
std::string canonical_form(const sql::SqlQuery& q);

/// True iff pred and gold agree on every clause component, ignoring values.
bool exact_set_match(const sql::SqlQuery& pred, const sql::SqlQuery& gold);

// ---------------------------------------------------------------------------
// Execution match
// ---------------------------------------------------------------------------

struct ExecutionOptions {
  std::chrono::milliseconds timeout{30'000};
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
};

struct ExecutionVerdict {
  bool match = false;
  bool timed_out = false;     // prediction exceeded the timeout
  bool pred_failed = false;   // prediction did not execute
};

/// Compares rows positionally by column. Ordered comparison when `ordered`,
/// otherwise as multisets.
bool results_equal(const ResultSet& a, const ResultSet& b, bool ordered, const ExecutionOptions& options = {});

/// Whether the outermost query carries an ORDER BY (outside any parentheses).
bool has_top_level_order_by(std::string_view sql);

/// Runs both queries. A failing or timed-out prediction scores false; a failing
/// gold raises ErrorKind::corpus.
ExecutionVerdict execution_verdict(std::string_view pred_sql, std::string_view gold_sql, const Database& db,
                                   const ExecutionOptions& options = {});

bool execution_match(std::string_view pred_sql, std::string_view gold_sql, const Database& db,
                     const ExecutionOptions& options = {});

// ---------------------------------------------------------------------------
// Hardness
// ---------------------------------------------------------------------------

enum class Hardness { easy, medium, hard, extra_hard };

inline constexpr std::array<Hardness, 4> kHardnessLevels = {Hardness::easy, Hardness::medium, Hardness::hard,
                                                            Hardness::extra_hard};

const char* to_string(Hardness level);
std::optional<Hardness> hardness_from_string(std::string_view name);

/// Component tallies that drive the hardness decision table (docs/hardness.md).
struct ComponentCounts {
  int component1 = 0;  // clauses, joins, OR, LIKE
  int component2 = 0;  // nested queries in conditions plus set operation
  int others = 0;      // aggregates, multi-column select, multi-condition where, multi-key group by

  bool operator==(const ComponentCounts&) const = default;
};

ComponentCounts count_components(const sql::SqlQuery& q);
Hardness hardness_from_counts(const ComponentCounts& counts);
Hardness classify_hardness(const sql::SqlQuery& gold);

// ---------------------------------------------------------------------------
// Corpus evaluation
// ---------------------------------------------------------------------------

struct Prediction {
  std::string db_id;
  std::string sql;
};

/// Reads `{db_id, sql}` JSON lines.
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

struct EvalSettings {
  bool exact = true;
  bool exec = false;
  std::optional<std::filesystem::path> db_root;  // required when exec is set
  ExecutionOptions execution;
  int jobs = 1;
};

struct Verdict {
  std::string db_id;
  Hardness hardness = Hardness::easy;
  std::optional<bool> exact_match;
  std::optional<bool> exec_match;
  bool exec_timeout = false;
  bool pred_parse_error = false;

  bool operator==(const Verdict&) const = default;
};

struct LevelStats {
  std::size_t count = 0;
  std::size_t exact_correct = 0;
  std::size_t exec_correct = 0;

  bool operator==(const LevelStats&) const = default;
};

struct EvalReport {
  bool has_exact = false;
  bool has_exec = false;
  std::vector<Verdict> verdicts;
  std::array<LevelStats, 4> levels{};
  LevelStats all;

  /// Fraction in [0, 1]; empty when the metric did not run or the level is empty.
  std::optional<double> exact_accuracy(std::optional<Hardness> level = std::nullopt) const;
  std::optional<double> exec_accuracy(std::optional<Hardness> level = std::nullopt) const;

  bool operator==(const EvalReport&) const = default;
};

/// Scores predictions[i] against corpus[i]. Raises ErrorKind::usage on a length
/// mismatch and ErrorKind::availability (listing db_ids) when execution is
/// requested but databases are missing.
EvalReport evaluate_corpus(const std::vector<Prediction>& predictions, const std::vector<Example>& corpus,
                           const SchemaMap& schemas, const EvalSettings& settings);

/// Levels x metrics table, percentages with one decimal.
std::string render_table(const EvalReport& report);

nlohmann::json to_json(const EvalReport& report);

}  // namespace sqlfill
