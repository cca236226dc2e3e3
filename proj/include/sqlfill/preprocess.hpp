#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlfill/corpus.hpp"
#include "sqlfill/database.hpp"
#include "sqlfill/sql_model.hpp"

namespace sqlfill {

enum class Indicator { none, column, table };

const char* to_string(Indicator indicator);

struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  Indicator indicator = Indicator::none;
  std::optional<std::size_t> ordinal;  // column or table ordinal for indicated segments

  bool operator==(const Segment&) const = default;
};

/// Column name inserted before `position` when a question span equals one of
/// the column's cells.
struct Annotation {
  std::size_t position = 0;
  std::size_t column = 0;
  std::string name;  // enhanced column name, e.g. "countrylanguage language"

  bool operator==(const Annotation&) const = default;
};

struct PreprocessedQuestion {
  std::vector<std::string> tokens;
  std::vector<Segment> segments;
  std::vector<Annotation> annotations;

  bool operator==(const PreprocessedQuestion&) const = default;
};

struct ColumnLabelSet {
  std::string db_id;
  std::vector<int> labels;  // aligned with DbSchema::columns; labels[0] (`*`) is always 0

  bool operator==(const ColumnLabelSet&) const = default;
};

/// Lowercases and splits on whitespace and punctuation. Double-quoted spans
/// stay one token without the quotes; a '.' between digits stays inside the
/// number.
std::vector<std::string> tokenize(std::string_view question);

/// Longest match first (up to kMaxNgram tokens), left to right, against table
/// and column display names. At equal length a column beats a table.
PreprocessedQuestion segment_question(const std::vector<std::string>& tokens, const DbSchema& schema);

inline constexpr std::size_t kMaxNgram = 6;

/// "<table> <column>" for each real column, "*" for column 0.
std::vector<std::string> enhance_column_names(const DbSchema& schema);

/// Adds an annotation for every maximal question span equal to a full cell of
/// a text column. Tokens and segments are left untouched.
PreprocessedQuestion annotate_cell_matches(PreprocessedQuestion pq, const Database& db, const DbSchema& schema);

ColumnLabelSet derive_column_labels(const sql::SqlQuery& gold, const DbSchema& schema);

/// One JSON-lines record of the model-input export.
nlohmann::json preprocess_record(const std::string& db_id, const PreprocessedQuestion& pq,
                                 const std::vector<std::string>& enhanced_columns,
                                 const std::optional<ColumnLabelSet>& labels);

/// Joins tokens [first, last) with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first, std::size_t last);

}  // namespace sqlfill
