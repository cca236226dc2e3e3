#include "sqlfill/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

namespace sqlfill {

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string collapse_lower(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

const char* to_string(Indicator indicator) {
  switch (indicator) {
    case Indicator::none: return "none";
    case Indicator::column: return "column";
    case Indicator::table: return "table";
  }
  return "none";
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view question) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  const std::size_t n = question.size();
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char c = static_cast<unsigned char>(question[i]);
    if (c == '"') {
      flush();
      const auto close = question.find('"', i + 1);
      const auto stop = close == std::string_view::npos ? n : close;
      std::string span = collapse_lower(question.substr(i + 1, stop - i - 1));
      if (!span.empty()) tokens.push_back(std::move(span));
      i = stop;
      continue;
    }
    if (is_token_char(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    const bool decimal_point = c == '.' && !current.empty() &&
                               std::isdigit(static_cast<unsigned char>(current.back())) && i + 1 < n &&
                               std::isdigit(static_cast<unsigned char>(question[i + 1]));
    if (decimal_point) {
      current.push_back('.');
      continue;
    }
    flush();
  }
  flush();
  return tokens;
}

PreprocessedQuestion segment_question(const std::vector<std::string>& tokens, const DbSchema& schema) {
  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t c = 1; c < schema.columns.size(); ++c) columns.try_emplace(schema.columns[c].display_name, c);
  std::unordered_map<std::string, std::size_t> tables;
  for (std::size_t t = 0; t < schema.tables.size(); ++t) tables.try_emplace(schema.tables[t].display_name, t);

  PreprocessedQuestion pq;
  pq.tokens = tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    for (std::size_t len = std::min(kMaxNgram, tokens.size() - i); len >= 1 && !matched; --len) {
      const std::string key = join_tokens(tokens, i, i + len);
      if (auto it = columns.find(key); it != columns.end()) {
        pq.segments.push_back({i, i + len - 1, Indicator::column, it->second});
      } else if (auto jt = tables.find(key); jt != tables.end()) {
        pq.segments.push_back({i, i + len - 1, Indicator::table, jt->second});
      } else {
        continue;
      }
      matched = true;
      i += len;
    }
    if (!matched) {
      pq.segments.push_back({i, i, Indicator::none, std::nullopt});
      ++i;
    }
  }
  return pq;
}

std::vector<std::string> enhance_column_names(const DbSchema& schema) {
  std::vector<std::string> out;
  out.reserve(schema.columns.size());
  for (const auto& col : schema.columns) {
    if (col.is_star()) {
      out.emplace_back("*");
    } else {
      out.push_back(schema.tables[*col.table_index].display_name + " " + col.display_name);
    }
  }
  return out;
}

PreprocessedQuestion annotate_cell_matches(PreprocessedQuestion pq, const Database& db, const DbSchema& schema) {
  // normalized cell text -> columns holding it, in ordinal order
  std::map<std::string, std::set<std::size_t>> cells;
  std::size_t longest = 0;
  for (std::size_t c : schema.text_columns()) {
    const auto& col = schema.columns[c];
    const auto& table = schema.tables[*col.table_index];
    const std::string sql = "SELECT DISTINCT " + quote_identifier(col.raw_name) + " FROM " +
                            quote_identifier(table.raw_name) + " WHERE " + quote_identifier(col.raw_name) +
                            " IS NOT NULL";
    for (const auto& row : db.query(sql).rows) {
      const auto words = tokenize(cell_to_text(row[0]));
      if (words.empty()) continue;
      longest = std::max(longest, words.size());
      cells[join_tokens(words, 0, words.size())].insert(c);
    }
  }
  if (cells.empty()) return pq;

  const auto enhanced = enhance_column_names(schema);
  const auto& tokens = pq.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t advance_by = 1;
    for (std::size_t len = std::min(longest, tokens.size() - i); len >= 1; --len) {
      auto it = cells.find(join_tokens(tokens, i, i + len));
      if (it == cells.end()) continue;
      for (std::size_t c : it->second) pq.annotations.push_back({i, c, enhanced[c]});
      advance_by = len;
      break;
    }
    i += advance_by;
  }
  return pq;
}

ColumnLabelSet derive_column_labels(const sql::SqlQuery& gold, const DbSchema& schema) {
  ColumnLabelSet out{schema.db_id, std::vector<int>(schema.columns.size(), 0)};
  for (std::size_t c : sql::referenced_columns(gold))
    if (c != 0 && c < out.labels.size()) out.labels[c] = 1;
  return out;
}

nlohmann::json preprocess_record(const std::string& db_id, const PreprocessedQuestion& pq,
                                 const std::vector<std::string>& enhanced_columns,
                                 const std::optional<ColumnLabelSet>& labels) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& seg : pq.segments) {
    segments.push_back({{"start", seg.start},
                        {"end", seg.end},
                        {"indicator", to_string(seg.indicator)},
                        {"ordinal", seg.ordinal ? nlohmann::json(*seg.ordinal) : nlohmann::json(nullptr)}});
  }
  nlohmann::json annotations = nlohmann::json::array();
  for (const auto& a : pq.annotations)
    annotations.push_back({{"position", a.position}, {"column", a.column}, {"name", a.name}});
  nlohmann::json record;
  record["db_id"] = db_id;
  record["tokens"] = pq.tokens;
  record["segments"] = segments;
  record["enhanced_columns"] = enhanced_columns;
  record["annotations"] = annotations;
  record["column_labels"] = labels ? nlohmann::json(labels->labels) : nlohmann::json(nullptr);
  return record;
}

}  // namespace sqlfill
