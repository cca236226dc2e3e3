#pragma once

// Independent reference computations used by unit and acceptance tests.

#include <cctype>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "sqlfill/database.hpp"
#include "sqlfill/sql_model.hpp"
#include "sqlfill/value_filler.hpp"

namespace sqlfill::testing {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Every cell of every text column tested in memory against the four patterns.
inline std::vector<CellCandidate> brute_force_candidates(const std::string& token, const Database& db,
                                                         const DbSchema& schema) {
  std::set<CellCandidate> found;
  const std::string tok = lower(token);
  for (std::size_t col : schema.text_columns()) {
    const std::size_t table = *schema.columns[col].table_index;
    const ResultSet rs = db.query("SELECT " + quote_identifier(schema.columns[col].raw_name) + " FROM " +
                                  quote_identifier(schema.tables[table].raw_name));
    for (const Row& row : rs.rows) {
      if (!std::holds_alternative<std::string>(row[0])) continue;
      const std::string& cell = std::get<std::string>(row[0]);
      const std::string c = lower(cell);
      const bool hit = c == tok || c.starts_with(tok + " ") || c.ends_with(" " + tok) ||
                       c.find(" " + tok + " ") != std::string::npos;
      if (hit) found.insert({table, col, cell});
    }
  }
  return {found.begin(), found.end()};
}

/// Column labels recovered by scanning the qualified print for table.column tokens.
inline std::vector<int> scan_labels(const sql::SqlQuery& q, const DbSchema& schema) {
  static const std::regex ref(R"(([A-Za-z_][A-Za-z0-9_]*)\.([A-Za-z_][A-Za-z0-9_]*))");
  const std::string text = sql::print_sql(q, schema, sql::PrintStyle::qualified);
  std::vector<int> labels(schema.columns.size(), 0);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ref); it != std::sregex_iterator(); ++it) {
    const auto table = schema.find_table((*it)[1].str());
    if (!table) continue;
    if (const auto col = schema.find_column(*table, (*it)[2].str())) labels[*col] = 1;
  }
  return labels;
}

/// Replaces every literal by a fresh one of the same kind.
inline sql::SqlQuery rewrite_literals(const sql::SqlQuery& q, const DbSchema& schema) {
  sql::SqlQuery out = q;
  for (const auto& slot : sql::collect_all_slots(q, schema)) {
    const auto fresh = slot.value.kind == sql::ValueSlot::Kind::number_literal
                           ? sql::ValueSlot::number(std::to_string(7919 + slot.slot_id))
                           : sql::ValueSlot::string("fresh value " + std::to_string(slot.slot_id));
    sql::set_slot(out, slot.slot_id, fresh);
  }
  return out;
}

}  // namespace sqlfill::testing
