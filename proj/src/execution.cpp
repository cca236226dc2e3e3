#include <algorithm>
#include <cmath>

#include "sql_lexer.hpp"
#include "sqlfill/errors.hpp"
#include "sqlfill/evaluator.hpp"

namespace sqlfill {

namespace {

std::optional<double> numeric(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nullopt;
}

// null < number < text
int rank(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return 0;
  if (numeric(cell)) return 1;
  return 2;
}

bool cell_less(const Cell& a, const Cell& b) {
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 1) return *numeric(a) < *numeric(b);
  if (ra == 2) return std::get<std::string>(a) < std::get<std::string>(b);
  return false;
}

bool row_less(const Row& a, const Row& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), cell_less);
}

bool cell_equal(const Cell& a, const Cell& b, const ExecutionOptions& options) {
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return false;
  if (ra == 0) return true;
  if (ra == 2) return std::get<std::string>(a) == std::get<std::string>(b);
  const double x = *numeric(a), y = *numeric(b);
  if (x == y) return true;
  const double tol = std::max(options.abs_tol, options.rel_tol * std::max(std::fabs(x), std::fabs(y)));
  return std::fabs(x - y) <= tol;
}

bool rows_equal(const Row& a, const Row& b, const ExecutionOptions& options) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!cell_equal(a[i], b[i], options)) return false;
  return true;
}

}  // namespace

bool results_equal(const ResultSet& a, const ResultSet& b, bool ordered, const ExecutionOptions& options) {
  if (a.column_names.size() != b.column_names.size() || a.rows.size() != b.rows.size()) return false;
  if (ordered) {
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (!rows_equal(a.rows[i], b.rows[i], options)) return false;
    return true;
  }
  auto x = a.rows, y = b.rows;
  std::sort(x.begin(), x.end(), row_less);
  std::sort(y.begin(), y.end(), row_less);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!rows_equal(x[i], y[i], options)) return false;
  return true;
}

bool has_top_level_order_by(std::string_view sql) {
  using sql::detail::TokenKind;
  std::vector<sql::detail::Token> tokens;
  try {
    tokens = sql::detail::lex(sql);
  } catch (const Error&) {
    return false;
  }
  int depth = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == TokenKind::symbol && t.text == "(") ++depth;
    if (t.kind == TokenKind::symbol && t.text == ")") --depth;
    if (depth == 0 && sql::detail::is_keyword(t, "ORDER") && sql::detail::is_keyword(tokens[i + 1], "BY")) return true;
  }
  return false;
}

ExecutionVerdict execution_verdict(std::string_view pred_sql, std::string_view gold_sql, const Database& db,
                                   const ExecutionOptions& options) {
  ResultSet gold;
  try {
    gold = db.query(gold_sql, {}, options.timeout);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::corpus, "gold query failed on " + db.path().string() + ": " + e.what());
  }
  ExecutionVerdict verdict;
  ResultSet pred;
  try {
    pred = db.query(pred_sql, {}, options.timeout);
  } catch (const QueryTimeout&) {
    verdict.timed_out = true;
    return verdict;
  } catch (const QueryError&) {
    verdict.pred_failed = true;
    return verdict;
  }
  verdict.match = results_equal(pred, gold, has_top_level_order_by(gold_sql), options);
  return verdict;
}

bool execution_match(std::string_view pred_sql, std::string_view gold_sql, const Database& db,
                     const ExecutionOptions& options) {
  return execution_verdict(pred_sql, gold_sql, db, options).match;
}

}  // namespace sqlfill
