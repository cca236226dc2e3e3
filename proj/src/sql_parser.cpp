#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "sql_lexer.hpp"
#include "sqlfill/errors.hpp"
#include "sqlfill/sql_model.hpp"

namespace sqlfill::sql {

namespace {

using detail::is_keyword;
using detail::Token;
using detail::TokenKind;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_reserved(const Token& tok) {
  static const std::unordered_set<std::string> reserved = {
      "select", "from",  "where", "group",   "by",     "having",   "order", "limit", "union",
      "intersect", "except", "join", "on", "as", "and", "or", "not", "in", "like",
      "between", "exists", "distinct", "asc", "desc", "inner", "left", "right",
      "outer", "cross", "natural", "full"};
  return tok.kind == TokenKind::word && reserved.contains(lower(tok.text));
}

std::optional<Agg> agg_keyword(const Token& tok) {
  if (is_keyword(tok, "MAX")) return Agg::max;
  if (is_keyword(tok, "MIN")) return Agg::min;
  if (is_keyword(tok, "COUNT")) return Agg::count;
  if (is_keyword(tok, "SUM")) return Agg::sum;
  if (is_keyword(tok, "AVG")) return Agg::avg;
  return std::nullopt;
}

std::optional<ArithOp> arith_symbol(const Token& tok) {
  if (tok.kind != TokenKind::symbol) return std::nullopt;
  if (tok.text == "+") return ArithOp::add;
  if (tok.text == "-") return ArithOp::sub;
  if (tok.text == "*") return ArithOp::mul;
  if (tok.text == "/") return ArithOp::div;
  return std::nullopt;
}

struct ScopeEntry {
  std::string alias;                  // lowercased; empty when the unit has no alias
  std::optional<std::size_t> table;
  const SqlQuery* subquery = nullptr;
};

struct Scope {
  const Scope* parent = nullptr;
  std::vector<ScopeEntry> entries;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const DbSchema& schema) : toks_(std::move(tokens)), schema_(schema) {}

  SqlQuery parse() {
    SqlQuery q = parse_query(nullptr);
    accept_symbol(";");
    if (peek().kind != TokenKind::end) fail("unexpected trailing token");
    assign_slot_ids(q);
    return q;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& tok = peek();
    const std::string shown = tok.kind == TokenKind::end ? "end of input" : "'" + tok.text + "'";
    throw Error(ErrorKind::grammar, what + " at " + shown + " (offset " + std::to_string(tok.offset) + ")");
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }
  bool accept_symbol(std::string_view sym) {
    if (peek().kind != TokenKind::symbol || peek().text != sym) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
  }
  bool at_symbol(std::string_view sym, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::symbol && peek(k).text == sym;
  }
  bool at_subquery() const { return at_symbol("(") && is_keyword(peek(1), "SELECT"); }

  SqlQuery parse_query(const Scope* parent) {
    SqlQuery q = parse_select_core(parent);
    std::optional<SetOp> op;
    if (accept_keyword("UNION")) {
      if (is_keyword(peek(), "ALL")) fail("UNION ALL is outside the supported dialect");
      op = SetOp::union_;
    } else if (accept_keyword("INTERSECT")) {
      op = SetOp::intersect;
    } else if (accept_keyword("EXCEPT")) {
      op = SetOp::except_;
    }
    if (op) q.set_op = SetOperation{*op, Box<SqlQuery>(parse_query(parent))};
    return q;
  }

  // The select list is bound after FROM, so locate FROM first.
  std::size_t find_from(std::size_t start) const {
    int depth = 0;
    for (std::size_t i = start; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokenKind::end) break;
      if (t.kind == TokenKind::symbol && t.text == "(") ++depth;
      if (t.kind == TokenKind::symbol && t.text == ")") {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && is_keyword(t, "FROM")) return i;
    }
    return toks_.size();
  }

  SqlQuery parse_select_core(const Scope* parent) {
    SqlQuery q;
    expect_keyword("SELECT");
    const std::size_t select_pos = pos_;
    const std::size_t from_pos = find_from(select_pos);
    if (from_pos >= toks_.size()) fail("missing FROM clause");

    Scope scope{parent, {}};
    pos_ = from_pos;
    q.from = parse_from(scope);
    const std::size_t after_from = pos_;

    pos_ = select_pos;
    q.distinct = accept_keyword("DISTINCT");
    do {
      q.select.push_back(parse_select_item(scope));
    } while (accept_symbol(","));
    if (pos_ != from_pos) fail("unexpected token in select list");
    pos_ = after_from;

    if (accept_keyword("WHERE")) q.where = parse_conditions(scope);
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        q.group_by.push_back(parse_column_unit(scope));
      } while (accept_symbol(","));
    }
    if (accept_keyword("HAVING")) q.having = parse_conditions(scope);
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderItem item;
        item.expr = parse_value_expr(scope);
        if (accept_keyword("DESC")) {
          item.dir = Direction::desc;
        } else {
          accept_keyword("ASC");
        }
        q.order_by.push_back(item);
      } while (accept_symbol(","));
    }
    if (accept_keyword("LIMIT")) {
      if (peek().kind == TokenKind::mask) {
        advance();
        q.limit = ValueSlot::mask();
      } else if (peek().kind == TokenKind::number) {
        q.limit = ValueSlot::number(advance().text);
      } else {
        fail("expected a number or <mask> after LIMIT");
      }
    }
    return q;
  }

  std::vector<TableUnit> parse_from(Scope& scope) {
    expect_keyword("FROM");
    std::vector<TableUnit> units;
    units.push_back(parse_table_unit(scope));
    while (true) {
      if (accept_symbol(",") || accept_keyword("JOIN")) {
        units.push_back(parse_table_unit(scope));
      } else if (accept_keyword("INNER")) {
        expect_keyword("JOIN");
        units.push_back(parse_table_unit(scope));
      } else if (is_keyword(peek(), "LEFT") || is_keyword(peek(), "RIGHT") || is_keyword(peek(), "OUTER") ||
                 is_keyword(peek(), "CROSS") || is_keyword(peek(), "NATURAL")) {
        fail("only inner joins are supported");
      } else {
        break;
      }
      if (accept_keyword("ON")) units.back().on = parse_conditions(scope);
    }
    return units;
  }

  TableUnit parse_table_unit(Scope& scope) {
    TableUnit unit;
    ScopeEntry entry;
    if (at_subquery()) {
      advance();
      unit.source = Box<SqlQuery>(parse_query(scope.parent));
      expect_symbol(")");
      entry.subquery = &*std::get<1>(unit.source);
    } else {
      const Token& name = peek();
      if (name.kind != TokenKind::word || is_reserved(name)) fail("expected a table name");
      advance();
      const auto table = schema_.find_table(name.text);
      if (!table)
        throw Error(ErrorKind::binding, "unknown table '" + name.text + "' in database '" + schema_.db_id + "'");
      unit.source = *table;
      entry.table = *table;
    }
    if (accept_keyword("AS")) {
      if (peek().kind != TokenKind::word || is_reserved(peek())) fail("expected an alias");
      entry.alias = lower(advance().text);
    } else if (peek().kind == TokenKind::word && !is_reserved(peek())) {
      entry.alias = lower(advance().text);
    }
    scope.entries.push_back(std::move(entry));
    return unit;
  }

  ConditionList parse_conditions(const Scope& scope) {
    ConditionList list;
    list.conditions.push_back(parse_condition(scope));
    while (true) {
      if (accept_keyword("AND")) {
        list.connectors.push_back(Connector::and_);
      } else if (accept_keyword("OR")) {
        list.connectors.push_back(Connector::or_);
      } else {
        break;
      }
      list.conditions.push_back(parse_condition(scope));
    }
    return list;
  }

  Box<SqlQuery> parse_parenthesized_query(const Scope& scope) {
    if (!at_subquery()) fail("expected a parenthesized subquery");
    advance();
    Box<SqlQuery> sub(parse_query(&scope));
    expect_symbol(")");
    return sub;
  }

  Condition parse_condition(const Scope& scope) {
    Condition cond;
    if (accept_keyword("EXISTS")) {
      cond.op = CompareOp::exists;
      cond.right = parse_parenthesized_query(scope);
      return cond;
    }
    if (at_symbol("(")) fail("parenthesized condition groups are outside the supported dialect");
    cond.left = parse_value_expr(scope);

    const Token& tok = peek();
    if (tok.kind == TokenKind::symbol) {
      if (tok.text == "=") cond.op = CompareOp::eq;
      else if (tok.text == "!=" || tok.text == "<>") cond.op = CompareOp::ne;
      else if (tok.text == ">") cond.op = CompareOp::gt;
      else if (tok.text == "<") cond.op = CompareOp::lt;
      else if (tok.text == ">=") cond.op = CompareOp::ge;
      else if (tok.text == "<=") cond.op = CompareOp::le;
      else fail("expected a comparison operator");
      advance();
      cond.right = parse_operand(scope);
      return cond;
    }
    const bool negated = accept_keyword("NOT");
    if (accept_keyword("IN")) {
      cond.op = negated ? CompareOp::not_in : CompareOp::in;
      if (!at_subquery()) fail("IN requires a subquery");
      cond.right = parse_parenthesized_query(scope);
    } else if (accept_keyword("LIKE")) {
      cond.op = negated ? CompareOp::not_like : CompareOp::like;
      cond.right = parse_operand(scope);
    } else if (!negated && accept_keyword("BETWEEN")) {
      cond.op = CompareOp::between;
      cond.right = parse_operand(scope);
      expect_keyword("AND");
      cond.right2 = parse_operand(scope);
    } else {
      fail("expected a comparison operator");
    }
    return cond;
  }

  std::optional<ValueSlot> try_parse_value() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::mask) {
      advance();
      return ValueSlot::mask();
    }
    if (tok.kind == TokenKind::string) return ValueSlot::string(advance().text);
    if (tok.kind == TokenKind::number) return ValueSlot::number(advance().text);
    if (at_symbol("-") && peek(1).kind == TokenKind::number) {
      advance();
      return ValueSlot::number("-" + advance().text);
    }
    return std::nullopt;
  }

  Operand parse_operand(const Scope& scope) {
    if (auto value = try_parse_value()) return *value;
    if (at_subquery()) return parse_parenthesized_query(scope);
    return parse_column_unit(scope);
  }

  ValueExpr parse_value_expr(const Scope& scope) {
    ValueExpr expr;
    expr.left = parse_column_unit(scope);
    if (auto op = arith_symbol(peek())) {
      advance();
      expr.op = *op;
      expr.right = parse_column_unit(scope);
    }
    return expr;
  }

  SelectItem parse_select_item(const Scope& scope) {
    SelectItem item;
    const auto agg = agg_keyword(peek());
    if (!agg || !at_symbol("(", 1)) {
      item.expr = parse_value_expr(scope);
      return item;
    }
    advance();
    advance();
    const bool distinct = accept_keyword("DISTINCT");
    ValueExpr inner = parse_value_expr(scope);
    expect_symbol(")");
    if (inner.left.agg != Agg::none || inner.right.agg != Agg::none) fail("nested aggregate");
    if (auto op = arith_symbol(peek())) {
      // `AGG(col) op col`: the aggregate belongs to the left column unit.
      if (inner.op != ArithOp::none) fail("arithmetic on both sides of an aggregate");
      advance();
      item.expr.left = ColumnUnit{*agg, distinct || inner.left.distinct, inner.left.col};
      item.expr.op = *op;
      item.expr.right = parse_column_unit(scope);
      return item;
    }
    item.agg = *agg;
    item.expr = inner;
    item.expr.left.distinct = item.expr.left.distinct || distinct;
    return item;
  }

  ColumnUnit parse_column_unit(const Scope& scope) {
    ColumnUnit unit;
    if (auto agg = agg_keyword(peek()); agg && at_symbol("(", 1)) {
      advance();
      advance();
      unit.agg = *agg;
      unit.distinct = accept_keyword("DISTINCT");
      unit.col = parse_column_ref(scope);
      expect_symbol(")");
      return unit;
    }
    unit.distinct = accept_keyword("DISTINCT");
    unit.col = parse_column_ref(scope);
    return unit;
  }

  ColumnRef parse_column_ref(const Scope& scope) {
    if (accept_symbol("*")) return ColumnRef{};
    const Token& first = peek();
    if (first.kind != TokenKind::word || is_reserved(first)) fail("expected a column reference");
    advance();
    if (accept_symbol(".")) {
      if (accept_symbol("*")) fail("qualified '*' is outside the supported dialect");
      const Token& name = peek();
      if (name.kind != TokenKind::word) fail("expected a column name");
      advance();
      return resolve_qualified(scope, first.text, name.text);
    }
    return resolve_unqualified(scope, first.text);
  }

  std::optional<ColumnRef> column_in_table(std::size_t table, std::string_view name) const {
    if (auto c = schema_.find_column(table, name)) return ColumnRef{*c, table};
    return std::nullopt;
  }

  std::optional<ColumnRef> column_in_subquery(const SqlQuery& sub, std::string_view name) const {
    const std::string want = lower(name);
    for (const auto& item : sub.select) {
      const ColumnRef& ref = item.expr.left.col;
      if (item.expr.op != ArithOp::none) continue;
      if (ref.is_star()) {
        for (const auto& unit : sub.from) {
          if (const auto* t = std::get_if<std::size_t>(&unit.source)) {
            if (auto found = column_in_table(*t, name)) return found;
          } else if (auto found = column_in_subquery(*std::get<1>(unit.source), name)) {
            return found;
          }
        }
      } else if (lower(schema_.columns[ref.column].raw_name) == want) {
        return ref;
      }
    }
    return std::nullopt;
  }

  std::optional<ColumnRef> column_in_entry(const ScopeEntry& entry, std::string_view name) const {
    if (entry.table) return column_in_table(*entry.table, name);
    return column_in_subquery(*entry.subquery, name);
  }

  [[noreturn]] void unknown_column(std::string_view name) const {
    throw Error(ErrorKind::binding,
                "unknown column '" + std::string(name) + "' in database '" + schema_.db_id + "'");
  }

  ColumnRef resolve_qualified(const Scope& scope, std::string_view qualifier, std::string_view name) const {
    const std::string q = lower(qualifier);
    for (const Scope* s = &scope; s; s = s->parent) {
      for (const auto& entry : s->entries) {
        const bool alias_hit = entry.alias == q;
        const bool name_hit = entry.table && lower(schema_.tables[*entry.table].raw_name) == q;
        if (!alias_hit && !name_hit) continue;
        if (auto ref = column_in_entry(entry, name)) return *ref;
        unknown_column(std::string(qualifier) + "." + std::string(name));
      }
    }
    throw Error(ErrorKind::binding, "unknown table or alias '" + std::string(qualifier) + "'");
  }

  ColumnRef resolve_unqualified(const Scope& scope, std::string_view name) const {
    for (const Scope* s = &scope; s; s = s->parent)
      for (const auto& entry : s->entries)
        if (auto ref = column_in_entry(entry, name)) return *ref;
    unknown_column(name);
  }

  std::vector<Token> toks_;
  const DbSchema& schema_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* to_string(Agg agg) {
  switch (agg) {
    case Agg::none: return "";
    case Agg::max: return "MAX";
    case Agg::min: return "MIN";
    case Agg::count: return "COUNT";
    case Agg::sum: return "SUM";
    case Agg::avg: return "AVG";
  }
  return "";
}

const char* to_string(ArithOp op) {
  switch (op) {
    case ArithOp::none: return "";
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
    case ArithOp::div: return "/";
  }
  return "";
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
    case CompareOp::gt: return ">";
    case CompareOp::lt: return "<";
    case CompareOp::ge: return ">=";
    case CompareOp::le: return "<=";
    case CompareOp::between: return "BETWEEN";
    case CompareOp::in: return "IN";
    case CompareOp::not_in: return "NOT IN";
    case CompareOp::like: return "LIKE";
    case CompareOp::not_like: return "NOT LIKE";
    case CompareOp::exists: return "EXISTS";
  }
  return "";
}

const char* to_string(SetOp op) {
  switch (op) {
    case SetOp::union_: return "UNION";
    case SetOp::intersect: return "INTERSECT";
    case SetOp::except_: return "EXCEPT";
  }
  return "";
}

SqlQuery parse_sql(std::string_view text, const DbSchema& schema) {
  return Parser(detail::lex(text), schema).parse();
}

}  // namespace sqlfill::sql
