#include <string>
#include <vector>

#include "sqlfill/sql_model.hpp"

namespace sqlfill::sql {

namespace {

struct PrintEntry {
  std::optional<std::size_t> table;
  const SqlQuery* subquery = nullptr;
  std::string alias;
};

struct PrintScope {
  const PrintScope* parent = nullptr;
  std::vector<PrintEntry> entries;
};

bool exposes(const SqlQuery& sub, const ColumnRef& ref) {
  for (const auto& item : sub.select) {
    if (item.expr.left.col == ref) return true;
    if (item.expr.left.col.is_star()) {
      for (const auto& unit : sub.from) {
        if (const auto* t = std::get_if<std::size_t>(&unit.source)) {
          if (ref.table == *t) return true;
        } else if (exposes(*std::get<1>(unit.source), ref)) {
          return true;
        }
      }
    }
  }
  return false;
}

class Printer {
 public:
  Printer(const DbSchema& schema, PrintStyle style) : schema_(schema), style_(style) {}

  std::string query(const SqlQuery& q, const PrintScope* parent) {
    PrintScope scope{parent, {}};
    for (const auto& unit : q.from) {
      PrintEntry entry;
      if (const auto* t = std::get_if<std::size_t>(&unit.source)) {
        entry.table = *t;
      } else {
        entry.subquery = &*std::get<1>(unit.source);
      }
      if (style_ == PrintStyle::executable && q.from.size() > 1) entry.alias = "T" + std::to_string(++alias_counter_);
      scope.entries.push_back(std::move(entry));
    }

    std::string out = "SELECT ";
    if (q.distinct) out += "DISTINCT ";
    for (std::size_t i = 0; i < q.select.size(); ++i) {
      if (i) out += ", ";
      const auto& item = q.select[i];
      if (item.agg != Agg::none) {
        out += to_string(item.agg);
        out += "(" + value_expr(item.expr, scope) + ")";
      } else {
        out += value_expr(item.expr, scope);
      }
    }

    out += " FROM ";
    for (std::size_t i = 0; i < q.from.size(); ++i) {
      const auto& unit = q.from[i];
      if (i) out += " JOIN ";
      if (const auto* t = std::get_if<std::size_t>(&unit.source)) {
        out += schema_.tables[*t].raw_name;
      } else {
        out += "(" + query(*std::get<1>(unit.source), parent) + ")";
      }
      if (!scope.entries[i].alias.empty()) out += " AS " + scope.entries[i].alias;
      if (!unit.on.empty()) out += " ON " + conditions(unit.on, scope);
    }

    if (!q.where.empty()) out += " WHERE " + conditions(q.where, scope);
    if (!q.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < q.group_by.size(); ++i) {
        if (i) out += ", ";
        out += column_unit(q.group_by[i], scope);
      }
    }
    if (!q.having.empty()) out += " HAVING " + conditions(q.having, scope);
    if (!q.order_by.empty()) {
      out += " ORDER BY ";
      for (std::size_t i = 0; i < q.order_by.size(); ++i) {
        if (i) out += ", ";
        out += value_expr(q.order_by[i].expr, scope);
        if (q.order_by[i].dir == Direction::desc) out += " DESC";
      }
    }
    if (q.limit) out += " LIMIT " + value(*q.limit);
    if (q.set_op) {
      out += " ";
      out += to_string(q.set_op->op);
      out += " " + query(*q.set_op->rhs, parent);
    }
    return out;
  }

 private:
  std::string conditions(const ConditionList& list, const PrintScope& scope) {
    std::string out;
    for (std::size_t i = 0; i < list.conditions.size(); ++i) {
      if (i) out += list.connectors[i - 1] == Connector::and_ ? " AND " : " OR ";
      out += condition(list.conditions[i], scope);
    }
    return out;
  }

  std::string condition(const Condition& cond, const PrintScope& scope) {
    if (cond.op == CompareOp::exists) return "EXISTS " + operand(*cond.right, scope);
    std::string out = value_expr(*cond.left, scope);
    out += " ";
    out += to_string(cond.op);
    out += " " + operand(*cond.right, scope);
    if (cond.op == CompareOp::between) out += " AND " + operand(*cond.right2, scope);
    return out;
  }

  std::string operand(const Operand& op, const PrintScope& scope) {
    if (const auto* v = std::get_if<ValueSlot>(&op)) return value(*v);
    if (const auto* c = std::get_if<ColumnUnit>(&op)) return column_unit(*c, scope);
    return "(" + query(*std::get<Box<SqlQuery>>(op), &scope) + ")";
  }

  static std::string value(const ValueSlot& slot) {
    switch (slot.kind) {
      case ValueSlot::Kind::mask: return "<mask>";
      case ValueSlot::Kind::number_literal: return slot.payload;
      case ValueSlot::Kind::string_literal: {
        std::string out = "'";
        for (char c : slot.payload) {
          if (c == '\'') out.push_back('\'');
          out.push_back(c);
        }
        return out + "'";
      }
    }
    return {};
  }

  std::string value_expr(const ValueExpr& expr, const PrintScope& scope) {
    std::string out = column_unit(expr.left, scope);
    if (expr.op != ArithOp::none) {
      out += " ";
      out += to_string(expr.op);
      out += " " + column_unit(expr.right, scope);
    }
    return out;
  }

  std::string column_unit(const ColumnUnit& unit, const PrintScope& scope) {
    std::string inner = (unit.distinct ? "DISTINCT " : "") + column(unit.col, scope);
    if (unit.agg == Agg::none) return inner;
    return std::string(to_string(unit.agg)) + "(" + inner + ")";
  }

  std::string column(const ColumnRef& ref, const PrintScope& scope) {
    if (ref.is_star()) return "*";
    const auto& col = schema_.columns[ref.column];
    if (style_ == PrintStyle::qualified) return schema_.tables[*col.table_index].raw_name + "." + col.raw_name;

    for (const PrintScope* s = &scope; s; s = s->parent) {
      for (const auto& entry : s->entries) {
        const bool hit = entry.table ? entry.table == ref.table : exposes(*entry.subquery, ref);
        if (!hit) continue;
        if (s == &scope && s->entries.size() == 1) return col.raw_name;
        if (!entry.alias.empty()) return entry.alias + "." + col.raw_name;
        if (entry.table) return schema_.tables[*entry.table].raw_name + "." + col.raw_name;
        return col.raw_name;
      }
    }
    return col.raw_name;
  }

  const DbSchema& schema_;
  PrintStyle style_;
  int alias_counter_ = 0;
};

}  // namespace

std::string print_sql(const SqlQuery& q, const DbSchema& schema, PrintStyle style) {
  return Printer(schema, style).query(q, nullptr);
}

}  // namespace sqlfill::sql
