#include <algorithm>
#include <string>
#include <vector>

#include "sqlfill/evaluator.hpp"

namespace sqlfill {

namespace {

using namespace sqlfill::sql;

std::string join_sorted(std::vector<std::string> parts, const char* sep) {
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string unit_key(const ColumnUnit& unit) {
  std::string out = to_string(unit.agg);
  out += "(";
  if (unit.distinct) out += "distinct ";
  out += "c" + std::to_string(unit.col.column) + ")";
  return out;
}

std::string expr_key(const ValueExpr& expr) {
  std::string out = unit_key(expr.left);
  if (expr.op != ArithOp::none) out += to_string(expr.op) + unit_key(expr.right);
  return out;
}

std::string operand_key(const Operand& op) {
  if (std::holds_alternative<ValueSlot>(op)) return "value";
  if (const auto* c = std::get_if<ColumnUnit>(&op)) return unit_key(*c);
  return "{" + canonical_form(*std::get<Box<SqlQuery>>(op)) + "}";
}

std::string condition_key(const Condition& cond) {
  std::string out = cond.left ? expr_key(*cond.left) : "";
  out += " ";
  out += to_string(cond.op);
  if (cond.right) out += " " + operand_key(*cond.right);
  if (cond.right2) out += " " + operand_key(*cond.right2);
  return out;
}

// AND-groups separated by OR; each group and the group list are order-insensitive.
std::string conditions_key(const ConditionList& list) {
  std::vector<std::string> groups;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < list.conditions.size(); ++i) {
    current.push_back(condition_key(list.conditions[i]));
    const bool group_ends = i + 1 == list.conditions.size() || list.connectors[i] == Connector::or_;
    if (group_ends) {
      groups.push_back(join_sorted(std::move(current), " & "));
      current.clear();
    }
  }
  return join_sorted(std::move(groups), " | ");
}

}  // namespace

std::string canonical_form(const SqlQuery& q) {
  std::vector<std::string> select;
  for (const auto& item : q.select) select.push_back(std::string(to_string(item.agg)) + "[" + expr_key(item.expr) + "]");
  std::vector<std::string> tables;
  for (const auto& unit : q.from) {
    if (const auto* t = std::get_if<std::size_t>(&unit.source)) {
      tables.push_back("t" + std::to_string(*t));
    } else {
      tables.push_back("{" + canonical_form(*std::get<Box<SqlQuery>>(unit.source)) + "}");
    }
  }
  std::vector<std::string> group;
  for (const auto& unit : q.group_by) group.push_back(unit_key(unit));
  std::string order;
  for (const auto& item : q.order_by) {
    if (!order.empty()) order += ", ";
    order += expr_key(item.expr) + (item.dir == Direction::desc ? " desc" : " asc");
  }

  std::string out = "select(";
  out += q.distinct ? "distinct " : "";
  out += join_sorted(std::move(select), ", ");
  out += ") from(" + join_sorted(std::move(tables), ", ");
  out += ") where(" + conditions_key(q.where);
  out += ") group(" + join_sorted(std::move(group), ", ");
  out += ") having(" + conditions_key(q.having);
  out += ") order(" + order;
  out += ") limit(" + std::string(q.limit ? "yes" : "no") + ")";
  if (q.set_op) out += " " + std::string(to_string(q.set_op->op)) + " {" + canonical_form(*q.set_op->rhs) + "}";
  return out;
}

bool exact_set_match(const SqlQuery& pred, const SqlQuery& gold) { return canonical_form(pred) == canonical_form(gold); }

}  // namespace sqlfill
