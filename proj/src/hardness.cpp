// Hardness levels follow the component-counting scheme of the reference Spider
// scorer, including two of its counting quirks (see docs/hardness.md):
//   * a WHERE/HAVING condition counts as an "aggregate" when it is negated
//     (NOT IN / NOT LIKE), because the scorer inspects the condition's NOT flag;
//   * every AND/OR connector inside HAVING also counts as an aggregate.

#include "sqlfill/errors.hpp"
#include "sqlfill/evaluator.hpp"

namespace sqlfill {

namespace {

using namespace sqlfill::sql;

template <class F>
void for_each_condition_list(const SqlQuery& q, F&& f) {
  for (const auto& unit : q.from) f(unit.on);
  f(q.where);
  f(q.having);
}

bool negated(const Condition& c) { return c.op == CompareOp::not_in || c.op == CompareOp::not_like; }

bool has_subquery(const std::optional<Operand>& op) { return op && std::holds_alternative<Box<SqlQuery>>(*op); }

int component1(const SqlQuery& q) {
  int count = 0;
  if (!q.where.empty()) ++count;
  if (!q.group_by.empty()) ++count;
  if (!q.order_by.empty()) ++count;
  if (q.limit) ++count;
  if (!q.from.empty()) count += static_cast<int>(q.from.size()) - 1;
  for_each_condition_list(q, [&](const ConditionList& list) {
    for (auto c : list.connectors)
      if (c == Connector::or_) ++count;
    for (const auto& cond : list.conditions)
      if (cond.op == CompareOp::like || cond.op == CompareOp::not_like) ++count;
  });
  return count;
}

int component2(const SqlQuery& q) {
  int count = 0;
  for_each_condition_list(q, [&](const ConditionList& list) {
    for (const auto& cond : list.conditions) {
      if (has_subquery(cond.right)) ++count;
      if (has_subquery(cond.right2)) ++count;
    }
  });
  if (q.set_op) ++count;
  return count;
}

int others(const SqlQuery& q) {
  int aggs = 0;
  for (const auto& item : q.select)
    if (item.agg != Agg::none) ++aggs;
  for (const auto& cond : q.where.conditions)
    if (negated(cond)) ++aggs;
  for (const auto& unit : q.group_by)
    if (unit.agg != Agg::none) ++aggs;
  for (const auto& item : q.order_by) {
    if (item.expr.left.agg != Agg::none) ++aggs;
    if (item.expr.op != ArithOp::none && item.expr.right.agg != Agg::none) ++aggs;
  }
  for (const auto& cond : q.having.conditions)
    if (negated(cond)) ++aggs;
  aggs += static_cast<int>(q.having.connectors.size());

  int count = 0;
  if (aggs > 1) ++count;
  if (q.select.size() > 1) ++count;
  if (q.where.conditions.size() > 1) ++count;
  if (q.group_by.size() > 1) ++count;
  return count;
}

}  // namespace

const char* to_string(Hardness level) {
  switch (level) {
    case Hardness::easy: return "easy";
    case Hardness::medium: return "medium";
    case Hardness::hard: return "hard";
    case Hardness::extra_hard: return "extra";
  }
  return "extra";
}

std::optional<Hardness> hardness_from_string(std::string_view name) {
  for (auto level : kHardnessLevels)
    if (name == to_string(level)) return level;
  if (name == "extra_hard" || name == "extra hard") return Hardness::extra_hard;
  return std::nullopt;
}

ComponentCounts count_components(const SqlQuery& q) { return {component1(q), component2(q), others(q)}; }

Hardness hardness_from_counts(const ComponentCounts& c) {
  if (c.component1 <= 1 && c.others == 0 && c.component2 == 0) return Hardness::easy;
  if ((c.others <= 2 && c.component1 <= 1 && c.component2 == 0) ||
      (c.component1 <= 2 && c.others < 2 && c.component2 == 0))
    return Hardness::medium;
  if ((c.others > 2 && c.component1 <= 2 && c.component2 == 0) ||
      (c.component1 > 2 && c.component1 <= 3 && c.others <= 2 && c.component2 == 0) ||
      (c.component1 <= 1 && c.others == 0 && c.component2 <= 1))
    return Hardness::hard;
  return Hardness::extra_hard;
}

Hardness classify_hardness(const SqlQuery& gold) { return hardness_from_counts(count_components(gold)); }

}  // namespace sqlfill
