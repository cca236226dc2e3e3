#include <algorithm>

#include "sqlfill/sql_model.hpp"

namespace sqlfill::sql {

namespace {

// Visits every value slot in slot-id order. The callback receives the slot and
// the condition's left-hand expression (null for LIMIT).
template <class Q, class F>
void visit_slots(Q& q, F&& f);

template <class L, class F>
void visit_condition_slots(L& list, F&& f) {
  for (auto& cond : list.conditions) {
    const ValueExpr* left = cond.left ? &*cond.left : nullptr;
    for (auto* operand : {&cond.right, &cond.right2}) {
      if (!*operand) continue;
      auto& op = **operand;
      if (auto* slot = std::get_if<ValueSlot>(&op)) {
        f(*slot, left);
      } else if (auto* sub = std::get_if<Box<SqlQuery>>(&op)) {
        visit_slots(**sub, f);
      }
    }
  }
}

template <class Q, class F>
void visit_slots(Q& q, F&& f) {
  for (auto& unit : q.from) {
    if (auto* sub = std::get_if<Box<SqlQuery>>(&unit.source)) visit_slots(**sub, f);
    visit_condition_slots(unit.on, f);
  }
  visit_condition_slots(q.where, f);
  visit_condition_slots(q.having, f);
  if (q.limit) f(*q.limit, static_cast<const ValueExpr*>(nullptr));
  if (q.set_op) visit_slots(*q.set_op->rhs, f);
}

SlotContext context_for(const ValueExpr* left, const DbSchema& schema) {
  SlotContext ctx;
  if (!left) {
    ctx.kind = SlotContext::Kind::limit;
    ctx.type = ColumnType::number;
    return ctx;
  }
  const ColumnUnit& unit = left->left;
  if (unit.col.column >= schema.columns.size()) return ctx;
  ctx.kind = SlotContext::Kind::column;
  ctx.column = unit.col.column;
  ctx.table = schema.columns[unit.col.column].table_index;
  const bool numeric_agg = unit.agg == Agg::count || unit.agg == Agg::sum || unit.agg == Agg::avg;
  if (left->op != ArithOp::none || numeric_agg || unit.col.is_star()) {
    ctx.type = ColumnType::number;
  } else {
    ctx.type = schema.columns[unit.col.column].col_type;
  }
  return ctx;
}

std::vector<SlotInfo> collect(const SqlQuery& q, const DbSchema& schema, bool masks_only) {
  std::vector<SlotInfo> out;
  visit_slots(q, [&](const ValueSlot& slot, const ValueExpr* left) {
    if (masks_only && !slot.is_mask()) return;
    out.push_back(SlotInfo{slot.slot_id, context_for(left, schema), slot});
  });
  std::stable_sort(out.begin(), out.end(), [](const SlotInfo& a, const SlotInfo& b) { return a.slot_id < b.slot_id; });
  return out;
}

void add_unit(const ColumnUnit& unit, std::vector<std::size_t>& out) { out.push_back(unit.col.column); }

void add_expr(const ValueExpr& expr, std::vector<std::size_t>& out) {
  add_unit(expr.left, out);
  if (expr.op != ArithOp::none) add_unit(expr.right, out);
}

void add_query(const SqlQuery& q, std::vector<std::size_t>& out);

void add_conditions(const ConditionList& list, std::vector<std::size_t>& out) {
  for (const auto& cond : list.conditions) {
    if (cond.left) add_expr(*cond.left, out);
    for (const auto* operand : {&cond.right, &cond.right2}) {
      if (!*operand) continue;
      if (const auto* c = std::get_if<ColumnUnit>(&**operand)) add_unit(*c, out);
      if (const auto* sub = std::get_if<Box<SqlQuery>>(&**operand)) add_query(**sub, out);
    }
  }
}

void add_query(const SqlQuery& q, std::vector<std::size_t>& out) {
  for (const auto& item : q.select) add_expr(item.expr, out);
  for (const auto& unit : q.from) {
    if (const auto* sub = std::get_if<Box<SqlQuery>>(&unit.source)) add_query(**sub, out);
    add_conditions(unit.on, out);
  }
  add_conditions(q.where, out);
  for (const auto& unit : q.group_by) add_unit(unit, out);
  add_conditions(q.having, out);
  for (const auto& item : q.order_by) add_expr(item.expr, out);
  if (q.set_op) add_query(*q.set_op->rhs, out);
}

}  // namespace

void assign_slot_ids(SqlQuery& q) {
  std::size_t next = 0;
  visit_slots(q, [&](ValueSlot& slot, const ValueExpr*) { slot.slot_id = next++; });
}

SqlQuery mask_values(const SqlQuery& q) {
  SqlQuery out = q;
  visit_slots(out, [](ValueSlot& slot, const ValueExpr*) {
    slot.kind = ValueSlot::Kind::mask;
    slot.payload.clear();
  });
  return out;
}

std::vector<SlotInfo> collect_value_slots(const SqlQuery& q, const DbSchema& schema) {
  return collect(q, schema, true);
}

std::vector<SlotInfo> collect_all_slots(const SqlQuery& q, const DbSchema& schema) {
  return collect(q, schema, false);
}

bool set_slot(SqlQuery& q, std::size_t slot_id, ValueSlot value) {
  bool found = false;
  visit_slots(q, [&](ValueSlot& slot, const ValueExpr*) {
    if (slot.slot_id != slot_id) return;
    value.slot_id = slot_id;
    slot = value;
    found = true;
  });
  return found;
}

std::vector<std::size_t> referenced_columns(const SqlQuery& q) {
  std::vector<std::size_t> out;
  add_query(q, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sqlfill::sql
