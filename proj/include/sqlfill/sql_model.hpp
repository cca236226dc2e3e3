#pragma once

// Clause-level intermediate representation for the Spider SQL dialect.
//
// Every literal position is a ValueSlot; a slot is either a concrete literal or
// the `<mask>` placeholder emitted by value-free parsers. Column references are
// bound to schema ordinals at parse time, so two queries over the same schema
// compare structurally regardless of the aliases they were written with.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqlfill/corpus.hpp"

namespace sqlfill::sql {

/// Owning pointer with value semantics (deep copy, deep equality).
template <class T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) {
    if (!a.ptr_ || !b.ptr_) return a.ptr_ == b.ptr_;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::unique_ptr<T> ptr_;
};

enum class Agg { none, max, min, count, sum, avg };
enum class ArithOp { none, add, sub, mul, div };
enum class CompareOp { eq, ne, gt, lt, ge, le, between, in, not_in, like, not_like, exists };
enum class SetOp { union_, intersect, except_ };
enum class Connector { and_, or_ };
enum class Direction { asc, desc };

const char* to_string(Agg agg);
const char* to_string(ArithOp op);
const char* to_string(CompareOp op);
const char* to_string(SetOp op);

struct ColumnRef {
  std::size_t column = 0;              // ordinal into DbSchema::columns; 0 is `*`
  std::optional<std::size_t> table;    // originating table; empty for `*`

  bool is_star() const { return column == 0; }
  bool operator==(const ColumnRef&) const = default;
};

/// `agg(DISTINCT col)`, `DISTINCT col`, or a bare column.
struct ColumnUnit {
  Agg agg = Agg::none;
  bool distinct = false;
  ColumnRef col;

  bool operator==(const ColumnUnit&) const = default;
};

/// `left` or `left op right`; `right` is meaningful only when op != none.
struct ValueExpr {
  ColumnUnit left;
  ArithOp op = ArithOp::none;
  ColumnUnit right;

  bool operator==(const ValueExpr&) const = default;
};

struct ValueSlot {
  enum class Kind { string_literal, number_literal, mask };

  Kind kind = Kind::mask;
  std::string payload;       // literal text as written (unquoted); empty for masks
  std::size_t slot_id = 0;   // depth-first, left-to-right ordinal within the query

  bool is_mask() const { return kind == Kind::mask; }
  bool operator==(const ValueSlot&) const = default;

  static ValueSlot string(std::string text) { return {Kind::string_literal, std::move(text), 0}; }
  static ValueSlot number(std::string text) { return {Kind::number_literal, std::move(text), 0}; }
  static ValueSlot mask() { return {Kind::mask, {}, 0}; }
};

struct SqlQuery;

/// Right-hand side of a condition: a value, another column, or a subquery.
using Operand = std::variant<ValueSlot, ColumnUnit, Box<SqlQuery>>;

struct Condition {
  std::optional<ValueExpr> left;  // empty only for EXISTS
  CompareOp op = CompareOp::eq;
  std::optional<Operand> right;
  std::optional<Operand> right2;  // upper bound of BETWEEN

  bool operator==(const Condition&) const = default;
};

/// Flat AND/OR chain; connectors[i] joins conditions[i] and conditions[i + 1].
/// AND binds tighter than OR, as in SQL.
struct ConditionList {
  std::vector<Condition> conditions;
  std::vector<Connector> connectors;

  bool empty() const { return conditions.empty(); }
  bool operator==(const ConditionList&) const = default;
};

struct TableUnit {
  std::variant<std::size_t, Box<SqlQuery>> source;  // table ordinal or FROM subquery
  ConditionList on;                                  // join conditions introduced with this unit

  bool is_subquery() const { return source.index() == 1; }
  bool operator==(const TableUnit&) const = default;
};

struct SelectItem {
  Agg agg = Agg::none;
  ValueExpr expr;

  bool operator==(const SelectItem&) const = default;
};

struct OrderItem {
  ValueExpr expr;
  Direction dir = Direction::asc;

  bool operator==(const OrderItem&) const = default;
};

struct SetOperation {
  SetOp op = SetOp::union_;
  Box<SqlQuery> rhs;

  bool operator==(const SetOperation&) const = default;
};

struct SqlQuery {
  bool distinct = false;
  std::vector<SelectItem> select;
  std::vector<TableUnit> from;
  ConditionList where;
  std::vector<ColumnUnit> group_by;
  ConditionList having;
  std::vector<OrderItem> order_by;
  std::optional<ValueSlot> limit;
  std::optional<SetOperation> set_op;

  bool operator==(const SqlQuery&) const = default;
};

/// Parses one Spider-dialect query and binds it against `schema`. Raises
/// ErrorKind::grammar for unsupported syntax and ErrorKind::binding for
/// unknown tables or columns. Slot ids are assigned before returning.
SqlQuery parse_sql(std::string_view text, const DbSchema& schema);

enum class PrintStyle {
  executable,  // canonical SQL: uppercase keywords, generated T<n> aliases for joins
  qualified,   // every column written as raw_table.raw_column, no aliases
};

/// Renders `q` back to text. Strings are single-quoted with quotes doubled and
/// masks print as `<mask>`.
std::string print_sql(const SqlQuery& q, const DbSchema& schema, PrintStyle style = PrintStyle::executable);

/// Replaces every literal slot (including LIMIT) by a mask slot.
SqlQuery mask_values(const SqlQuery& q);

/// Renumbers slot ids in traversal order: select, from, where, group by,
/// having, order by, limit, set operation; nested queries are entered where
/// they occur.
void assign_slot_ids(SqlQuery& q);

/// Where a slot's value is used.
struct SlotContext {
  enum class Kind { column, limit, unresolved };

  Kind kind = Kind::unresolved;
  std::size_t column = 0;
  std::optional<std::size_t> table;
  ColumnType type = ColumnType::other;

  bool wants_number() const { return kind == Kind::limit || type == ColumnType::number; }
  bool operator==(const SlotContext&) const = default;
};

struct SlotInfo {
  std::size_t slot_id = 0;
  SlotContext context;
  ValueSlot value;
};

/// Mask slots of `q` in slot-id order, each with its governing column.
std::vector<SlotInfo> collect_value_slots(const SqlQuery& q, const DbSchema& schema);

/// Every slot, literal or mask, in slot-id order.
std::vector<SlotInfo> collect_all_slots(const SqlQuery& q, const DbSchema& schema);

/// Replaces the slot numbered `slot_id` by `value`, keeping the id. Returns
/// false when no such slot exists.
bool set_slot(SqlQuery& q, std::size_t slot_id, ValueSlot value);

/// Every column ordinal referenced anywhere in `q`, including nested queries.
std::vector<std::size_t> referenced_columns(const SqlQuery& q);

}  // namespace sqlfill::sql
