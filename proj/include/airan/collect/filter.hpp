#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "airan/collect/schema.hpp"

namespace airan::collect {

/// Filter expression AST. Grammar (EBNF):
///
///   expr := or
///   or   := and ("OR" and)*
///   and  := not ("AND" not)*
///   not  := "NOT" not | prim
///   prim := "(" expr ")" | field op literal | field "IN" "[" literal ("," literal)* "]"
///   op   := ">" | ">=" | "<" | "<=" | "==" | "!="
///
/// Precedence NOT > AND > OR; OR/AND chains associate left. Ordering
/// comparisons require numeric fields; ==/!= work on any type; IN works
/// on numbers and strings.
enum class CmpOp : std::uint8_t { Gt, Ge, Lt, Le, Eq, Ne };

std::string to_string(CmpOp op);

class FilterExpr;
using FilterPtr = std::shared_ptr<const FilterExpr>;

class FilterExpr {
 public:
  enum class Kind : std::uint8_t { And, Or, Not, Comparison, Membership };

  Kind kind;
  FilterPtr lhs;  // And/Or/Not (Not uses lhs only)
  FilterPtr rhs;
  std::string field;          // Comparison/Membership
  CmpOp op = CmpOp::Eq;       // Comparison
  Value literal;              // Comparison
  std::vector<Value> members; // Membership

  static FilterPtr make_and(FilterPtr l, FilterPtr r);
  static FilterPtr make_or(FilterPtr l, FilterPtr r);
  static FilterPtr make_not(FilterPtr e);
  static FilterPtr make_cmp(std::string field, CmpOp op, Value lit);
  static FilterPtr make_in(std::string field, std::vector<Value> members);

  bool structurally_equal(const FilterExpr& other) const;
};

/// Parses and type-checks a filter. Errors carry the byte position and, for
/// syntax errors, the expected token class.
FilterPtr parse_filter(const std::string& text, const AttrSchema& schema);

/// Canonical text form; parse(print(ast)) is structurally identical to ast.
std::string print_filter(const FilterExpr& expr);

/// Evaluates the expression against one record. The record must carry every
/// referenced attribute; a missing one raises MissingAttribute rather than
/// evaluating to false, so schema drift at a source cannot silently filter
/// everything out.
bool eval_filter(const FilterExpr& expr, const DataRecord& record);

/// Compiled form of a filter: the AST is lowered once into a closure tree,
/// then applied per record. Semantics identical to eval_filter.
using CompiledFilter = std::function<bool(const DataRecord&)>;
CompiledFilter compile_filter(const FilterPtr& expr);

}  // namespace airan::collect
