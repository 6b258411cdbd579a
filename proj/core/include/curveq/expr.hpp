#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "curveq/jet.hpp"

namespace curveq {

enum class ExprKind {
  constant,
  variable,
  negate,
  sin,
  cos,
  tan,
  exp,
  log,
  sqrt,
  add,
  subtract,
  multiply,
  divide,
  power,
};

/// One node of an expression tree. `value` holds the literal for constants
/// and the exponent for powers; `offset` is the byte offset of the node's
/// token in the source text (0 for synthesized trees).
struct ExprNode {
  ExprKind kind = ExprKind::constant;
  double value = 0.0;
  std::size_t offset = 0;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression of a single real parameter.
///
/// Grammar (whitespace-insensitive, `^` right-associative and binding
/// tighter than unary minus):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'pi' | param | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | tan | exp | log | sqrt
///
/// Exponents must fold to a numeric constant.
class ExprAst {
 public:
  ExprAst() = default;
  ExprAst(ExprPtr root, std::string parameter);

  const ExprNode& root() const { return *root_; }
  const ExprPtr& root_ptr() const noexcept { return root_; }
  const std::string& parameter() const noexcept { return parameter_; }
  bool empty() const noexcept { return root_ == nullptr; }

 private:
  ExprPtr root_;
  std::string parameter_ = "t";
};

/// Structural equality (same node kinds, same literals, same shape).
bool structurally_equal(const ExprNode& a, const ExprNode& b);
inline bool structurally_equal(const ExprAst& a, const ExprAst& b) {
  return structurally_equal(a.root(), b.root());
}

/// Throws ParseError (syntax or unknown identifier) with a byte offset.
ExprAst parse_expression(std::string_view text, std::string_view parameter = "t");

/// Fully parenthesized rendering that parses back to an identical tree.
std::string print(const ExprAst& ast);

/// Value and derivatives up to order 4 at `t`. Throws EvaluationError.
Jet4 eval_jet(const ExprAst& ast, double t);
/// Plain value.
double eval(const ExprAst& ast, double t);

// Builders for synthesized trees.
namespace expr {
ExprPtr constant(double v);
ExprPtr variable();
ExprPtr unary(ExprKind kind, ExprPtr arg);
ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr power(ExprPtr base, double exponent);
}  // namespace expr

}  // namespace curveq
