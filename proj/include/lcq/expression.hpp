#pragma once

// Arithmetic expressions in t, x, y for boundary and initial data.
//
//   expr    := compare
//   compare := sum (('<' | '<=' | '>' | '>=') sum)?
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 't' | 'x' | 'y' | 'pi' | func '(' args ')' | '(' expr ')'
//
// Functions: sin, cos, exp, abs (one argument) and if(cond, a, b). Comparisons
// evaluate to 1 or 0; if() selects a when cond is non-zero.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcq {

class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct ExprNode {
  enum class Kind { constant, var_t, var_x, var_y, negate, add, sub, mul, div, pow, lt, le, gt, ge, call, select };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::string name;  ///< function name for calls
  std::vector<std::shared_ptr<const ExprNode>> args;
};

class Expression {
 public:
  Expression() = default;
  /// Throws ExpressionError.
  static Expression parse(const std::string& text);
  static Expression constant(double v);

  double operator()(double t, double x, double y) const;

  /// Fully parenthesised form; parses back to an identical tree.
  std::string to_string() const;
  const std::string& source() const { return source_; }
  bool empty() const { return !root_; }
  const ExprNode* root() const { return root_.get(); }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

}  // namespace lcq
