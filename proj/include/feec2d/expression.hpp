#ifndef FEEC2D_EXPRESSION_HPP
#define FEEC2D_EXPRESSION_HPP

#include <memory>
#include <string>
#include <vector>

#include "feec2d/errors.hpp"

namespace feec2d {

/// Small closed-form expression language in the variables x, y, t.
///
/// Grammar: numbers, `pi`, `x`, `y`, `t`, binary + - * /, `^` with a
/// constant exponent, unary minus, `sin`, `cos`, `exp`, `sqrt`, parentheses.
/// Expressions are immutable; differentiation is symbolic, so manufactured
/// solutions written in this grammar get exact derivatives of any order.
class Expr {
 public:
  struct Node;

  Expr() = default;  // the zero expression

  static Expr parse(const std::string& source);
  static Expr constant(double v);
  static Expr variable(char var);  // 'x', 'y' or 't'

  Expr diff(char var) const;  // d/dvar, simplified

  double operator()(double x, double y, double t) const;

  /// Structurally zero after simplification.  (Analytically-zero
  /// expressions that do not fold, e.g. sin(x) - sin(x) written through
  /// different subtrees, may still report false.)
  bool is_zero() const;
  std::string str() const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  static Expr sin(const Expr&);
  static Expr cos(const Expr&);
  static Expr exp(const Expr&);

 private:
  explicit Expr(std::shared_ptr<const Node> root);
  void compile();

  std::shared_ptr<const Node> root_;
  // flattened postfix program for fast repeated evaluation
  struct Op {
    int kind;
    double value;
  };
  std::shared_ptr<const std::vector<Op>> program_;
};

}  // namespace feec2d

#endif
