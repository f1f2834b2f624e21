#include "feec2d/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace feec2d {

namespace {
enum Kind {
  kConst,
  kVarX,
  kVarY,
  kVarT,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,  // right child must be a constant
  kSin,
  kCos,
  kExp,
  kSqrt
};
}  // namespace

struct Expr::Node {
  int kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(int kind, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->value = v;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr cst(double v) { return make(kConst, nullptr, nullptr, v); }

bool is_const(const NodePtr& n, double v) { return n->kind == kConst && n->value == v; }

NodePtr simplify(const NodePtr& n) {
  if (!n->a) return n;
  NodePtr a = simplify(n->a);
  NodePtr b = n->b ? simplify(n->b) : nullptr;
  const bool ca = a->kind == kConst;
  const bool cb = b && b->kind == kConst;
  switch (n->kind) {
    case kAdd:
      if (ca && cb) return cst(a->value + b->value);
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case kSub:
      if (ca && cb) return cst(a->value - b->value);
      if (is_const(b, 0)) return a;
      if (is_const(a, 0)) return simplify(make(kNeg, b));
      break;
    case kMul:
      if (ca && cb) return cst(a->value * b->value);
      if (is_const(a, 0) || is_const(b, 0)) return cst(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case kDiv:
      if (ca && cb && b->value != 0.0) return cst(a->value / b->value);
      if (is_const(a, 0)) return cst(0);
      if (is_const(b, 1)) return a;
      break;
    case kNeg:
      if (ca) return cst(-a->value);
      if (a->kind == kNeg) return a->a;
      break;
    case kPow:
      if (ca && cb) return cst(std::pow(a->value, b->value));
      if (is_const(b, 0)) return cst(1);
      if (is_const(b, 1)) return a;
      break;
    case kSin:
      if (ca) return cst(std::sin(a->value));
      break;
    case kCos:
      if (ca) return cst(std::cos(a->value));
      break;
    case kExp:
      if (ca) return cst(std::exp(a->value));
      break;
    case kSqrt:
      if (ca) return cst(std::sqrt(a->value));
      break;
    default:
      break;
  }
  return make(n->kind, a, b, n->value);
}

NodePtr diff_node(const NodePtr& n, int var_kind) {
  switch (n->kind) {
    case kConst:
      return cst(0);
    case kVarX:
    case kVarY:
    case kVarT:
      return cst(n->kind == var_kind ? 1 : 0);
    case kAdd:
      return make(kAdd, diff_node(n->a, var_kind), diff_node(n->b, var_kind));
    case kSub:
      return make(kSub, diff_node(n->a, var_kind), diff_node(n->b, var_kind));
    case kMul:
      return make(kAdd, make(kMul, diff_node(n->a, var_kind), n->b),
                  make(kMul, n->a, diff_node(n->b, var_kind)));
    case kDiv:
      return make(kDiv,
                  make(kSub, make(kMul, diff_node(n->a, var_kind), n->b),
                       make(kMul, n->a, diff_node(n->b, var_kind))),
                  make(kMul, n->b, n->b));
    case kNeg:
      return make(kNeg, diff_node(n->a, var_kind));
    case kPow: {
      const double c = n->b->value;
      return make(kMul, make(kMul, cst(c), make(kPow, n->a, cst(c - 1.0))),
                  diff_node(n->a, var_kind));
    }
    case kSin:
      return make(kMul, make(kCos, n->a), diff_node(n->a, var_kind));
    case kCos:
      return make(kNeg, make(kMul, make(kSin, n->a), diff_node(n->a, var_kind)));
    case kExp:
      return make(kMul, make(kExp, n->a), diff_node(n->a, var_kind));
    case kSqrt:
      return make(kDiv, diff_node(n->a, var_kind), make(kMul, cst(2), make(kSqrt, n->a)));
    default:
      throw ExprError("differentiation: unknown node kind");
  }
}

void print_node(std::ostringstream& os, const NodePtr& n) {
  switch (n->kind) {
    case kConst:
      os << n->value;
      return;
    case kVarX:
      os << 'x';
      return;
    case kVarY:
      os << 'y';
      return;
    case kVarT:
      os << 't';
      return;
    case kNeg:
      os << "(-";
      print_node(os, n->a);
      os << ")";
      return;
    case kSin:
    case kCos:
    case kExp:
    case kSqrt:
      os << (n->kind == kSin ? "sin" : n->kind == kCos ? "cos" : n->kind == kExp ? "exp" : "sqrt")
         << "(";
      print_node(os, n->a);
      os << ")";
      return;
    default: {
      const char op = n->kind == kAdd ? '+' : n->kind == kSub ? '-' : n->kind == kMul ? '*'
                      : n->kind == kDiv ? '/' : '^';
      os << "(";
      print_node(os, n->a);
      os << op;
      print_node(os, n->b);
      os << ")";
      return;
    }
  }
}

// recursive-descent parser
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw ExprError("unexpected input at position " + std::to_string(pos_) + " in '" +
                      s_ + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (eat('+'))
        e = make(kAdd, e, term());
      else if (eat('-'))
        e = make(kSub, e, term());
      else
        return e;
    }
  }
  NodePtr term() {
    NodePtr e = factor();
    for (;;) {
      if (eat('*'))
        e = make(kMul, e, factor());
      else if (eat('/'))
        e = make(kDiv, e, factor());
      else
        return e;
    }
  }
  NodePtr factor() {
    if (eat('-')) return make(kNeg, factor());
    NodePtr base = primary();
    if (eat('^')) {
      NodePtr e = factor();  // right-associative
      NodePtr se = simplify(e);
      if (se->kind != kConst)
        throw ExprError("exponent must be a constant expression");
      return make(kPow, base, se);
    }
    return base;
  }
  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ExprError("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s_.c_str() + pos_, &end);
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      return cst(v);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) throw ExprError("missing ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(kVarX);
      if (id == "y") return make(kVarY);
      if (id == "t") return make(kVarT);
      if (id == "pi") return cst(M_PI);
      int fk = id == "sin" ? kSin : id == "cos" ? kCos : id == "exp" ? kExp
               : id == "sqrt" ? kSqrt : -1;
      if (fk < 0) throw ExprError("unknown identifier '" + id + "'");
      if (!eat('(')) throw ExprError("expected '(' after '" + id + "'");
      NodePtr arg = expr();
      if (!eat(')')) throw ExprError("missing ')' after " + id + " argument");
      return make(fk, arg);
    }
    throw ExprError(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) { compile(); }

Expr Expr::parse(const std::string& source) {
  return Expr(simplify(Parser(source).run()));
}

Expr Expr::constant(double v) { return Expr(cst(v)); }

Expr Expr::variable(char var) {
  switch (var) {
    case 'x':
      return Expr(make(kVarX));
    case 'y':
      return Expr(make(kVarY));
    case 't':
      return Expr(make(kVarT));
    default:
      throw ExprError("variable must be one of x, y, t");
  }
}

Expr Expr::diff(char var) const {
  const int vk = var == 'x' ? kVarX : var == 'y' ? kVarY : var == 't' ? kVarT : -1;
  if (vk < 0) throw ExprError("variable must be one of x, y, t");
  NodePtr r = root_ ? root_ : cst(0);
  return Expr(simplify(diff_node(r, vk)));
}

void Expr::compile() {
  auto prog = std::make_shared<std::vector<Op>>();
  // post-order flatten
  struct Frame {
    const Node* n;
    bool expanded;
  };
  std::vector<Frame> stack;
  if (root_) stack.push_back({root_.get(), false});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (!f.n) continue;
    if (f.expanded) {
      prog->push_back({f.n->kind, f.n->value});
    } else {
      stack.push_back({f.n, true});
      if (f.n->b) stack.push_back({f.n->b.get(), false});
      if (f.n->a) stack.push_back({f.n->a.get(), false});
    }
  }
  if (prog->empty()) prog->push_back({kConst, 0.0});
  program_ = std::move(prog);
}

double Expr::operator()(double x, double y, double t) const {
  if (!program_) return 0.0;
  double stack[64];
  int top = -1;
  for (const Op& op : *program_) {
    switch (op.kind) {
      case kConst:
        stack[++top] = op.value;
        break;
      case kVarX:
        stack[++top] = x;
        break;
      case kVarY:
        stack[++top] = y;
        break;
      case kVarT:
        stack[++top] = t;
        break;
      case kAdd:
        --top;
        stack[top] += stack[top + 1];
        break;
      case kSub:
        --top;
        stack[top] -= stack[top + 1];
        break;
      case kMul:
        --top;
        stack[top] *= stack[top + 1];
        break;
      case kDiv:
        --top;
        stack[top] /= stack[top + 1];
        break;
      case kPow:
        --top;
        stack[top] = std::pow(stack[top], stack[top + 1]);
        break;
      case kNeg:
        stack[top] = -stack[top];
        break;
      case kSin:
        stack[top] = std::sin(stack[top]);
        break;
      case kCos:
        stack[top] = std::cos(stack[top]);
        break;
      case kExp:
        stack[top] = std::exp(stack[top]);
        break;
      case kSqrt:
        stack[top] = std::sqrt(stack[top]);
        break;
    }
    if (top >= 62) throw ExprError("expression too deep to evaluate");
  }
  return stack[0];
}

bool Expr::is_zero() const {
  return !root_ || (root_->kind == kConst && root_->value == 0.0);
}

std::string Expr::str() const {
  if (!root_) return "0";
  std::ostringstream os;
  print_node(os, root_);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(simplify(make(kAdd, a.root_ ? a.root_ : cst(0), b.root_ ? b.root_ : cst(0))));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(simplify(make(kSub, a.root_ ? a.root_ : cst(0), b.root_ ? b.root_ : cst(0))));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(simplify(make(kMul, a.root_ ? a.root_ : cst(0), b.root_ ? b.root_ : cst(0))));
}
Expr operator-(const Expr& a) { return Expr(simplify(make(kNeg, a.root_ ? a.root_ : cst(0)))); }
Expr Expr::sin(const Expr& a) { return Expr(simplify(make(kSin, a.root_ ? a.root_ : cst(0)))); }
Expr Expr::cos(const Expr& a) { return Expr(simplify(make(kCos, a.root_ ? a.root_ : cst(0)))); }
Expr Expr::exp(const Expr& a) { return Expr(simplify(make(kExp, a.root_ ? a.root_ : cst(0)))); }

}  // namespace feec2d
