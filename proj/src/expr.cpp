#include "fivec/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

namespace fivec {

enum class Op : unsigned char {
  Const,
  Coord,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Sin,
  Cos,
  Exp,
  Sqrt,
};

struct Expression::Node {
  Op op;
  double value = 0.0;  // Const
  int axis = 0;        // Coord
  int exponent = 0;    // Pow
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

const NodePtr& zero_node() {
  static const NodePtr n = std::make_shared<Expression::Node>(Expression::Node{Op::Const, 0.0});
  return n;
}

const NodePtr& one_node() {
  static const NodePtr n = std::make_shared<Expression::Node>(Expression::Node{Op::Const, 1.0});
  return n;
}

NodePtr make_const(double v) {
  if (v == 0.0) return zero_node();
  if (v == 1.0) return one_node();
  return std::make_shared<Expression::Node>(Expression::Node{Op::Const, v});
}

bool is_const(const NodePtr& n, double* out = nullptr) {
  if (n->op != Op::Const) return false;
  if (out) *out = n->value;
  return true;
}

bool is_const_val(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b);
NodePtr make_neg(NodePtr a);

NodePtr make_add(NodePtr a, NodePtr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return make_const(x + y);
  if (is_const_val(a, 0.0)) return b;
  if (is_const_val(b, 0.0)) return a;
  return make_binary(Op::Add, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return make_const(x - y);
  if (is_const_val(b, 0.0)) return a;
  if (is_const_val(a, 0.0)) return make_neg(std::move(b));
  return make_binary(Op::Sub, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return make_const(x * y);
  if (is_const_val(a, 0.0) || is_const_val(b, 0.0)) return zero_node();
  if (is_const_val(a, 1.0)) return b;
  if (is_const_val(b, 1.0)) return a;
  return make_binary(Op::Mul, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
  double x, y;
  // Fold only when the divisor is a nonzero constant; 0/f is NOT folded to 0
  // so that singularities of f keep raising domain errors.
  if (is_const(b, &y) && y != 0.0) {
    if (is_const(a, &x)) return make_const(x / y);
    if (y == 1.0) return a;
  }
  return make_binary(Op::Div, std::move(a), std::move(b));
}

NodePtr make_neg(NodePtr a) {
  double x;
  if (is_const(a, &x)) return make_const(-x);
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Neg;
  n->a = std::move(a);
  return n;
}

NodePtr make_pow(NodePtr a, int exponent) {
  if (exponent == 0) return one_node();
  if (exponent == 1) return a;
  double x;
  if (is_const(a, &x) && !(x == 0.0 && exponent < 0)) return make_const(std::pow(x, exponent));
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->a = std::move(a);
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  double x;
  if (is_const(a, &x)) {
    switch (op) {
      case Op::Sin: return make_const(std::sin(x));
      case Op::Cos: return make_const(std::cos(x));
      case Op::Exp: return make_const(std::exp(x));
      case Op::Sqrt:
        if (x >= 0.0) return make_const(std::sqrt(x));
        break;  // leave unfolded, eval reports the domain error
      default: break;
    }
  }
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Printing precedence levels: sum 1, product 2, unary minus 3, power 4, atom 5.
int precedence(const Expression::Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Expression::Node& n, std::string& out);

void print_child(const Expression::Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Expression::Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const: out += format_double(n.value); return;
    case Op::Coord:
      out += 'x';
      out += char('0' + n.axis);
      return;
    case Op::Add:
      print_child(*n.a, 1, out);
      out += " + ";
      print_child(*n.b, 1, out);
      return;
    case Op::Sub:
      print_child(*n.a, 1, out);
      out += " - ";
      print_child(*n.b, 2, out);
      return;
    case Op::Mul:
      print_child(*n.a, 2, out);
      out += "*";
      print_child(*n.b, 3, out);
      return;
    case Op::Div:
      print_child(*n.a, 2, out);
      out += "/";
      print_child(*n.b, 4, out);
      return;
    case Op::Neg:
      out += '-';
      print_child(*n.a, 3, out);
      return;
    case Op::Pow:
      print_child(*n.a, 5, out);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    case Op::Sin: out += "sin("; break;
    case Op::Cos: out += "cos("; break;
    case Op::Exp: out += "exp("; break;
    case Op::Sqrt: out += "sqrt("; break;
  }
  print_node(*n.a, out);
  out += ')';
}

std::string node_str(const Expression::Node& n) {
  std::string s;
  print_node(n, s);
  return s;
}

double eval_node(const Expression::Node& n, const Point& p) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Coord: return p[static_cast<std::size_t>(n.axis)];
    case Op::Add: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Op::Sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Op::Mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Op::Div: {
      double num = eval_node(*n.a, p);
      double den = eval_node(*n.b, p);
      if (den == 0.0) throw DomainError("division by zero", node_str(n));
      return num / den;
    }
    case Op::Neg: return -eval_node(*n.a, p);
    case Op::Pow: {
      double base = eval_node(*n.a, p);
      if (base == 0.0 && n.exponent < 0)
        throw DomainError("zero base with negative exponent", node_str(n));
      return std::pow(base, n.exponent);
    }
    case Op::Sin: return std::sin(eval_node(*n.a, p));
    case Op::Cos: return std::cos(eval_node(*n.a, p));
    case Op::Exp: return std::exp(eval_node(*n.a, p));
    case Op::Sqrt: {
      double arg = eval_node(*n.a, p);
      if (arg < 0.0) throw DomainError("sqrt of a negative value", node_str(n));
      return std::sqrt(arg);
    }
  }
  throw std::logic_error("unreachable expression op");
}

NodePtr diff_node(const NodePtr& n, int axis) {
  switch (n->op) {
    case Op::Const: return zero_node();
    case Op::Coord: return n->axis == axis ? one_node() : zero_node();
    case Op::Add: return make_add(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::Sub: return make_sub(diff_node(n->a, axis), diff_node(n->b, axis));
    case Op::Mul:
      return make_add(make_mul(diff_node(n->a, axis), n->b),
                      make_mul(n->a, diff_node(n->b, axis)));
    case Op::Div:
      // (a/b)' = (a'·b − a·b') / b²
      return make_div(make_sub(make_mul(diff_node(n->a, axis), n->b),
                               make_mul(n->a, diff_node(n->b, axis))),
                      make_mul(n->b, n->b));
    case Op::Neg: return make_neg(diff_node(n->a, axis));
    case Op::Pow:
      return make_mul(make_mul(make_const(n->exponent), make_pow(n->a, n->exponent - 1)),
                      diff_node(n->a, axis));
    case Op::Sin: return make_mul(make_unary(Op::Cos, n->a), diff_node(n->a, axis));
    case Op::Cos: return make_neg(make_mul(make_unary(Op::Sin, n->a), diff_node(n->a, axis)));
    case Op::Exp: return make_mul(make_unary(Op::Exp, n->a), diff_node(n->a, axis));
    case Op::Sqrt:
      return make_div(diff_node(n->a, axis),
                      make_mul(make_const(2.0), make_unary(Op::Sqrt, n->a)));
  }
  throw std::logic_error("unreachable expression op");
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("syntax error: empty expression", pos_);
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError("syntax error: unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) throw ParseError(std::string("syntax error: expected ") + what, pos_);
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (consume('+'))
        e = make_add(std::move(e), parse_term());
      else if (consume('-'))
        e = make_sub(std::move(e), parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    for (;;) {
      if (consume('*'))
        e = make_mul(std::move(e), parse_factor());
      else if (consume('/'))
        e = make_div(std::move(e), parse_factor());
      else
        return e;
    }
  }

  NodePtr parse_factor() {
    bool negate = consume('-');
    NodePtr e = parse_atom();
    if (consume('^')) e = make_pow(std::move(e), parse_integer());
    return negate ? make_neg(std::move(e)) : e;
  }

  int parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = consume('-');
    skip_ws();
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("syntax error: expected integer exponent", start);
    int v = 0;
    for (std::size_t i = digits; i < pos_; ++i) v = v * 10 + (text_[i] - '0');
    return neg ? -v : v;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("syntax error: unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError("syntax error: unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to something else; not part of the number
      }
    }
    return make_const(std::stod(std::string(text_.substr(start, pos_ - start))));
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3') {
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::Coord;
      n->axis = name[1] - '0';
      return n;
    }
    Op op;
    if (name == "sin")
      op = Op::Sin;
    else if (name == "cos")
      op = Op::Cos;
    else if (name == "exp")
      op = Op::Exp;
    else if (name == "sqrt")
      op = Op::Sqrt;
    else
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    expect('(', "'(' after function name");
    NodePtr arg = parse_expr();
    expect(')', "')'");
    return make_unary(op, std::move(arg));
  }
};

}  // namespace

Expression::Expression() : node_(zero_node()) {}
Expression::Expression(double value) : node_(make_const(value)) {}

Expression Expression::constant(double value) { return Expression(make_const(value)); }

Expression Expression::coordinate(int axis) {
  if (axis < 0 || axis > 3) throw std::out_of_range("coordinate axis must be in 0..3");
  auto n = std::make_shared<Node>();
  n->op = Op::Coord;
  n->axis = axis;
  return Expression(std::move(n));
}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).run()); }

double Expression::eval(const Point& p) const { return eval_node(*node_, p); }

Expression Expression::partial(int axis) const {
  if (axis < 0 || axis > 3) throw std::out_of_range("partial axis must be in 0..3");
  return Expression(diff_node(node_, axis));
}

std::string Expression::str() const { return node_str(*node_); }

bool Expression::is_zero() const { return node_->op == Op::Const && node_->value == 0.0; }

bool Expression::is_constant(double* out) const { return is_const(node_, out); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(make_add(a.node_, b.node_));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(make_sub(a.node_, b.node_));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(make_mul(a.node_, b.node_));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(make_div(a.node_, b.node_));
}
Expression operator-(const Expression& a) { return Expression(make_neg(a.node_)); }

Expression sin(const Expression& a) { return Expression(make_unary(Op::Sin, a.node_)); }
Expression cos(const Expression& a) { return Expression(make_unary(Op::Cos, a.node_)); }
Expression exp(const Expression& a) { return Expression(make_unary(Op::Exp, a.node_)); }
Expression sqrt(const Expression& a) { return Expression(make_unary(Op::Sqrt, a.node_)); }
Expression pow(const Expression& a, int exponent) {
  return Expression(make_pow(a.node_, exponent));
}

Expression partial_dir(const Expression& e, int dir) {
  if (dir == 4) return Expression();
  return e.partial(dir);
}

}  // namespace fivec
