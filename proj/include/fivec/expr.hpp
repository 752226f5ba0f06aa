#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fivec {

/// A point in the four space-time coordinates x0..x3.
using Point = std::array<double, 4>;

/// Parse failure; `offset` is the byte position in the input text.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, std::size_t offset)
      : std::runtime_error(std::move(msg)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Evaluation failure (division by zero, sqrt of a negative value, 0^-n);
/// `subterm` is the printed form of the offending subexpression.
class DomainError : public std::runtime_error {
public:
  DomainError(std::string msg, std::string subterm)
      : std::runtime_error(std::move(msg)), subterm_(std::move(subterm)) {}
  const std::string& subterm() const { return subterm_; }

private:
  std::string subterm_;
};

/// Exact symbolic scalar field over x0..x3.
///
/// Immutable value type; nodes are shared, so copies are cheap and
/// expressions may be evaluated concurrently. Construction applies constant
/// folding and the 0/1 identities, nothing more: correctness is judged by
/// evaluation, not by canonical form.
class Expression {
public:
  /// The constant 0.
  Expression();
  Expression(double value);

  static Expression constant(double value);
  static Expression coordinate(int axis);  // axis in 0..3

  /// Parse per the grammar:
  ///   expr   := term (('+'|'-') term)*
  ///   term   := factor (('*'|'/') factor)*
  ///   factor := ['-'] atom ['^' integer]
  ///   atom   := number | 'x0'..'x3' | func '(' expr ')' | '(' expr ')'
  ///   func   := 'sin'|'cos'|'exp'|'sqrt'
  /// Empty input is a syntax error, not zero.
  static Expression parse(std::string_view text);

  double eval(const Point& p) const;

  /// Exact partial derivative with respect to x<axis>, axis in 0..3.
  Expression partial(int axis) const;

  /// Printed form; parse(str()) evaluates identically.
  std::string str() const;

  /// Structurally the constant 0.
  bool is_zero() const;
  /// Structurally a constant; writes its value to `out` if non-null.
  bool is_constant(double* out = nullptr) const;

  friend Expression operator+(const Expression&, const Expression&);
  friend Expression operator-(const Expression&, const Expression&);
  friend Expression operator*(const Expression&, const Expression&);
  friend Expression operator/(const Expression&, const Expression&);
  friend Expression operator-(const Expression&);
  Expression& operator+=(const Expression& o) { return *this = *this + o; }
  Expression& operator-=(const Expression& o) { return *this = *this - o; }
  Expression& operator*=(const Expression& o) { return *this = *this * o; }

  friend Expression sin(const Expression&);
  friend Expression cos(const Expression&);
  friend Expression exp(const Expression&);
  friend Expression sqrt(const Expression&);
  friend Expression pow(const Expression&, int exponent);

  struct Node;  // implementation detail, defined in expr.cpp

private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Derivative along basis direction A in 0..4. The fifth direction of a
/// standard basis does not correspond to any space-time direction, so the
/// derivative of every scalar field along it is identically zero. All
/// modules share this convention.
Expression partial_dir(const Expression& e, int dir);

/// Complex scalar field as a (re, im) pair of exact expressions.
struct ComplexExpression {
  Expression re;
  Expression im;

  ComplexExpression() = default;
  ComplexExpression(double r) : re(r) {}
  ComplexExpression(const Expression& r) : re(r) {}
  ComplexExpression(Expression r, Expression i) : re(std::move(r)), im(std::move(i)) {}
  ComplexExpression(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  /// i (the imaginary unit).
  static ComplexExpression unit_im() { return {Expression(0.0), Expression(1.0)}; }

  std::complex<double> eval(const Point& p) const { return {re.eval(p), im.eval(p)}; }
  ComplexExpression partial(int axis) const { return {re.partial(axis), im.partial(axis)}; }
  ComplexExpression conj() const { return {re, -im}; }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend ComplexExpression operator+(const ComplexExpression& a, const ComplexExpression& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexExpression operator-(const ComplexExpression& a, const ComplexExpression& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexExpression operator-(const ComplexExpression& a) { return {-a.re, -a.im}; }
  friend ComplexExpression operator*(const ComplexExpression& a, const ComplexExpression& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexExpression operator/(const ComplexExpression& a, const ComplexExpression& b) {
    Expression denom = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom};
  }
  ComplexExpression& operator+=(const ComplexExpression& o) { return *this = *this + o; }
  ComplexExpression& operator-=(const ComplexExpression& o) { return *this = *this - o; }
  ComplexExpression& operator*=(const ComplexExpression& o) { return *this = *this * o; }
};

inline ComplexExpression partial_dir(const ComplexExpression& e, int dir) {
  return {partial_dir(e.re, dir), partial_dir(e.im, dir)};
}

}  // namespace fivec
