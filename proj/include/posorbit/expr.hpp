#pragma once

/**
 * @file expr.hpp
 * @brief Immutable expression trees in one variable t.
 *
 * Coefficients of the equations are closed-form functions of time built from
 * constants, t, +, *, unary minus, rational powers and sin/cos/exp. Trees are
 * shared and never mutated, so an Expr can be copied and evaluated from any
 * thread.
 */

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace posorbit {

/// Raised when an expression is evaluated outside its domain
/// (fractional power of a non-positive base, zero to a negative power).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

/// Exponent stored as an exact integer ratio with den > 0 and gcd(num, den) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

/// Best rational approximation with denominator <= max_den. Throws
/// std::invalid_argument when no such ratio reproduces v to 1e-12 relative.
Rational to_rational(double v, std::int64_t max_den = 1'000'000);

class Expr {
 public:
  enum class Kind { Constant, Time, Negate, Add, Multiply, Power, Sin, Cos, Exp };

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr time();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, Rational exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

  double eval(double t) const;
  Expr derivative() const;

  Kind kind() const;
  /// Value when the tree does not depend on t.
  std::optional<double> constant_value() const;
  bool depends_on_time() const;
  std::string to_string() const;

  /// Children of composite nodes; the constant 0 for missing slots.
  Expr lhs() const;
  Expr rhs() const;
  Rational exponent() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  static Expr make(Kind kind, Expr a, Expr b = Expr(), Rational exponent = {});
  std::shared_ptr<const Node> node_;
};

/// Parses infix text: `+ - * / ^`, `sin cos exp sqrt`, the variable `t`,
/// the constant `pi` and decimal literals. Exponents must be constant.
Expr parse_expr(std::string_view text);

}  // namespace posorbit
