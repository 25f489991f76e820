#include "posorbit/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace posorbit {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("at position " + std::to_string(position) + ": " + message),
      message_(message),
      position_(position) {}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational to_rational(double v, std::int64_t max_den) {
  if (!std::isfinite(v)) throw std::invalid_argument("exponent is not finite");
  // Continued-fraction convergents h/k.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (std::abs(a) > 9.0e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - v) <= 1e-12 * std::max(1.0, std::abs(v))) return make_rational(h1, k1);
    const double frac = x - a;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  throw std::invalid_argument("exponent " + std::to_string(v) + " is not a representable rational");
}

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  Rational exponent{};
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_const(const Expr& e, double v) {
  const auto c = e.constant_value();
  return c && *c == v;
}

double power(double base, Rational r) {
  if (r.is_integer()) {
    if (base == 0.0 && r.num < 0) throw DomainError("zero raised to a negative power");
    return std::pow(base, static_cast<double>(r.num));
  }
  if (!(base > 0.0)) {
    throw DomainError("non-positive base " + format_number(base) + " raised to fractional power " +
                      std::to_string(r.num) + "/" + std::to_string(r.den));
  }
  return std::pow(base, r.value());
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr Expr::make(Kind kind, Expr a, Expr b, Rational exponent) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  n->exponent = exponent;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->value = value;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::time() {
  static const Expr t = make(Kind::Time, Expr());
  return t;
}

Expr::Kind Expr::kind() const { return node_->kind; }

Expr Expr::lhs() const { return node_->a ? Expr(node_->a) : Expr(); }

Expr Expr::rhs() const { return node_->b ? Expr(node_->b) : Expr(); }

Rational Expr::exponent() const { return node_->exponent; }

std::optional<double> Expr::constant_value() const {
  if (node_->kind == Kind::Constant) return node_->value;
  return std::nullopt;
}

bool Expr::depends_on_time() const {
  switch (node_->kind) {
    case Kind::Constant:
      return false;
    case Kind::Time:
      return true;
    case Kind::Add:
    case Kind::Multiply:
      return lhs().depends_on_time() || rhs().depends_on_time();
    default:
      return lhs().depends_on_time();
  }
}

Expr operator+(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca + *cb);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::make(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr::constant(*ca * *cb);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::make(Expr::Kind::Multiply, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_const(b, 0.0)) throw DomainError("division by the constant zero");
  return a * pow(b, Rational{-1, 1});
}

Expr operator-(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr::constant(-*c);
  if (a.kind() == Expr::Kind::Negate) return a.lhs();
  return Expr::make(Expr::Kind::Negate, a);
}

Expr pow(const Expr& base, Rational exponent) {
  exponent = make_rational(exponent.num, exponent.den);
  if (exponent.num == 0) return Expr::constant(1.0);
  if (exponent == Rational{1, 1}) return base;
  if (const auto c = base.constant_value()) return Expr::constant(power(*c, exponent));
  if (base.kind() == Expr::Kind::Power) {
    // (f^a)^b = f^(ab) only when no sign information is lost.
    const Rational inner = base.exponent();
    if (inner.den == 1 && exponent.den == 1) {
      return pow(base.lhs(), Rational{inner.num * exponent.num, 1});
    }
  }
  return Expr::make(Expr::Kind::Power, base, Expr(), exponent);
}

Expr sin(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr::constant(std::sin(*c));
  return Expr::make(Expr::Kind::Sin, a);
}

Expr cos(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr::constant(std::cos(*c));
  return Expr::make(Expr::Kind::Cos, a);
}

Expr exp(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr::constant(std::exp(*c));
  return Expr::make(Expr::Kind::Exp, a);
}

namespace {

double eval_node(const Expr::Node& n, double t);

}  // namespace

double Expr::eval(double t) const { return eval_node(*node_, t); }

namespace {

double eval_node(const Expr::Node& n, double t) {
  using Kind = Expr::Kind;
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Time:
      return t;
    case Kind::Negate:
      return -eval_node(*n.a, t);
    case Kind::Add:
      return eval_node(*n.a, t) + eval_node(*n.b, t);
    case Kind::Multiply:
      return eval_node(*n.a, t) * eval_node(*n.b, t);
    case Kind::Power:
      return power(eval_node(*n.a, t), n.exponent);
    case Kind::Sin:
      return std::sin(eval_node(*n.a, t));
    case Kind::Cos:
      return std::cos(eval_node(*n.a, t));
    case Kind::Exp:
      return std::exp(eval_node(*n.a, t));
  }
  return 0.0;
}

}  // namespace

Expr Expr::derivative() const {
  const Node& n = *node_;
  const Expr a = lhs();
  const Expr b = rhs();
  switch (n.kind) {
    case Kind::Constant:
      return Expr::constant(0.0);
    case Kind::Time:
      return Expr::constant(1.0);
    case Kind::Negate:
      return -a.derivative();
    case Kind::Add:
      return a.derivative() + b.derivative();
    case Kind::Multiply:
      return a.derivative() * b + a * b.derivative();
    case Kind::Power: {
      const Rational r = n.exponent;
      const Rational lowered = make_rational(r.num - r.den, r.den);
      return Expr::constant(r.value()) * pow(a, lowered) * a.derivative();
    }
    case Kind::Sin:
      return cos(a) * a.derivative();
    case Kind::Cos:
      return -(sin(a) * a.derivative());
    case Kind::Exp:
      return *this * a.derivative();
  }
  return Expr();
}

std::string Expr::to_string() const {
  const Node& n = *node_;
  const Expr a = lhs();
  const Expr b = rhs();
  switch (n.kind) {
    case Kind::Constant:
      return n.value < 0 ? "(" + format_number(n.value) + ")" : format_number(n.value);
    case Kind::Time:
      return "t";
    case Kind::Negate:
      return "(-" + a.to_string() + ")";
    case Kind::Add:
      return "(" + a.to_string() + " + " + b.to_string() + ")";
    case Kind::Multiply:
      return a.to_string() + "*" + b.to_string();
    case Kind::Power:
      if (n.exponent.den == 1) return "(" + a.to_string() + ")^(" + std::to_string(n.exponent.num) + ")";
      return "(" + a.to_string() + ")^(" + std::to_string(n.exponent.num) + "/" +
             std::to_string(n.exponent.den) + ")";
    case Kind::Sin:
      return "sin(" + a.to_string() + ")";
    case Kind::Cos:
      return "cos(" + a.to_string() + ")";
    case Kind::Exp:
      return "exp(" + a.to_string() + ")";
  }
  return "?";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary_term();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary_term();
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        Expr rhs = unary_term();
        if (is_const(rhs, 0.0)) throw ParseError("division by zero", at);
        lhs = lhs / rhs;
      } else {
        return lhs;
      }
    }
  }

  Expr unary_term() {
    if (accept('-')) return -unary_term();
    if (accept('+')) return unary_term();
    return power_term();
  }

  Expr power_term() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    const Expr ex = unary_term();
    const auto value = ex.constant_value();
    if (!value) throw ParseError("exponent must be a constant", at);
    Rational r;
    try {
      r = to_rational(*value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
    try {
      return pow(base, r);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), at);
    }
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "t") return Expr::time();
      if (name == "pi") return Expr::constant(std::numbers::pi);
      if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
        expect('(');
        const std::size_t arg_at = pos_;
        Expr arg = expression();
        expect(')');
        if (name == "sin") return sin(arg);
        if (name == "cos") return cos(arg);
        if (name == "exp") return exp(arg);
        try {
          return pow(arg, Rational{1, 2});
        } catch (const DomainError& e) {
          throw ParseError(e.what(), arg_at);
        }
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) throw ParseError("malformed number", start);
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace posorbit
