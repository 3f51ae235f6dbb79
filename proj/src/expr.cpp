#include <cctype>
#include <cmath>
#include <numbers>

#include "ulef/error.hpp"
#include "ulef/expr.hpp"

namespace ulef {

enum class Op { Const, Var, Pi, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

struct ExprNode {
  Op op = Op::Const;
  Rational value;   // Const
  int index = 0;    // Var, or the exponent of Pow
  Expr a, b;

  static Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }
  // A default-constructed Expr has no node and reads as the constant 0.
  static const ExprNode& of(const Expr& e) {
    static const ExprNode zero{};
    return e.node_ ? *e.node_ : zero;
  }
};

namespace {

Expr unary(Op op, const Expr& a) {
  ExprNode n;
  n.op = op;
  n.a = a;
  return ExprNode::make(std::move(n));
}

Expr binary(Op op, const Expr& a, const Expr& b) {
  ExprNode n;
  n.op = op;
  n.a = a;
  n.b = b;
  return ExprNode::make(std::move(n));
}

bool is_const(const Expr& e, Rational* v = nullptr) {
  const auto& n = ExprNode::of(e);
  if (n.op != Op::Const) return false;
  if (v) *v = n.value;
  return true;
}

bool is_value(const Expr& e, int v) {
  Rational c;
  return is_const(e, &c) && c == v;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names) : text_(text), names_(names) {}

  Expr run() {
    Expr e = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("expression '" + text_ + "': " + why + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) e = e + product();
      else if (eat('-')) e = e - product();
      else return e;
    }
  }

  Expr product() {
    Expr e = signed_factor();
    for (;;) {
      if (eat('*')) e = e * signed_factor();
      else if (eat('/')) e = e / signed_factor();
      else return e;
    }
  }

  Expr signed_factor() {
    if (eat('-')) return -signed_factor();
    if (eat('+')) return signed_factor();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!eat('^')) return base;
    skip();
    bool negative = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponents must be integers");
    const int k = std::stoi(text_.substr(start, pos_ - start));
    return pow(base, negative ? -k : k);
  }

  Expr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (eat('(')) {
      Expr e = sum();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string word = text_.substr(start, pos_ - start);
      if (word == "pi") return Expr::pi();
      if (word == "sin" || word == "cos" || word == "exp") {
        if (!eat('(')) fail("'" + word + "' needs an argument in parentheses");
        Expr arg = sum();
        if (!eat(')')) fail("missing ')'");
        return word == "sin" ? sin(arg) : word == "cos" ? cos(arg) : exp(arg);
      }
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == word) return Expr::variable(static_cast<int>(i));
      fail("unknown symbol '" + word + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // Decimal literals are read exactly: 0.2 is 1/5.
  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    const std::string lit = text_.substr(start, pos_ - start);
    const auto dot = lit.find('.');
    if (lit.find('.', dot + 1) != std::string::npos && dot != std::string::npos) fail("malformed number");
    BigInt num = 0, den = 1;
    for (char d : lit) {
      if (d == '.') continue;
      num = num * 10 + (d - '0');
    }
    if (dot != std::string::npos)
      for (std::size_t i = dot + 1; i < lit.size(); ++i) den *= 10;
    if (lit == ".") fail("malformed number");
    return Expr::constant(Rational(num, den));
  }

  const std::string& text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

}  // namespace

Expr Expr::constant(const Rational& c) {
  ExprNode n;
  n.op = Op::Const;
  n.value = c;
  return ExprNode::make(std::move(n));
}

Expr Expr::variable(int i) {
  ExprNode n;
  n.op = Op::Var;
  n.index = i;
  return ExprNode::make(std::move(n));
}

Expr Expr::pi() {
  ExprNode n;
  n.op = Op::Pi;
  return ExprNode::make(std::move(n));
}

Expr Expr::parse(const std::string& text, const std::vector<std::string>& names) {
  return Parser(text, names).run();
}

Expr operator+(const Expr& a, const Expr& b) {
  Rational x, y;
  if (is_const(a, &x) && is_const(b, &y)) return Expr::constant(x + y);
  if (is_value(a, 0)) return b;
  if (is_value(b, 0)) return a;
  return binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  Rational x, y;
  if (is_const(a, &x) && is_const(b, &y)) return Expr::constant(x - y);
  if (is_value(b, 0)) return a;
  if (is_value(a, 0)) return -b;
  return binary(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  Rational x, y;
  if (is_const(a, &x) && is_const(b, &y)) return Expr::constant(x * y);
  if (is_value(a, 0) || is_value(b, 0)) return Expr::constant(0);
  if (is_value(a, 1)) return b;
  if (is_value(b, 1)) return a;
  return binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  Rational x, y;
  if (is_const(b, &y) && y == 0) throw InputError("expression divides by the constant 0");
  if (is_const(a, &x) && is_const(b, &y)) return Expr::constant(x / y);
  if (is_value(a, 0)) return Expr::constant(0);
  if (is_value(b, 1)) return a;
  return binary(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  Rational x;
  if (is_const(a, &x)) return Expr::constant(-x);
  return unary(Op::Neg, a);
}

Expr pow(const Expr& a, int k) {
  if (k == 0) return Expr::constant(1);
  if (k == 1) return a;
  Rational x;
  if (is_const(a, &x)) {
    Rational r = 1;
    for (int i = 0; i < std::abs(k); ++i) r *= x;
    return Expr::constant(k > 0 ? r : 1 / r);
  }
  ExprNode n;
  n.op = Op::Pow;
  n.a = a;
  n.index = k;
  return ExprNode::make(std::move(n));
}

Expr sin(const Expr& a) { return is_value(a, 0) ? Expr::constant(0) : unary(Op::Sin, a); }
Expr cos(const Expr& a) { return is_value(a, 0) ? Expr::constant(1) : unary(Op::Cos, a); }
Expr exp(const Expr& a) { return is_value(a, 0) ? Expr::constant(1) : unary(Op::Exp, a); }

double Expr::eval(const std::vector<double>& x) const {
  const auto& n = ExprNode::of(*this);
  switch (n.op) {
    case Op::Const: return n.value.convert_to<double>();
    case Op::Var: return x.at(n.index);
    case Op::Pi: return std::numbers::pi;
    case Op::Add: return n.a.eval(x) + n.b.eval(x);
    case Op::Sub: return n.a.eval(x) - n.b.eval(x);
    case Op::Mul: return n.a.eval(x) * n.b.eval(x);
    case Op::Div: return n.a.eval(x) / n.b.eval(x);
    case Op::Neg: return -n.a.eval(x);
    case Op::Pow: return std::pow(n.a.eval(x), n.index);
    case Op::Sin: return std::sin(n.a.eval(x));
    case Op::Cos: return std::cos(n.a.eval(x));
    case Op::Exp: return std::exp(n.a.eval(x));
  }
  throw InternalError("unknown expression node");
}

Interval Expr::eval(const IntervalVector& x) const {
  const auto& n = ExprNode::of(*this);
  switch (n.op) {
    case Op::Const: return Interval::of(n.value);
    case Op::Var: return x.at(n.index);
    case Op::Pi: return Interval::pi();
    case Op::Add: return n.a.eval(x) + n.b.eval(x);
    case Op::Sub: return n.a.eval(x) - n.b.eval(x);
    case Op::Mul: return n.a.eval(x) * n.b.eval(x);
    case Op::Div: return n.a.eval(x) / n.b.eval(x);
    case Op::Neg: return -n.a.eval(x);
    case Op::Pow: return ulef::pow(n.a.eval(x), n.index);
    case Op::Sin: return ulef::sin(n.a.eval(x));
    case Op::Cos: return ulef::cos(n.a.eval(x));
    case Op::Exp: return ulef::exp(n.a.eval(x));
  }
  throw InternalError("unknown expression node");
}

Expr Expr::derivative(int var) const {
  const auto& n = ExprNode::of(*this);
  switch (n.op) {
    case Op::Const:
    case Op::Pi: return constant(0);
    case Op::Var: return constant(n.index == var ? 1 : 0);
    case Op::Add: return n.a.derivative(var) + n.b.derivative(var);
    case Op::Sub: return n.a.derivative(var) - n.b.derivative(var);
    case Op::Mul: return n.a.derivative(var) * n.b + n.a * n.b.derivative(var);
    case Op::Div: return (n.a.derivative(var) * n.b - n.a * n.b.derivative(var)) / pow(n.b, 2);
    case Op::Neg: return -n.a.derivative(var);
    case Op::Pow: return constant(n.index) * pow(n.a, n.index - 1) * n.a.derivative(var);
    case Op::Sin: return cos(n.a) * n.a.derivative(var);
    case Op::Cos: return -(sin(n.a) * n.a.derivative(var));
    case Op::Exp: return *this * n.a.derivative(var);
  }
  throw InternalError("unknown expression node");
}

bool Expr::is_zero() const { return is_value(*this, 0); }

std::string Expr::str(const std::vector<std::string>& names) const {
  const auto& n = ExprNode::of(*this);
  auto wrap = [&](const Expr& e, int parent, bool right) {
    const int p = precedence(ExprNode::of(e).op);
    std::string s = e.str(names);
    Rational c;
    const bool negative_const = is_const(e, &c) && (c < 0 || denominator(c) != 1);
    if (p < parent || (right && p == parent) || (negative_const && parent >= 2)) return "(" + s + ")";
    return s;
  };
  const int me = precedence(n.op);
  switch (n.op) {
    case Op::Const: return to_string(n.value);
    case Op::Var: return names.at(n.index);
    case Op::Pi: return "pi";
    case Op::Add: return wrap(n.a, me, false) + " + " + wrap(n.b, me, false);
    case Op::Sub: return wrap(n.a, me, false) + " - " + wrap(n.b, me, true);
    case Op::Mul: return wrap(n.a, me, false) + "*" + wrap(n.b, me, true);
    case Op::Div: return wrap(n.a, me, false) + "/" + wrap(n.b, me, true);
    case Op::Neg: return "-" + wrap(n.a, me, false);
    case Op::Pow: return wrap(n.a, me + 1, false) + "^" + std::to_string(n.index);
    case Op::Sin: return "sin(" + n.a.str(names) + ")";
    case Op::Cos: return "cos(" + n.a.str(names) + ")";
    case Op::Exp: return "exp(" + n.a.str(names) + ")";
  }
  throw InternalError("unknown expression node");
}

std::vector<std::string> variable_names(int n) {
  if (n <= 3) {
    std::vector<std::string> v{"x", "y", "z"};
    v.resize(n);
    return v;
  }
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

}  // namespace ulef
