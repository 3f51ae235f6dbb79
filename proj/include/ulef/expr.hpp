#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ulef/rational.hpp"

namespace ulef {

/// Closed interval with outward-rounded double endpoints.
struct Interval {
  double lo = 0;
  double hi = 0;

  Interval() = default;
  Interval(double a) : lo(a), hi(a) {}
  Interval(double a, double b) : lo(a), hi(b) {}

  static Interval of(const Rational& r);
  static Interval pi();
  /// [a - r, a + r], widened outward.
  static Interval around(double a, double r);

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  double mag() const;
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool subset_interior(const Interval& o) const { return o.lo < lo && hi < o.hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& a, int k);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);
Interval hull(const Interval& a, const Interval& b);

using IntervalVector = std::vector<Interval>;

struct ExprNode;

/// Immutable expression tree over variables x0..x(n-1) with exact rational
/// constants, pi, + - * / ^ (integer exponents), sin, cos and exp.
class Expr {
 public:
  Expr() = default;
  static Expr constant(const Rational& c);
  static Expr variable(int i);
  static Expr pi();

  /// Variables are named by `names` (for example {"x", "y"}).
  static Expr parse(const std::string& text, const std::vector<std::string>& names);

  double eval(const std::vector<double>& x) const;
  Interval eval(const IntervalVector& x) const;
  Expr derivative(int var) const;
  bool is_zero() const;
  std::string str(const std::vector<std::string>& names) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int k);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
  friend struct ExprNode;
};

/// Default variable names for dimension n: x, y, z for n <= 3, else x1..xn.
std::vector<std::string> variable_names(int n);

}  // namespace ulef
