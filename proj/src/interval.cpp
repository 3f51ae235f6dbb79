#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ulef/error.hpp"
#include "ulef/expr.hpp"

namespace ulef {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -kInf);
  return x;
}

double up(double x, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, kInf);
  return x;
}

Interval widen(double lo, double hi, int ulps = 1) { return {down(lo, ulps), up(hi, ulps)}; }

// Does [a, b] possibly contain c + 2 k pi for an integer k?
bool may_contain_phase(const Interval& x, const Interval& c) {
  const Interval two_pi = Interval(2) * Interval::pi();
  const Interval lo = (Interval(x.lo) - c) / two_pi;
  const Interval hi = (Interval(x.hi) - c) / two_pi;
  return std::floor(hi.hi) >= std::ceil(lo.lo);
}

}  // namespace

Interval Interval::of(const Rational& r) {
  const double d = r.convert_to<double>();
  if (std::isfinite(d) && Rational(d) == r) return {d, d};
  return widen(d, d, 2);
}

Interval Interval::pi() { return {down(std::numbers::pi), up(std::numbers::pi)}; }

Interval Interval::around(double a, double r) { return widen(a - r, a + r); }

double Interval::mag() const { return std::max(std::abs(lo), std::abs(hi)); }

Interval operator+(const Interval& a, const Interval& b) { return widen(a.lo + b.lo, a.hi + b.hi); }

Interval operator-(const Interval& a, const Interval& b) { return widen(a.lo - b.hi, a.hi - b.lo); }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw ValidationError("interval division by an interval containing zero");
  const double p[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval pow(const Interval& a, int k) {
  if (k < 0) return Interval(1) / pow(a, -k);
  Interval r(1);
  for (int i = 0; i < k; ++i) r = r * a;
  if (k % 2 == 0 && a.contains_zero()) r.lo = 0;
  return r;
}

Interval sin(const Interval& a) {
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.width() >= 7) return {-1, 1};
  const double s1 = std::sin(a.lo), s2 = std::sin(a.hi);
  Interval r = widen(std::min(s1, s2), std::max(s1, s2), 2);
  const Interval half_pi = Interval::pi() / Interval(2);
  if (may_contain_phase(a, half_pi)) r.hi = 1;
  if (may_contain_phase(a, Interval(3) * half_pi)) r.lo = -1;
  r.lo = std::max(r.lo, -1.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

Interval cos(const Interval& a) { return sin(a + Interval::pi() / Interval(2)); }

Interval exp(const Interval& a) { return widen(std::exp(a.lo), std::exp(a.hi), 2); }

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace ulef
