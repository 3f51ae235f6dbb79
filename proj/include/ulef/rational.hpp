#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace ulef {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);
/// Accepts "p", "p/q" and finite decimals such as "-0.15".
Rational parse_rational(const std::string& text);

inline int sign(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Exact solution set of A x = b: a particular solution plus a basis of the
/// null space. `consistent` is false when no solution exists.
struct LinearSolution {
  bool consistent = false;
  RationalVector particular;
  std::vector<RationalVector> kernel;
};

LinearSolution solve_linear(RationalMatrix a, RationalVector b);

/// Rank by exact row reduction.
std::size_t rank(RationalMatrix a);

Rational determinant(RationalMatrix a);

}  // namespace ulef
