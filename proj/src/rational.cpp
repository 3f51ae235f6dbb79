#include "ulef/rational.hpp"

#include "ulef/error.hpp"

namespace ulef {

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    auto dot = text.find('.');
    if (slash == std::string::npos && dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      if (digits.empty() || digits == "-" || digits.find('.') != std::string::npos) throw InputError("");
      BigInt den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(BigInt(digits), den);
    }
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in rational '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("malformed rational '" + text + "'");
  }
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

LinearSolution solve_linear(RationalMatrix a, RationalVector b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (std::size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
  auto pivots = row_reduce(a, cols);
  LinearSolution out;
  for (std::size_t r = pivots.size(); r < rows; ++r)
    if (a[r][cols] != 0) return out;
  out.consistent = true;
  out.particular.assign(cols, Rational(0));
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    out.particular[pivots[i]] = a[i][cols];
    is_pivot[pivots[i]] = true;
  }
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector k(cols, Rational(0));
    k[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) k[pivots[i]] = -a[i][free];
    out.kernel.push_back(std::move(k));
  }
  return out;
}

std::size_t rank(RationalMatrix a) {
  if (a.empty()) return 0;
  return row_reduce(a, a[0].size()).size();
}

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a[sel][col] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap(a[sel], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

}  // namespace ulef
