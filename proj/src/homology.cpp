#include <algorithm>
#include <string>

#include "ulef/chain.hpp"
#include "ulef/error.hpp"

namespace ulef {

namespace {

RationalMatrix boundary_matrix(const QuotientComplex& q, int k) {
  RationalMatrix m(q.count(k - 1), RationalVector(q.count(k), Rational(0)));
  for (std::size_t s = 0; s < q.count(k); ++s)
    for (int i = 0; i <= k; ++i) m[q.face(k, static_cast<int>(s), i)][s] += (i % 2 ? -1 : 1);
  return m;
}

RationalMatrix columns_to_matrix(const std::vector<RationalVector>& cols, std::size_t rows) {
  RationalMatrix m(rows, RationalVector(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) m[r][c] = cols[c][r];
  return m;
}

RationalVector mat_vec(const RationalMatrix& m, const RationalVector& x) {
  RationalVector y(m.size(), Rational(0));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c)
      if (x[c] != 0) y[r] += m[r][c] * x[c];
  return y;
}

int permutation_sign(std::vector<int> v) {
  int s = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) s = -s;
  return s;
}

}  // namespace

Homology quotient_homology(const QuotientComplex& q) {
  const int n = q.dimension();
  Homology h;
  h.boundary.resize(n + 2);
  for (int k = 1; k <= n; ++k) h.boundary[k] = boundary_matrix(q, k);
  for (int k = 0; k <= n; ++k) {
    const std::size_t cells = q.count(k);
    // Cycles: kernel of d_k (everything in degree 0).
    std::vector<RationalVector> cycles;
    if (k == 0) {
      for (std::size_t i = 0; i < cells; ++i) {
        RationalVector e(cells, Rational(0));
        e[i] = 1;
        cycles.push_back(e);
      }
    } else {
      cycles = solve_linear(h.boundary[k], RationalVector(q.count(k - 1), Rational(0))).kernel;
    }
    // Boundaries: columns of d_{k+1}; extend a basis of them by cycles.
    std::vector<RationalVector> span;
    if (k < n)
      for (std::size_t c = 0; c < q.count(k + 1); ++c) {
        RationalVector col(cells);
        for (std::size_t r = 0; r < cells; ++r) col[r] = h.boundary[k + 1][r][c];
        span.push_back(col);
      }
    std::size_t current = span.empty() ? 0 : rank(columns_to_matrix(span, cells));
    std::vector<RationalVector> reps;
    for (const auto& z : cycles) {
      span.push_back(z);
      const std::size_t r = rank(columns_to_matrix(span, cells));
      if (r > current) {
        current = r;
        reps.push_back(z);
      } else {
        span.pop_back();
      }
    }
    h.betti.push_back(static_cast<int>(reps.size()));
    h.basis.push_back(std::move(reps));
  }
  return h;
}

long long lefschetz_number_quotient(const QuotientComplex& q, const Subdivision& sd, const std::vector<int>& vertex_map) {
  const QuotientComplex& s = sd.complex;
  const int n = q.dimension();
  if (static_cast<int>(vertex_map.size()) != s.num_vertices())
    throw InputError("vertex map has " + std::to_string(vertex_map.size()) + " entries, expected " +
                     std::to_string(s.num_vertices()));
  for (int v : vertex_map)
    if (v < 0 || v >= q.num_vertices()) throw InputError("vertex map hits an unknown vertex");

  // f_# : C_k(Sd q) -> C_k(q); degenerate images vanish.
  std::vector<RationalMatrix> push(n + 1);
  for (int k = 0; k <= n; ++k) {
    push[k].assign(q.count(k), RationalVector(s.count(k), Rational(0)));
    for (std::size_t id = 0; id < s.count(k); ++id) {
      std::vector<int> image;
      for (int v : s.cell(k, static_cast<int>(id))) image.push_back(vertex_map[v]);
      Simplex sorted = image;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      const int target = q.index(sorted);
      if (target < 0) throw InputError("vertex map is not simplicial: a simplex image is not a simplex");
      if (static_cast<int>(sorted.size()) < k + 1) continue;
      push[k][target][id] += permutation_sign(image);
    }
  }
  // Subdivision chain map C_k(q) -> C_k(Sd q): every k-simplex of the
  // subdivision carried by a k-simplex, signed by relative orientation.
  std::vector<RationalMatrix> sub(n + 1);
  for (int k = 0; k <= n; ++k) {
    sub[k].assign(s.count(k), RationalVector(q.count(k), Rational(0)));
    for (std::size_t id = 0; id < s.count(k); ++id) {
      auto coords = carrier_coordinates(q, sd, k, static_cast<int>(id));
      if (!coords) continue;
      const int d = sign(determinant(coords->second));
      if (d == 0) throw InternalError("degenerate subdivided simplex");
      sub[k][id][coords->first] = d;
    }
  }

  Homology h = quotient_homology(q);
  long long chain_trace = 0, homology_trace = 0;
  for (int k = 0; k <= n; ++k) {
    const std::size_t cells = q.count(k);
    RationalMatrix f(cells, RationalVector(cells, Rational(0)));
    for (std::size_t c = 0; c < cells; ++c) {
      RationalVector e(cells, Rational(0));
      e[c] = 1;
      RationalVector img = mat_vec(push[k], mat_vec(sub[k], e));
      for (std::size_t r = 0; r < cells; ++r) f[r][c] = img[r];
    }
    Rational tr = 0;
    for (std::size_t i = 0; i < cells; ++i) tr += f[i][i];
    // Homology trace: express f(z_j) in the basis {z} modulo boundaries.
    const auto& z = h.basis[k];
    Rational htr = 0;
    if (!z.empty()) {
      std::vector<RationalVector> cols = z;
      if (k < n)
        for (std::size_t c = 0; c < q.count(k + 1); ++c) {
          RationalVector col(cells);
          for (std::size_t r = 0; r < cells; ++r) col[r] = h.boundary[k + 1][r][c];
          cols.push_back(col);
        }
      const RationalMatrix a = columns_to_matrix(cols, cells);
      for (std::size_t j = 0; j < z.size(); ++j) {
        auto sol = solve_linear(a, mat_vec(f, z[j]));
        if (!sol.consistent) throw InternalError("induced map does not preserve cycles");
        htr += sol.particular[j];
      }
    }
    if (denominator(tr) != 1 || denominator(htr) != 1) throw InternalError("non-integral trace");
    const long long sgn = k % 2 ? -1 : 1;
    chain_trace += sgn * static_cast<long long>(numerator(tr));
    homology_trace += sgn * static_cast<long long>(numerator(htr));
  }
  if (chain_trace != homology_trace)
    throw InternalError("homology and chain-level traces disagree (" + std::to_string(homology_trace) + " vs " +
                        std::to_string(chain_trace) + ")");
  return homology_trace;
}

}  // namespace ulef
