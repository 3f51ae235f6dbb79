#include "ulef/fixtures.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "ulef/error.hpp"

namespace ulef {

namespace {

BigInt floor_of(const Rational& r) {
  BigInt num = numerator(r), den = denominator(r);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int orientation_sign(const std::vector<std::vector<Rational>>& points) {
  const std::size_t n = points.size() - 1;
  RationalMatrix m(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = points[i + 1][j] - points[0][j];
  return sign(determinant(m));
}

}  // namespace

QuotientComplex tetrahedron_boundary() {
  const std::vector<std::vector<int>> pos{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<Simplex> tops{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  std::map<Simplex, int> orientation;
  for (const auto& t : tops) {
    RationalMatrix m(3, RationalVector(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = pos[t[i]][j];
    orientation[t] = sign(determinant(m));
  }
  return QuotientComplex::from_top_simplices(MarkedGroup::trivial(), 4, tops, orientation, {},
                                             {{0, 1}, {0, 2}, {0, 3}});
}

Octahedron octahedron() {
  Octahedron o;
  o.coordinates = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Simplex> tops;
  std::map<Simplex, int> orientation;
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) {
        Simplex t{x, y, z};
        RationalMatrix m(3, RationalVector(3));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m[i][j] = o.coordinates[t[i]][j];
        tops.push_back(t);
        orientation[t] = sign(determinant(m));
      }
  o.complex = QuotientComplex::from_top_simplices(MarkedGroup::trivial(), 6, tops, orientation, {},
                                                  {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}});
  return o;
}

QuotientComplex klein_bottle() {
  auto id = [](int x, int y) {
    if (x == 3) {
      x = 0;
      y = -y;
    }
    y = ((y % 3) + 3) % 3;
    return x * 3 + y;
  };
  std::vector<Simplex> tops;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      tops.push_back({id(x, y), id(x + 1, y), id(x + 1, y + 1)});
      tops.push_back({id(x, y), id(x, y + 1), id(x + 1, y + 1)});
    }
  std::vector<std::pair<int, int>> tree;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (y + 1 < 3) tree.push_back({id(x, y), id(x, y + 1)});
      else if (x + 1 < 3) tree.push_back({id(x, 0), id(x + 1, 0)});
    }
  return QuotientComplex::from_top_simplices(MarkedGroup::trivial(), 9, tops, {}, {}, tree);
}

QuotientComplex genus2_surface() {
  MarkedGroup g = MarkedGroup::surface(2);
  // Letters of the relator a1 b1 A1 B1 a2 b2 A2 B2 (generator s: letter 2s).
  const Word relator{0, 2, 1, 3, 4, 6, 5, 7};
  std::vector<Element> prefix{g.identity()};
  for (Letter l : relator) prefix.push_back(g.multiply(prefix.back(), g.letter(l)));

  // Boundary point j = 3k + r on side k: (deck, class).
  std::vector<std::pair<Element, int>> boundary;
  for (int k = 0; k < 8; ++k) {
    const Letter l = relator[k];
    const int s = l / 2;
    boundary.push_back({prefix[k], 0});
    if (l % 2 == 0) {
      boundary.push_back({prefix[k], 1 + 2 * s});
      boundary.push_back({prefix[k], 2 + 2 * s});
    } else {
      boundary.push_back({prefix[k + 1], 2 + 2 * s});
      boundary.push_back({prefix[k + 1], 1 + 2 * s});
    }
  }
  auto ring = [](int i) { return 9 + (i % 12); };
  const int center = 21;
  auto bpt = [&](int j) { return boundary[j % 24]; };

  std::vector<std::vector<std::pair<Element, int>>> triangles;
  for (int i = 0; i < 12; ++i) {
    const std::pair<Element, int> r{g.identity(), ring(i)}, r1{g.identity(), ring(i + 1)};
    triangles.push_back({bpt(2 * i), bpt(2 * i + 1), r});
    triangles.push_back({bpt(2 * i + 1), bpt(2 * i + 2), r});
    triangles.push_back({bpt(2 * i + 2), r, r1});
    triangles.push_back({r, r1, {g.identity(), center}});
  }
  std::map<std::pair<int, int>, Element> labels;
  std::vector<Simplex> tops;
  for (auto& tri : triangles) {
    Simplex t;
    for (auto& [d, v] : tri) t.push_back(v);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const auto& [du, u] = tri[a];
        const auto& [dv, v] = tri[b];
        if (u >= v) continue;
        Element l = g.multiply(g.inverse(du), dv);
        auto [it, fresh] = labels.emplace(std::make_pair(u, v), l);
        if (!fresh && it->second != l) throw InternalError("inconsistent genus-2 edge labels");
      }
    tops.push_back(t);
  }
  std::vector<std::pair<int, int>> tree;
  for (int i = 0; i < 11; ++i) tree.push_back({ring(i), ring(i + 1)});
  tree.push_back({center, ring(0)});
  // Each side point hangs off the corner through the side where its letter
  // is positive; those lifts share the corner's deck element.
  tree.push_back({0, ring(0)});
  for (int k = 0; k < 8; ++k)
    if (relator[k] % 2 == 0) {
      tree.push_back({0, boundary[3 * k + 1].second});
      tree.push_back({boundary[3 * k + 1].second, boundary[3 * k + 2].second});
    }
  for (auto it = labels.begin(); it != labels.end();) {
    if (g.is_identity(it->second)) it = labels.erase(it);
    else ++it;
  }
  QuotientComplex q = QuotientComplex::from_top_simplices(g, 22, tops, {}, labels, tree);
  auto signs = q.coherent_orientation();
  if (!signs) throw InternalError("genus-2 triangulation is not orientable");
  q.set_orientation(*signs);
  return q;
}

Torus::Torus(TorusSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.dimension;
  if (n < 1 || n > 3) throw InputError("torus dimension must be 1, 2 or 3");
  if (static_cast<int>(spec_.basis.size()) != n) throw InputError("torus lattice basis has the wrong size");
  if (spec_.offset.empty()) spec_.offset.assign(n, Rational(0));
  if (static_cast<int>(spec_.offset.size()) != n) throw InputError("torus offset has the wrong size");
  if (spec_.scale <= 0) throw InputError("torus scale must be positive");

  RationalMatrix b(n, RationalVector(n));
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) b[r][c] = spec_.basis[c].at(r);
  const Rational det = determinant(b);
  if (det == 0) throw InputError("torus lattice basis is singular");
  basis_inverse_.assign(n, RationalVector(n));
  for (int c = 0; c < n; ++c) {
    RationalVector e(n, Rational(0));
    e[c] = 1;
    auto sol = solve_linear(b, e);
    for (int r = 0; r < n; ++r) basis_inverse_[r][c] = sol.particular[r];
  }

  hnf_ = spec_.basis;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      while (hnf_[j][i] != 0) {
        const int q = hnf_[i][i] / hnf_[j][i];
        for (int r = 0; r < n; ++r) hnf_[i][r] -= q * hnf_[j][r];
        std::swap(hnf_[i], hnf_[j]);
      }
    }
    if (hnf_[i][i] < 0)
      for (int r = 0; r < n; ++r) hnf_[i][r] = -hnf_[i][r];
  }

  std::vector<std::pair<int, int>> tree;
  rep_.push_back(std::vector<int>(n, 0));
  class_of_[canonical(rep_[0])] = 0;
  for (std::size_t head = 0; head < rep_.size(); ++head) {
    for (int i = 0; i < n; ++i)
      for (int s : {1, -1}) {
        std::vector<int> p = rep_[head];
        p[i] += s;
        auto key = canonical(p);
        if (class_of_.count(key)) continue;
        class_of_[key] = static_cast<int>(rep_.size());
        tree.push_back({static_cast<int>(head), static_cast<int>(rep_.size())});
        rep_.push_back(p);
      }
  }
  const long long expected = std::abs(static_cast<long long>(det));
  if (static_cast<long long>(rep_.size()) != expected) throw InternalError("torus vertex enumeration mismatch");

  const MarkedGroup group = spec_.group ? *spec_.group : MarkedGroup::free_abelian(n);
  auto deck = [&](const std::vector<int>& lambda) {
    if (!spec_.group) return Element{lambda};
    Element e = group.identity();
    for (int i = 0; i < n; ++i) {
      Element p = spec_.basis_images.at(i);
      if (lambda[i] < 0) p = group.inverse(p);
      for (int k = 0; k < std::abs(lambda[i]); ++k) e = group.multiply(e, p);
    }
    return e;
  };

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Simplex> tops;
  std::map<Simplex, int> orientation;
  std::map<std::pair<int, int>, Element> labels;
  for (const auto& base : rep_) {
    std::vector<int> pi = perm;
    do {
      std::vector<std::pair<int, std::vector<int>>> verts;
      std::vector<std::vector<int>> grid;
      std::vector<int> p = base;
      for (int k = 0; k <= n; ++k) {
        grid.push_back(p);
        verts.push_back(reduce(p));
        if (k < n) ++p[pi[k]];
      }
      std::vector<int> order(n + 1);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int c) { return verts[a].first < verts[c].first; });
      Simplex t;
      std::vector<std::vector<Rational>> pts;
      for (int k : order) {
        t.push_back(verts[k].first);
        pts.push_back(std::vector<Rational>(grid[k].begin(), grid[k].end()));
      }
      if (std::adjacent_find(t.begin(), t.end()) != t.end())
        throw InputError("torus lattice too small for a simplicial Kuhn triangulation");
      orientation[t] = orientation_sign(pts);
      for (int a = 0; a <= n; ++a)
        for (int c = 0; c <= n; ++c) {
          if (verts[a].first >= verts[c].first) continue;
          std::vector<int> diff(n);
          for (int r = 0; r < n; ++r) diff[r] = verts[c].second[r] - verts[a].second[r];
          Element l = deck(diff);
          auto [it, fresh] = labels.emplace(std::make_pair(verts[a].first, verts[c].first), l);
          if (!fresh && it->second != l) throw InputError("torus lattice too small: an edge wraps twice");
        }
      tops.push_back(t);
    } while (std::next_permutation(pi.begin(), pi.end()));
  }
  for (auto it = labels.begin(); it != labels.end();) {
    if (group.is_identity(it->second)) it = labels.erase(it);
    else ++it;
  }
  complex_ = QuotientComplex::from_top_simplices(group, static_cast<int>(rep_.size()), tops, orientation, labels,
                                                 tree);
}

std::vector<int> Torus::canonical(std::vector<int> p) const {
  const int n = spec_.dimension;
  for (int i = 0; i < n; ++i) {
    const long q = floor_div(p[i], hnf_[i][i]);
    for (int r = 0; r < n; ++r) p[r] -= static_cast<int>(q) * hnf_[i][r];
  }
  return p;
}

std::pair<int, std::vector<int>> Torus::reduce(const std::vector<int>& p) const {
  const int v = class_of_.at(canonical(p));
  const int n = spec_.dimension;
  std::vector<int> lambda(n, 0);
  for (int r = 0; r < n; ++r) {
    Rational s = 0;
    for (int c = 0; c < n; ++c) s += basis_inverse_[r][c] * (p[c] - rep_[v][c]);
    if (denominator(s) != 1) throw InternalError("lattice coordinate is not integral");
    lambda[r] = static_cast<int>(numerator(s));
  }
  return {v, lambda};
}

RationalVector Torus::translation(const Element& deck) const {
  if (!euclidean()) throw UnsupportedError("Euclidean positions need the Z^n deck group");
  const int n = spec_.dimension;
  RationalVector t(n, Rational(0));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) t[r] += Rational(spec_.basis[c][r] * deck.data.at(c), spec_.scale);
  return t;
}

RationalVector Torus::position(const Cell& vertex) const {
  const int n = spec_.dimension;
  RationalVector x = translation(vertex.deck);
  for (int r = 0; r < n; ++r) x[r] += (rep_.at(vertex.id)[r] + spec_.offset[r]) / spec_.scale;
  return x;
}

RationalVector Torus::position(const CoverPoint& p) const {
  RationalVector x(spec_.dimension, Rational(0));
  for (const auto& [c, w] : p.terms) {
    RationalVector y = position(c);
    for (int r = 0; r < spec_.dimension; ++r) x[r] += w * y[r];
  }
  return x;
}

CoverPoint Torus::locate(const RationalVector& x) const {
  if (!euclidean()) throw UnsupportedError("point location needs the Z^n deck group");
  const int n = spec_.dimension;
  std::vector<int> base(n);
  RationalVector frac(n);
  for (int r = 0; r < n; ++r) {
    Rational u = x.at(r) * spec_.scale - spec_.offset[r];
    BigInt f = floor_of(u);
    base[r] = static_cast<int>(f);
    frac[r] = u - Rational(f);
  }
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  std::vector<std::pair<Cell, Rational>> terms;
  std::vector<int> p = base;
  for (int k = 0; k <= n; ++k) {
    Rational w;
    if (k == 0) w = 1 - frac[pi[0]];
    else if (k == n) w = frac[pi[n - 1]];
    else w = frac[pi[k - 1]] - frac[pi[k]];
    auto [v, lambda] = reduce(p);
    terms.push_back({Cell{Element{lambda}, 0, v}, w});
    if (k < n) ++p[pi[k]];
  }
  return normalize(std::move(terms));
}

Torus square_torus(int m, RationalVector offset) {
  TorusSpec s;
  s.dimension = 2;
  s.basis = {{m, 0}, {0, m}};
  s.scale = m;
  s.offset = std::move(offset);
  return Torus(std::move(s));
}

Torus seven_vertex_torus() {
  TorusSpec s;
  s.dimension = 2;
  s.basis = {{1, 3}, {2, -1}};
  s.scale = 1;
  return Torus(std::move(s));
}

Torus cyclic_torus() {
  TorusSpec s;
  s.dimension = 2;
  s.basis = {{3, 0}, {0, 3}};
  s.scale = 3;
  MarkedGroup c3 = MarkedGroup::cyclic(3);
  s.group = c3;
  s.basis_images = {c3.identity(), c3.generator(0)};
  return Torus(std::move(s));
}

Torus sine_torus() { return square_torus(3, {Rational(1, 7), Rational(3, 7)}); }

}  // namespace ulef
