#include <algorithm>
#include <functional>
#include <set>

#include "ulef/complex.hpp"
#include "ulef/error.hpp"

namespace ulef {

namespace {

constexpr int kMaxSubdivisions = 3;

CoverPoint vertex_point(const MarkedGroup& g, int v) {
  return CoverPoint{{{Cell{g.identity(), 0, v}, Rational(1)}}};
}

}  // namespace

CoverPoint simplex_vertex_position(const Subdivision& sd, int k, int id, int i) {
  const auto& c = sd.complex;
  const int w = c.cell(k, id).at(i);
  return translate(c.group(), c.vertex_shift(k, id, i), sd.vertex_position.at(w));
}

std::optional<std::pair<int, RationalMatrix>> carrier_coordinates(const QuotientComplex& original,
                                                                 const Subdivision& sd, int k, int id) {
  std::vector<CoverPoint> points;
  std::set<int> support;
  for (int i = 0; i <= k; ++i) {
    points.push_back(simplex_vertex_position(sd, k, id, i));
    for (const auto& [c, w] : points.back().terms) support.insert(c.id);
  }
  if (static_cast<int>(support.size()) != k + 1) return std::nullopt;
  Simplex s(support.begin(), support.end());
  const int carrier = original.index(s);
  if (carrier < 0) return std::nullopt;
  RationalMatrix m(k + 1, RationalVector(k + 1));
  for (int i = 0; i <= k; ++i)
    for (const auto& [c, w] : points[i].terms) {
      const int col = static_cast<int>(std::lower_bound(s.begin(), s.end(), c.id) - s.begin());
      m[i][col] += w;
    }
  return std::make_pair(carrier, std::move(m));
}

std::vector<int> carrier_vertex_map(const Subdivision& sd) {
  std::vector<int> out;
  for (const auto& p : sd.vertex_position) {
    int least = p.terms.front().first.id;
    for (const auto& [c, w] : p.terms) least = std::min(least, c.id);
    out.push_back(least);
  }
  return out;
}

namespace {

Subdivision subdivide_once(const QuotientComplex& root, const Subdivision& cur) {
  const QuotientComplex& q = cur.complex;
  const MarkedGroup& g = q.group();
  const int n = q.dimension();

  // New vertex ids: decreasing dimension, then simplex index.
  std::vector<std::vector<int>> new_id(n + 1);
  std::vector<std::pair<int, int>> origin;  // new id -> (k, id)
  for (int k = n; k >= 0; --k) {
    new_id[k].resize(q.count(k));
    for (std::size_t id = 0; id < q.count(k); ++id) {
      new_id[k][id] = static_cast<int>(origin.size());
      origin.push_back({k, static_cast<int>(id)});
    }
  }

  Subdivision next;
  next.times = cur.times + 1;
  next.vertex_position.resize(origin.size());
  for (std::size_t w = 0; w < origin.size(); ++w) {
    auto [k, id] = origin[w];
    std::vector<std::pair<Cell, Rational>> terms;
    for (int i = 0; i <= k; ++i) {
      const int v = q.cell(k, id)[i];
      CoverPoint p = translate(g, q.vertex_shift(k, id, i), cur.vertex_position[v]);
      for (auto& [c, wt] : p.terms) terms.push_back({c, wt / (k + 1)});
    }
    next.vertex_position[w] = normalize(std::move(terms));
  }

  // Top simplices are complete flags tau_n > tau_{n-1} > ... > tau_0.
  std::vector<Simplex> tops;
  std::function<void(int, int, Simplex&)> flags = [&](int k, int id, Simplex& chain) {
    chain.push_back(new_id[k][id]);
    if (k == 0) tops.push_back(chain);
    else
      for (int i = 0; i <= k; ++i) flags(k - 1, q.face(k, id, i), chain);
    chain.pop_back();
  };
  for (std::size_t t = 0; t < q.count(n); ++t) {
    Simplex chain;
    flags(n, static_cast<int>(t), chain);
  }

  std::map<std::pair<int, int>, Element> labels;
  for (const auto& top : tops)
    for (std::size_t i = 0; i < top.size(); ++i)
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        auto [ks, is] = origin[top[i]];
        auto [kt, it] = origin[top[j]];
        Element l = q.label(q.cell(ks, is)[0], q.cell(kt, it)[0]);
        if (!g.is_identity(l)) labels[{top[i], top[j]}] = l;
      }

  std::vector<std::pair<int, int>> tree;
  for (int k = 1; k <= n; ++k)
    for (std::size_t id = 0; id < q.count(k); ++id)
      tree.push_back({new_id[k][id], new_id[0][q.cell(k, static_cast<int>(id))[0]]});
  for (auto [u, v] : q.tree()) tree.push_back({new_id[1][q.index({u, v})], new_id[0][v]});

  next.complex = QuotientComplex::from_top_simplices(g, static_cast<int>(origin.size()), tops, {}, labels, tree);

  const QuotientComplex& c = next.complex;
  next.top_carrier.assign(c.count(n), -1);
  std::vector<int> signs(c.count(n), 0);
  for (std::size_t t = 0; t < c.count(n); ++t) {
    auto coords = carrier_coordinates(root, next, n, static_cast<int>(t));
    if (!coords) throw InternalError("subdivided top simplex escapes its carrier");
    // The lift at the identity must sit in the identity lift of the carrier.
    const CoverPoint base = simplex_vertex_position(next, n, static_cast<int>(t), 0);
    for (const auto& [cell, w] : base.terms) {
      const Simplex& carrier = root.cell(n, coords->first);
      if (cell.deck != root.label(carrier[0], cell.id))
        throw InternalError("subdivided top simplex is not in the identity lift of its carrier");
    }
    next.top_carrier[t] = coords->first;
    if (root.has_orientation()) {
      const int d = sign(determinant(coords->second));
      if (d == 0) throw InternalError("degenerate simplex in subdivision");
      signs[t] = d * root.orientation(coords->first);
    }
  }
  if (root.has_orientation()) next.complex.set_orientation(signs);
  return next;
}

}  // namespace

Subdivision barycentric_subdivide(const QuotientComplex& q, int times) {
  if (times < 0) throw InputError("subdivision count must be nonnegative");
  if (times > kMaxSubdivisions)
    throw ResourceError("subdivision count " + std::to_string(times) + " exceeds the size guard " +
                        std::to_string(kMaxSubdivisions) + " (--subdivide)");
  Subdivision sd;
  sd.complex = q;
  for (int v = 0; v < q.num_vertices(); ++v) sd.vertex_position.push_back(vertex_point(q.group(), v));
  for (std::size_t t = 0; t < q.count(q.dimension()); ++t) sd.top_carrier.push_back(static_cast<int>(t));
  for (int i = 0; i < times; ++i) sd = subdivide_once(q, sd);
  return sd;
}

}  // namespace ulef
