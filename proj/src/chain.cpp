#include "ulef/chain.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ulef/error.hpp"

namespace ulef {

namespace {

int parity_sign(int k) { return k % 2 ? -1 : 1; }

void require_degree(const QuotientComplex& q, const PeriodicChain& c) {
  if (c.degree < 0 || c.degree > q.dimension())
    throw InputError("chain degree " + std::to_string(c.degree) + " out of range");
  if (c.equivariant.size() != q.count(c.degree))
    throw InputError("equivariant part has " + std::to_string(c.equivariant.size()) + " entries, expected " +
                     std::to_string(q.count(c.degree)));
  for (const auto& [cell, v] : c.exceptional)
    if (cell.dim != c.degree || cell.id < 0 || cell.id >= static_cast<int>(q.count(c.degree)))
      throw InputError("exceptional cell does not match the chain degree");
}

void require_region(const PeriodicComplex& pc, const Cell& c) {
  if (!pc.materialized(c.deck))
    throw ResourceError("cell at " + pc.group().format(c.deck) + " lies outside the materialized radius " +
                        std::to_string(pc.radius()) + "; expand the region (--radius)");
}

void prune(PeriodicChain& c) {
  std::erase_if(c.exceptional, [](const auto& e) { return e.second == 0; });
}

}  // namespace

PeriodicChain PeriodicChain::zero(const QuotientComplex& q, int degree) {
  PeriodicChain c;
  c.degree = degree;
  c.equivariant.assign(q.count(degree), 0);
  return c;
}

long long PeriodicChain::value(const Cell& c) const {
  auto it = exceptional.find(c);
  return equivariant.at(c.id) + (it == exceptional.end() ? 0 : it->second);
}

bool PeriodicChain::finite() const {
  return std::all_of(equivariant.begin(), equivariant.end(), [](long long v) { return v == 0; });
}

void PeriodicChain::add(const Cell& c, long long v) {
  if (v == 0) return;
  auto& slot = exceptional[c];
  slot += v;
  if (slot == 0) exceptional.erase(c);
}

PeriodicChain operator+(const PeriodicChain& a, const PeriodicChain& b) {
  if (a.degree != b.degree || a.equivariant.size() != b.equivariant.size())
    throw InputError("adding chains of different degree");
  PeriodicChain out = a;
  for (std::size_t i = 0; i < b.equivariant.size(); ++i) out.equivariant[i] += b.equivariant[i];
  for (const auto& [c, v] : b.exceptional) out.add(c, v);
  return out;
}

PeriodicChain operator*(long long s, const PeriodicChain& a) {
  PeriodicChain out = a;
  for (auto& v : out.equivariant) v *= s;
  for (auto& [c, v] : out.exceptional) v *= s;
  prune(out);
  return out;
}

long long ClassFunction::value(const Element& g) const {
  auto it = finite.find(g);
  return constant + (it == finite.end() ? 0 : it->second);
}

long long ClassFunction::sup_norm() const {
  long long m = std::llabs(constant);
  for (const auto& [g, v] : finite) m = std::max(m, std::llabs(constant + v));
  return m;
}

void ClassFunction::add(const Element& g, long long v) {
  if (v == 0) return;
  auto& slot = finite[g];
  slot += v;
  if (slot == 0) finite.erase(g);
}

PeriodicChain boundary(const PeriodicComplex& pc, const PeriodicChain& c) {
  const QuotientComplex& q = pc.quotient();
  const MarkedGroup& g = q.group();
  require_degree(q, c);
  const int k = c.degree;
  if (k < 1) throw InputError("boundary of a 0-chain");
  PeriodicChain out = PeriodicChain::zero(q, k - 1);
  // Faces of lifts of a simplex are lifts of its faces, so the invariant
  // part stays invariant whatever the labels.
  for (std::size_t s = 0; s < q.count(k); ++s)
    for (int i = 0; i <= k; ++i) out.equivariant[q.face(k, static_cast<int>(s), i)] += parity_sign(i) * c.equivariant[s];
  for (const auto& [cell, v] : c.exceptional)
    for (int i = 0; i <= k; ++i) {
      Cell f{g.multiply(cell.deck, q.face_shift(k, cell.id, i)), k - 1, q.face(k, cell.id, i)};
      require_region(pc, f);
      out.add(f, parity_sign(i) * v);
    }
  return out;
}

PeriodicCochain coboundary(const PeriodicComplex& pc, const PeriodicCochain& u) {
  const QuotientComplex& q = pc.quotient();
  const MarkedGroup& g = q.group();
  require_degree(q, u);
  const int p = u.degree;
  if (p + 1 > q.dimension()) throw InputError("coboundary of a top-degree cochain");
  PeriodicCochain out = PeriodicChain::zero(q, p + 1);
  for (std::size_t s = 0; s < q.count(p + 1); ++s)
    for (int i = 0; i <= p + 1; ++i)
      out.equivariant[s] += parity_sign(i) * u.equivariant[q.face(p + 1, static_cast<int>(s), i)];
  // (du)(h, s) picks up u(h', t) whenever (h', t) = face i of (h, s).
  for (const auto& [cell, v] : u.exceptional)
    for (auto [s, i] : q.cofaces(p, cell.id)) {
      Cell co{g.multiply(cell.deck, g.inverse(q.face_shift(p + 1, s, i))), p + 1, s};
      require_region(pc, co);
      out.add(co, parity_sign(i) * v);
    }
  return out;
}

PeriodicCochain signed_coboundary(const PeriodicComplex& pc, const PeriodicCochain& u) {
  return parity_sign(u.degree + 1) * coboundary(pc, u);
}

PeriodicChain fundamental_cycle(const PeriodicComplex& pc) {
  const QuotientComplex& q = pc.quotient();
  q.require_valid();
  if (!q.has_orientation()) throw OrientationError("quotient has no orientation, so no fundamental cycle");
  PeriodicChain mu = PeriodicChain::zero(q, q.dimension());
  for (std::size_t t = 0; t < q.count(q.dimension()); ++t) mu.equivariant[t] = q.orientation(static_cast<int>(t));
  return mu;
}

PeriodicChain cap(const PeriodicComplex& pc, const PeriodicCochain& u, const PeriodicChain& c) {
  const QuotientComplex& q = pc.quotient();
  const MarkedGroup& g = q.group();
  require_degree(q, u);
  require_degree(q, c);
  const int p = u.degree, k = c.degree;
  if (p > k) throw InputError("cap product needs cochain degree <= chain degree");
  const int r = k - p;
  const int sgn = parity_sign(p * r);

  // Front face s|[0..r] and back face s|[r..k] of every quotient k-simplex.
  std::vector<int> front(q.count(k)), back(q.count(k));
  std::map<int, std::vector<int>> by_back;
  for (std::size_t s = 0; s < q.count(k); ++s) {
    const Simplex& v = q.cell(k, static_cast<int>(s));
    front[s] = q.index(Simplex(v.begin(), v.begin() + r + 1));
    back[s] = q.index(Simplex(v.begin() + r, v.end()));
    by_back[back[s]].push_back(static_cast<int>(s));
  }

  PeriodicChain out = PeriodicChain::zero(q, r);
  for (std::size_t s = 0; s < q.count(k); ++s)
    out.equivariant[front[s]] += sgn * u.equivariant[back[s]] * c.equivariant[s];

  // Exceptional chain entries against the whole cochain.
  for (const auto& [cell, a] : c.exceptional) {
    Cell b{g.multiply(cell.deck, q.vertex_shift(k, cell.id, r)), p, back[cell.id]};
    const long long coeff = sgn * a * u.value(b);
    if (coeff == 0) continue;
    Cell f{cell.deck, r, front[cell.id]};
    require_region(pc, f);
    out.add(f, coeff);
  }
  // Exceptional cochain entries against the invariant part of the chain.
  for (const auto& [cell, x] : u.exceptional) {
    auto it = by_back.find(cell.id);
    if (it == by_back.end()) continue;
    for (int s : it->second) {
      if (c.equivariant[s] == 0) continue;
      Cell f{g.multiply(cell.deck, g.inverse(q.vertex_shift(k, s, r))), r, front[s]};
      require_region(pc, f);
      out.add(f, sgn * c.equivariant[s] * x);
    }
  }
  return out;
}

long long pairing(const PeriodicCochain& u, const PeriodicChain& c) {
  if (u.degree != c.degree) throw InputError("pairing of a cochain and a chain of different degree");
  if (!c.finite()) throw InputError("pairing needs a finitely supported chain");
  long long total = 0;
  for (const auto& [cell, a] : c.exceptional) total += a * u.value(cell);
  return total;
}

ClassFunction project_to_group(const PeriodicComplex& pc, const PeriodicChain& c, const FundamentalDomain& fd) {
  const QuotientComplex& q = pc.quotient();
  require_degree(q, c);
  if (c.degree != 0) throw InputError("projection to the group needs a 0-chain");
  ClassFunction f;
  for (long long v : c.equivariant) f.constant += v;
  for (const auto& [cell, a] : c.exceptional) f.add(fd.coset(q.group(), cell), a);
  return f;
}

json chain_to_json(const MarkedGroup& g, const PeriodicChain& c) {
  json eq = json::object();
  for (std::size_t i = 0; i < c.equivariant.size(); ++i)
    if (c.equivariant[i] != 0) eq[std::to_string(i)] = c.equivariant[i];
  json ex = json::array();
  for (const auto& [cell, v] : c.exceptional) ex.push_back({g.format(cell.deck), cell.id, v});
  return {{"degree", c.degree}, {"equivariant", eq}, {"exceptional", ex}};
}

PeriodicChain chain_from_json(const QuotientComplex& q, const json& doc) {
  try {
    const int k = doc.at("degree").get<int>();
    if (k < 0 || k > q.dimension()) throw InputError("chain degree " + std::to_string(k) + " out of range");
    PeriodicChain c = PeriodicChain::zero(q, k);
    if (doc.contains("equivariant")) {
      const json& eq = doc["equivariant"];
      if (eq.is_array()) {
        if (eq.size() != c.equivariant.size()) throw InputError("equivariant list has the wrong length");
        for (std::size_t i = 0; i < eq.size(); ++i) c.equivariant[i] = eq[i].get<long long>();
      } else {
        for (auto& [key, v] : eq.items()) {
          const int id = std::stoi(key);
          if (id < 0 || id >= static_cast<int>(c.equivariant.size()))
            throw InputError("equivariant entry for unknown simplex " + key);
          c.equivariant[id] = v.get<long long>();
        }
      }
    }
    if (doc.contains("exceptional"))
      for (const auto& e : doc["exceptional"]) {
        const int id = e.at(1).get<int>();
        if (id < 0 || id >= static_cast<int>(q.count(k))) throw InputError("exceptional entry for unknown simplex");
        c.add(Cell{q.group().parse(e.at(0).get<std::string>()), k, id}, e.at(2).get<long long>());
      }
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed chain document: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("malformed simplex id in chain document");
  }
}

}  // namespace ulef
