#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ulef/chain.hpp"
#include "ulef/error.hpp"
#include "ulef/fixtures.hpp"

using namespace ulef;

namespace {

struct Cover {
  std::string name;
  PeriodicComplex pc;
  std::vector<Element> support;  // decks random exceptional parts may use
};

int max_label_length(const QuotientComplex& q) {
  int m = 0;
  for (const auto& [e, l] : q.labels()) m = std::max(m, q.group().length(l));
  return m;
}

// Support in ball(2); every cell touched by the identities below has deck
// within one label of a vertex of a simplex meeting the support.
Cover make_cover(std::string name, const QuotientComplex& q) {
  Cover c{std::move(name), PeriodicComplex(q), q.group().ball(2)};
  c.pc.expand(2 + max_label_length(q));
  return c;
}

std::vector<Cover> covers() {
  std::vector<Cover> out;
  out.push_back(make_cover("torus", square_torus(3).complex()));
  out.push_back(make_cover("genus 2", genus2_surface()));
  return out;
}

PeriodicChain random_chain(std::mt19937_64& rng, const Cover& cv, int degree, bool periodic, int entries = 6) {
  const QuotientComplex& q = cv.pc.quotient();
  PeriodicChain c = PeriodicChain::zero(q, degree);
  std::uniform_int_distribution<int> coeff(-3, 3);
  if (periodic)
    for (auto& v : c.equivariant) v = coeff(rng);
  std::uniform_int_distribution<std::size_t> pick(0, cv.support.size() - 1);
  std::uniform_int_distribution<int> simplex(0, static_cast<int>(q.count(degree)) - 1);
  for (int i = 0; i < entries; ++i) c.add(Cell{cv.support[pick(rng)], degree, simplex(rng)}, coeff(rng));
  return c;
}

PeriodicChain zero_like(const QuotientComplex& q, int degree) { return PeriodicChain::zero(q, degree); }

}  // namespace

TEST_CASE("boundary of a single edge is its endpoint difference") {
  auto t = square_torus(3);
  PeriodicComplex pc(t.complex());
  pc.expand(3);
  const auto& q = t.complex();
  PeriodicChain c = PeriodicChain::zero(q, 1);
  Cell edge{q.group().identity(), 1, 0};
  c.add(edge, 1);
  auto d = boundary(pc, c);
  auto v = pc.vertices(edge);
  CHECK(d.finite());
  CHECK(d.exceptional.size() == 2);
  CHECK(d.value(v[1]) == 1);
  CHECK(d.value(v[0]) == -1);
}

TEST_CASE("boundary and coboundary square to zero") {
  std::mt19937_64 rng(11);
  for (const auto& cv : covers()) {
    const auto& q = cv.pc.quotient();
    INFO(cv.name);
    for (int trial = 0; trial < 100; ++trial) {
      auto c = random_chain(rng, cv, 2, true);
      CHECK(boundary(cv.pc, boundary(cv.pc, c)) == zero_like(q, 0));
      auto u = random_chain(rng, cv, 0, true);
      CHECK(coboundary(cv.pc, coboundary(cv.pc, u)) == zero_like(q, 2));
    }
  }
}

TEST_CASE("coboundary is adjoint to boundary") {
  std::mt19937_64 rng(12);
  for (const auto& cv : covers()) {
    INFO(cv.name);
    for (int trial = 0; trial < 50; ++trial)
      for (int p = 0; p < 2; ++p) {
        auto u = random_chain(rng, cv, p, true);
        auto c = random_chain(rng, cv, p + 1, false);
        // Right side: sum over the finitely many faces of c, by hand.
        long long rhs = 0;
        for (const auto& [cell, a] : c.exceptional)
          for (int i = 0; i <= p + 1; ++i) rhs += (i % 2 ? -a : a) * u.value(cv.pc.face(cell, i));
        CHECK(pairing(coboundary(cv.pc, u), c) == rhs);
        CHECK(pairing(u, boundary(cv.pc, c)) == rhs);
      }
  }
}

TEST_CASE("Leibniz rule for the cap product") {
  std::mt19937_64 rng(13);
  const std::vector<std::pair<int, int>> degrees{{0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (const auto& cv : covers()) {
    const auto& q = cv.pc.quotient();
    INFO(cv.name);
    for (auto [p, k] : degrees)
      for (int trial = 0; trial < 100; ++trial) {
        auto u = random_chain(rng, cv, p, true);
        auto c = random_chain(rng, cv, k, true);
        auto uc = cap(cv.pc, u, c);
        // Terms whose degrees leave the range [0, n] vanish.
        auto lhs = k - p >= 1 ? boundary(cv.pc, uc) : zero_like(q, 0);
        auto rhs = k - p >= 1 ? zero_like(q, k - p - 1) : zero_like(q, 0);
        if (p + 1 <= k) rhs = rhs + cap(cv.pc, signed_coboundary(cv.pc, u), c);
        if (k >= 1 && p <= k - 1) rhs = rhs + (p % 2 ? -1 : 1) * cap(cv.pc, u, boundary(cv.pc, c));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("unit cochain caps to the identity") {
  std::mt19937_64 rng(14);
  for (const auto& cv : covers()) {
    const auto& q = cv.pc.quotient();
    PeriodicCochain one = PeriodicChain::zero(q, 0);
    for (auto& v : one.equivariant) v = 1;
    for (int k = 0; k <= 2; ++k) {
      auto c = random_chain(rng, cv, k, true);
      CHECK(cap(cv.pc, one, c) == c);
    }
  }
}

TEST_CASE("fundamental cycles are cycles") {
  for (const auto& q : {tetrahedron_boundary(), octahedron().complex, square_torus(3).complex(),
                        seven_vertex_torus().complex(), cyclic_torus().complex(), genus2_surface()}) {
    PeriodicComplex pc(q);
    pc.expand(std::min(2 + max_label_length(q), 6));
    auto mu = fundamental_cycle(pc);
    CHECK(mu.finite() == false);
    CHECK(boundary(pc, mu) == zero_like(q, q.dimension() - 1));
  }
  auto tet = tetrahedron_boundary();
  PeriodicComplex pt(tet);
  pt.expand(0);
  auto mu = fundamental_cycle(pt);
  CHECK(mu.equivariant.size() == 4);
  for (auto v : mu.equivariant) CHECK(std::abs(v) == 1);

  PeriodicComplex pk(klein_bottle());
  pk.expand(1);
  CHECK_THROWS_AS(fundamental_cycle(pk), OrientationError);
}

TEST_CASE("indicator of a top simplex capped with the fundamental cycle") {
  for (const auto& q : {square_torus(3).complex(), genus2_surface()}) {
    PeriodicComplex pc(q);
    pc.expand(2);
    FundamentalDomain fd(q);
    PeriodicCochain u = PeriodicChain::zero(q, q.dimension());
    u.equivariant[5] = 1;
    auto point = cap(pc, u, fundamental_cycle(pc));
    CHECK(point.finite() == false);
    int nonzero = 0;
    for (auto v : point.equivariant)
      if (v != 0) {
        ++nonzero;
        CHECK(std::abs(v) == 1);
      }
    CHECK(nonzero == 1);
    CHECK(point.exceptional.empty());
    auto f = project_to_group(pc, point, fd);
    CHECK(std::abs(f.constant) == 1);
    CHECK(f.finite.empty());
  }
}

TEST_CASE("projection to the group") {
  auto q = square_torus(3).complex();
  PeriodicComplex pc(q);
  pc.expand(3);
  FundamentalDomain fd(q);
  const auto& g = q.group();
  PeriodicChain c = PeriodicChain::zero(q, 0);
  for (std::size_t v = 0; v < c.equivariant.size(); ++v) c.equivariant[v] = static_cast<long long>(v) - 3;
  long long s = 0;
  for (auto v : c.equivariant) s += v;
  auto f = project_to_group(pc, c, fd);
  CHECK(f.constant == s);
  CHECK(f.finite.empty());

  const Element g0 = g.parse("a b^-1");
  PeriodicChain point = PeriodicChain::zero(q, 0);
  point.add(Cell{g.multiply(g0, fd.lift(0, 4)), 0, 4}, 3);
  auto fp = project_to_group(pc, point, fd);
  CHECK(fp.constant == 0);
  CHECK(fp.finite.size() == 1);
  CHECK(fp.value(g0) == 3);

  // Boundaries of finite 1-chains carry zero total mass.
  std::mt19937_64 rng(15);
  for (const auto& cv : covers()) {
    FundamentalDomain fdc(cv.pc.quotient());
    for (int trial = 0; trial < 50; ++trial) {
      auto b = random_chain(rng, cv, 1, false);
      auto fb = project_to_group(cv.pc, boundary(cv.pc, b), fdc);
      CHECK(fb.constant == 0);
      long long total = 0;
      for (auto& [h, v] : fb.finite) total += v;
      CHECK(total == 0);
    }
  }
}

TEST_CASE("operations outside the materialized region ask for expansion") {
  auto q = genus2_surface();
  PeriodicComplex pc(q);
  pc.expand(1);
  PeriodicChain c = PeriodicChain::zero(q, 2);
  c.add(Cell{q.group().parse("a1"), 2, 0}, 1);
  bool raised = false;
  for (int t = 0; t < static_cast<int>(q.count(2)) && !raised; ++t) {
    PeriodicChain ct = PeriodicChain::zero(q, 2);
    ct.add(Cell{q.group().parse("a1"), 2, t}, 1);
    try {
      boundary(pc, ct);
    } catch (const ResourceError&) {
      raised = true;
    }
  }
  CHECK(raised);
}

TEST_CASE("chain documents round trip") {
  std::mt19937_64 rng(16);
  auto all = covers();
  const auto& cv = all[1];
  auto c = random_chain(rng, cv, 1, true);
  const auto& q = cv.pc.quotient();
  auto doc = chain_to_json(q.group(), c);
  CHECK(chain_from_json(q, doc) == c);
  CHECK(chain_to_json(q.group(), chain_from_json(q, json::parse(doc.dump()))).dump() == doc.dump());
  CHECK_THROWS_AS(chain_from_json(q, json{{"degree", 5}}), InputError);
}

TEST_CASE("rational homology of the fixtures") {
  CHECK(quotient_homology(tetrahedron_boundary()).betti == std::vector<int>{1, 0, 1});
  CHECK(quotient_homology(square_torus(3).complex()).betti == std::vector<int>{1, 2, 1});
  CHECK(quotient_homology(seven_vertex_torus().complex()).betti == std::vector<int>{1, 2, 1});
  CHECK(quotient_homology(genus2_surface()).betti == std::vector<int>{1, 4, 1});
  CHECK(quotient_homology(klein_bottle()).betti == std::vector<int>{1, 1, 0});
  CHECK(quotient_homology(octahedron().complex).betti == std::vector<int>{1, 0, 1});
}

TEST_CASE("Lefschetz numbers of simplicial maps on the quotient") {
  for (int t = 1; t <= 2; ++t) {
    auto torus = barycentric_subdivide(square_torus(3).complex(), t);
    CHECK(lefschetz_number_quotient(square_torus(3).complex(), torus, carrier_vertex_map(torus)) == 0);
  }
  auto tet = tetrahedron_boundary();
  auto sd = barycentric_subdivide(tet, 1);
  auto id = carrier_vertex_map(sd);
  CHECK(lefschetz_number_quotient(tet, sd, id) == 2);
  // Swapping two vertices reverses orientation: trace -1 on H_2.
  auto swap = id;
  for (auto& v : swap) v = v == 0 ? 1 : v == 1 ? 0 : v;
  CHECK(lefschetz_number_quotient(tet, sd, swap) == 0);

  auto oct = octahedron().complex;
  auto so = barycentric_subdivide(oct, 1);
  auto base = carrier_vertex_map(so);
  auto compose = [&](std::vector<int> perm) {
    auto m = base;
    for (auto& v : m) v = perm[v];
    return m;
  };
  CHECK(lefschetz_number_quotient(oct, so, compose({2, 3, 4, 5, 0, 1})) == 2);
  CHECK(lefschetz_number_quotient(oct, so, compose({1, 0, 3, 2, 5, 4})) == 0);

  CHECK(lefschetz_number_quotient(tet, sd, std::vector<int>(id.size(), 0)) == 1);
  CHECK_THROWS_AS(lefschetz_number_quotient(tet, sd, std::vector<int>(3, 0)), InputError);
  // +x and -x span no edge of the octahedron.
  auto torn = base;
  for (auto& v : torn) v = v == 2 ? 1 : v;
  CHECK_THROWS_AS(lefschetz_number_quotient(oct, so, torn), InputError);
}
