#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ulef/error.hpp"
#include "ulef/ufh.hpp"

using namespace ulef;

namespace {

// Inner boundary of the box [-t, t]^2 in Z^2, by looking at neighbours.
std::size_t box_boundary_by_hand(int t) {
  std::size_t n = 0;
  for (int x = -t; x <= t; ++x)
    for (int y = -t; y <= t; ++y) {
      bool edge = false;
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
        if (std::abs(x + dx) > t || std::abs(y + dy) > t) edge = true;
      n += edge;
    }
  return n;
}

// Boundary of a Z^2 chain computed from exponent vectors directly.
std::map<std::pair<int, int>, long long> z2_boundary(const GraphChain& b) {
  std::map<std::pair<int, int>, long long> out;
  for (const auto& [e, v] : b.edges) {
    const int x = e.first.data[0], y = e.first.data[1];
    out[{x, y}] -= v;
    out[{x + (e.second == 0), y + (e.second == 1)}] += v;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

ClassFunction constant(long long c) {
  ClassFunction f;
  f.constant = c;
  return f;
}

// Symmetric group S3 as a multiplication table on permutations of {0,1,2}.
MarkedGroup s3() {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      table[i][j] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return MarkedGroup::finite(table, {1, 2});
}

}  // namespace

TEST_CASE("Følner search") {
  auto z2 = MarkedGroup::free_abelian(2);
  auto res = folner_search(z2, Rational(1, 2));
  CHECK(res.ratio < Rational(1, 2));
  CHECK(res.size == static_cast<std::size_t>((2 * res.t + 1) * (2 * res.t + 1)));
  CHECK(res.boundary == box_boundary_by_hand(res.t));
  CHECK(Rational(static_cast<long long>(box_boundary_by_hand(res.t - 1))) / ((2 * res.t - 1) * (2 * res.t - 1)) >=
        Rational(1, 2));

  auto fin = folner_search(s3(), Rational(1, 100));
  CHECK(fin.size == 6);
  CHECK(fin.ratio == 0);

  CHECK_THROWS_AS(folner_search(MarkedGroup::free_group(2), Rational(1, 2)), UnsupportedError);
  CHECK_THROWS_AS(folner_search(MarkedGroup::surface(2), Rational(1, 2)), UnsupportedError);
  CHECK_NOTHROW(folner_search(MarkedGroup::free_group(1), Rational(1, 2)));
}

TEST_CASE("isoperimetric probe") {
  auto z2 = isoperimetric_probe(MarkedGroup::free_abelian(2), {1, 2, 3, 4, 5, 6});
  for (const auto& row : z2) {
    const long long r = row.radius;
    CHECK(row.ratio == Rational(4 * r, 2 * r * r + 2 * r + 1));
  }
  CHECK(z2[5].ratio < z2[1].ratio);
  long long sphere = 4, ball = 5;
  for (const auto& row : isoperimetric_probe(MarkedGroup::free_group(2), {1, 2, 3, 4, 5, 6})) {
    CHECK(row.ratio == Rational(sphere, ball));
    CHECK(row.ratio >= Rational(1, 2));
    sphere *= 3;
    ball += sphere;
  }
  auto cyc = isoperimetric_probe(MarkedGroup::cyclic(5), {2, 3});
  for (const auto& row : cyc) CHECK(row.ratio == 0);
}

TEST_CASE("finite mass is a boundary") {
  auto z2 = MarkedGroup::free_abelian(2);
  ClassFunction point;
  point.add(z2.identity(), 1);
  auto ray = bound_finite_mass(z2, point, 6);
  CHECK_FALSE(ray.global);
  CHECK(ray.chain.edges.size() == 6);
  for (const auto& [e, v] : ray.chain.edges) CHECK(std::abs(v) == 1);
  auto d = z2_boundary(ray.chain);
  // Interior: exactly the unit at the origin; the remainder sits on the sphere.
  for (const auto& [x, v] : d) {
    if (std::abs(x.first) + std::abs(x.second) < 6) {
      CHECK(x == std::pair{0, 0});
      CHECK(v == 1);
    } else {
      CHECK(v == -1);
    }
  }

  ClassFunction dipole;
  const Element u = z2.parse("a^2 b"), v = z2.parse("b^-2");
  dipole.add(u, 1);
  dipole.add(v, -1);
  auto path = bound_finite_mass(z2, dipole, 6);
  CHECK(path.global);
  CHECK(static_cast<int>(path.chain.edges.size()) == z2.distance(u, v));
  auto dd = z2_boundary(path.chain);
  CHECK(dd == std::map<std::pair<int, int>, long long>{{{2, 1}, 1}, {{0, -2}, -1}});

  auto f2 = MarkedGroup::free_group(2);
  ClassFunction three;
  three.add(f2.identity(), 3);
  auto tree_ray = bound_finite_mass(f2, three, 6);
  CHECK(tree_ray.bound == 3);
  for (const auto& [e, w] : tree_ray.chain.edges) CHECK(std::abs(w) == 3);
  auto db = tree_ray.chain.boundary(f2);
  for (const auto& x : f2.ball(5)) CHECK(db[x] == (f2.is_identity(x) ? 3 : 0));

  ClassFunction lonely;
  lonely.add(MarkedGroup::cyclic(4).identity(), 1);
  CHECK_THROWS_AS(bound_finite_mass(MarkedGroup::cyclic(4), lonely, 3), InputError);
}

TEST_CASE("flow certificates separate amenable and nonamenable growth") {
  auto f2 = MarkedGroup::free_group(2);
  for (int r = 3; r <= 6; ++r) {
    auto fr = flow_certificate(f2, constant(1), r, 2);
    CHECK(fr.feasible);
    CHECK(fr.chain.sup_norm() <= 2);
    auto db = fr.chain.boundary(f2);
    for (const auto& x : f2.ball(r - 1)) CHECK(db[x] == 1);
  }
  auto z2 = MarkedGroup::free_abelian(2);
  const long long c4 = minimal_capacity(z2, constant(1), 4);
  const long long c8 = minimal_capacity(z2, constant(1), 8);
  CHECK(c8 > c4);
  bool infeasible = false;
  for (int r = 3; r <= 8; ++r) infeasible = infeasible || !flow_certificate(z2, constant(1), r, 2).feasible;
  CHECK(infeasible);
  // Max-flow cannot beat the cut between ball(R-1) and the sphere.
  for (int r : {4, 8}) {
    long long cut = 0;
    for (const auto& x : z2.ball(r - 1))
      for (const auto& y : z2.neighbors(x)) cut += z2.length(y) == r;
    const long long need = static_cast<long long>(z2.ball(r - 1).size());
    const long long cmin = r == 4 ? c4 : c8;
    CHECK(cmin * cut >= need);
  }

  auto zero = flow_certificate(f2, constant(0), 4, 1);
  CHECK(zero.feasible);
  CHECK(zero.chain.edges.empty());

  // Monotone in the capacity.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ClassFunction f;
    f.constant = static_cast<long long>(rng() % 3);
    auto ball = f2.ball(2);
    for (int i = 0; i < 3; ++i) f.add(ball[rng() % ball.size()], static_cast<long long>(rng() % 7) - 3);
    bool before = false;
    for (long long cap = 0; cap <= 6; ++cap) {
      const bool now = flow_certificate(f2, f, 4, cap).feasible;
      CHECK((!before || now));
      before = now;
    }
  }
}

TEST_CASE("deciding classes") {
  auto z = MarkedGroup::free_abelian(1);
  auto two = decide_class(z, constant(2));
  CHECK(two.verdict == "nonzero-by-mean");
  CHECK(two.payload["limit"] == "2");
  CHECK(two.verified);

  auto f2 = MarkedGroup::free_group(2);
  ClassFunction five = constant(5);
  five.add(f2.parse("a b"), 4);
  five.add(f2.parse("b^-1"), -2);
  auto flow = decide_class(f2, five);
  CHECK(flow.verdict == "zero-by-truncated-flow");
  CHECK(flow.verified);
  CHECK(flow.payload["runs"].size() == 4);

  auto z2 = MarkedGroup::free_abelian(2);
  ClassFunction seven;
  seven.add(z2.identity(), 7);
  auto bdry = decide_class(z2, seven);
  CHECK(bdry.verdict == "zero-by-boundary");
  CHECK(bdry.verified);

  auto g = s3();
  CHECK(decide_class(g, constant(1)).verdict == "nonzero-by-mean");
  ClassFunction balanced;
  balanced.add(g.parse("g1"), 2);
  balanced.add(g.parse("g2 g1"), -2);
  auto fin = decide_class(g, balanced);
  CHECK(fin.verdict == "zero-by-boundary");
  CHECK(fin.verified);
}

TEST_CASE("coinvariant relations are zero") {
  std::mt19937_64 rng(5);
  for (const auto& g : {MarkedGroup::free_abelian(2), MarkedGroup::free_abelian(1), MarkedGroup::free_group(2), s3()}) {
    const auto ball = g.ball(g.is_finite() ? 3 : 2);
    for (int trial = 0; trial < 5; ++trial) {
      ClassFunction f;
      for (int i = 0; i < 4; ++i) f.add(ball[rng() % ball.size()], static_cast<long long>(rng() % 9) - 4);
      for (int s = 0; s < g.num_generators(); ++s) {
        ClassFunction diff = f;
        for (const auto& [x, v] : translate(g, g.generator(s), f).finite) diff.add(x, -v);
        auto cert = decide_class(g, diff, DecideOptions{{3, 4}, 0, 4, 6});
        INFO(certificate_to_json(g, cert).dump());
        CHECK(cert.verdict.rfind("zero", 0) == 0);
        CHECK(cert.verified);
      }
    }
  }
}

TEST_CASE("the verifier rejects tampered certificates") {
  auto z2 = MarkedGroup::free_abelian(2);
  ClassFunction seven;
  seven.add(z2.parse("a"), 7);
  auto doc = certificate_to_json(z2, decide_class(z2, seven));
  CHECK(verify_certificate(doc));
  auto tampered = doc;
  tampered["payload"]["chain"][0][2] = 6;
  std::string why;
  CHECK_FALSE(verify_certificate(tampered, &why));
  CHECK(why.find("mismatch") != std::string::npos);

  auto mean = certificate_to_json(z2, decide_class(z2, constant(3)));
  CHECK(verify_certificate(mean));
  mean["payload"]["limit"] = "4";
  CHECK_FALSE(verify_certificate(mean));

  auto f2 = MarkedGroup::free_group(2);
  auto flow = certificate_to_json(f2, decide_class(f2, constant(1), DecideOptions{{3, 4}, 2, 4, 6}));
  CHECK(verify_certificate(flow));
  flow["payload"]["capacity"] = 0;
  CHECK_FALSE(verify_certificate(flow));
}
