#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ulef/error.hpp"
#include "ulef/group.hpp"

using namespace ulef;

namespace {

// Independent Dehn reducer for the genus-g relator, written without the
// library's table so ball counts can be cross-checked.
Word naive_dehn(Word w, int genus) {
  Word r;
  for (int i = 0; i < genus; ++i) {
    int a = 4 * i, b = 4 * i + 2;
    r.insert(r.end(), {a, b, a ^ 1, b ^ 1});
  }
  std::vector<Word> cycles;
  const int n = static_cast<int>(r.size());
  for (int dir = 0; dir < 2; ++dir) {
    Word base = r;
    if (dir) base = inverse_word(r);
    for (int s = 0; s < n; ++s) {
      Word c;
      for (int k = 0; k < n; ++k) c.push_back(base[(s + k) % n]);
      cycles.push_back(c);
    }
  }
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] == (w[i + 1] ^ 1)) {
        w.erase(w.begin() + i, w.begin() + i + 2);
        again = true;
        break;
      }
    if (again) continue;
    for (std::size_t i = 0; i < w.size() && !again; ++i)
      for (const Word& c : cycles) {
        int m = 0;
        while (m < n && i + m < w.size() && w[i + m] == c[m]) ++m;
        if (2 * m > n) {
          Word rest;
          for (int k = n - 1; k >= m; --k) rest.push_back(c[k] ^ 1);
          w.erase(w.begin() + i, w.begin() + i + m);
          w.insert(w.begin() + i, rest.begin(), rest.end());
          again = true;
          break;
        }
      }
  }
  return w;
}

std::size_t naive_surface_ball(int genus, int radius) {
  std::vector<Word> words{{}};
  std::vector<Word> reps{{}};
  std::size_t begin = 0;
  for (int k = 0; k < radius; ++k) {
    std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int l = 0; l < 4 * genus; ++l) {
        if (!words[i].empty() && words[i].back() == (l ^ 1)) continue;
        Word w = words[i];
        w.push_back(l);
        words.push_back(w);
      }
    begin = end;
  }
  for (const Word& w : words) {
    bool fresh = true;
    for (const Word& r : reps) {
      Word probe = w;
      Word inv = inverse_word(r);
      probe.insert(probe.end(), inv.begin(), inv.end());
      if (naive_dehn(probe, genus).empty()) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(w);
  }
  return reps.size();
}

// Ball size by breadth-first search over generator moves, using only
// multiply and equality of elements.
std::size_t bfs_ball(const MarkedGroup& g, int radius) {
  std::set<Element> seen{g.identity()};
  std::vector<Element> frontier{g.identity()};
  for (int k = 0; k < radius; ++k) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (Letter l = 0; l < 2 * g.num_generators(); ++l) {
        Element y = g.multiply(x, g.letter(l));
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen.size();
}

Word random_word(std::mt19937& rng, int letters, int length) {
  std::uniform_int_distribution<int> pick(0, letters - 1);
  Word w;
  for (int i = 0; i < length; ++i) w.push_back(pick(rng));
  return w;
}

std::vector<MarkedGroup> all_kinds() {
  return {MarkedGroup::free_abelian(2), MarkedGroup::free_group(2), MarkedGroup::surface(2),
          MarkedGroup::cyclic(5)};
}

}  // namespace

TEST_CASE("normal forms of the documented words") {
  auto z2 = MarkedGroup::free_abelian(2);
  CHECK(z2.parse("a b a^-1").data == std::vector<int>{0, 1});
  auto f2 = MarkedGroup::free_group(2);
  CHECK(f2.format(f2.parse("a b b^-1 a")) == "a^2");
  auto s2 = MarkedGroup::surface(2);
  CHECK(s2.is_identity(s2.parse("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")));
  CHECK_FALSE(s2.is_identity(s2.parse("a1 b1 a1^-1 b1^-1")));
  CHECK_THROWS_AS(z2.parse("a q"), InputError);
}

TEST_CASE("ball sizes match closed forms and BFS") {
  auto z2 = MarkedGroup::free_abelian(2);
  auto f2 = MarkedGroup::free_group(2);
  for (int r = 0; r <= 4; ++r) {
    CHECK(z2.ball(r).size() == static_cast<std::size_t>(2 * r * r + 2 * r + 1));
    std::size_t p = 1;
    for (int i = 0; i < r; ++i) p *= 3;
    CHECK(f2.ball(r).size() == 2 * p - 1);
    for (const auto& g : all_kinds()) CHECK(g.ball(r).size() == bfs_ball(g, r));
  }
  CHECK(MarkedGroup::surface(2).ball(1).size() == 9);
  for (int r = 0; r <= 3; ++r) CHECK(MarkedGroup::surface(2).ball(r).size() == naive_surface_ball(2, r));
  CHECK(MarkedGroup::cyclic(7).ball(0).size() == 1);
}

TEST_CASE("budget exceeded is a resource error") {
  auto f2 = MarkedGroup::free_group(2);
  CHECK_THROWS_AS(f2.ball(9), ResourceError);
  auto s2 = MarkedGroup::surface(2);
  CHECK_THROWS_AS(s2.ball(7), ResourceError);
}

TEST_CASE("normal form invariants on random words") {
  std::mt19937 rng(7);
  for (const auto& g : all_kinds()) {
    const int letters = 2 * g.num_generators();
    for (int trial = 0; trial < 60; ++trial) {
      Word w = random_word(rng, letters, 1 + trial % (g.kind() == GroupKind::Surface ? 6 : 12));
      Word nf = g.normal_form(w);
      CHECK(g.normal_form(nf) == nf);
      Word ww = w;
      if (ww.size() > 8) ww.resize(8);
      Word inv = inverse_word(ww);
      ww.insert(ww.end(), inv.begin(), inv.end());
      CHECK(g.is_identity(g.evaluate(ww)));
    }
  }
}

TEST_CASE("word metric on ball(3)") {
  for (const auto& g : all_kinds()) {
    auto b = g.ball(g.kind() == GroupKind::Surface ? 2 : 3);
    if (b.size() > 60) b.resize(60);
    for (const auto& x : b)
      for (const auto& y : b) {
        const int d = g.distance(x, y);
        CHECK(d == g.distance(y, x));
        CHECK((d == 0) == (x == y));
        for (std::size_t k = 0; k < b.size(); k += 7) CHECK(d <= g.distance(x, b[k]) + g.distance(b[k], y));
      }
  }
}

TEST_CASE("finite table validation") {
  CHECK_THROWS_AS(MarkedGroup::finite({{0, 1}, {0, 1}}, {1}), InputError);
  CHECK_THROWS_AS(MarkedGroup::finite({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {}), InputError);
  auto c3 = MarkedGroup::cyclic(3);
  CHECK(c3.order() == 3);
  CHECK(c3.is_identity(c3.parse("g1^3")));
}

TEST_CASE("Følner boxes") {
  FolnerScheme z2(MarkedGroup::free_abelian(2));
  CHECK(z2.set(2).size() == 25);
  // Direct count of the inner boundary from the definition.
  auto g = z2.group();
  for (int t = 1; t <= 4; ++t) {
    auto f = z2.set(t);
    std::set<Element> in(f.begin(), f.end());
    std::size_t count = 0;
    for (const auto& x : f)
      for (const auto& y : g.neighbors(x))
        if (!in.count(y)) {
          ++count;
          break;
        }
    CHECK(z2.boundary_size(t) == count);
  }
  CHECK_THROWS_AS(FolnerScheme(MarkedGroup::free_group(2)), UnsupportedError);
  FolnerScheme fin(MarkedGroup::cyclic(4));
  CHECK(fin.boundary_size(3) == 0);
}
