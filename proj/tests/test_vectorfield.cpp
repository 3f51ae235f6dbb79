#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "ulef/error.hpp"
#include "ulef/vectorfield.hpp"

using namespace ulef;

namespace {

VectorFieldModel sine_field(int t) {
  return VectorFieldModel{TorusField{TorusChart(sine_torus(), t), AnalyticField(2, {"sin(2*pi*x)", "sin(2*pi*y)"})}};
}

// Bump that is 1 at the center of [a, b] x [-c, c] and vanishes to second
// order on its boundary.
std::string bump(double a, double b, double c) {
  const double h = (b - a) / 2;
  return "((x - " + std::to_string(a) + ")*(" + std::to_string(b) + " - x))^2*((y + " + std::to_string(c) + ")*(" +
         std::to_string(c) + " - y))^2/(" + std::to_string(h) + "^4*" + std::to_string(c) + "^4)";
}

// A bump against the sign of 0.2 sin(2 pi x) on [a, b] x [-0.15, 0.15]
// creates two zeros of opposite index.
VectorFieldModel with_pair(double a, double b, const std::string& sign) {
  AnalyticField f(2, {"0.2*sin(2*pi*x)", "0.2*sin(2*pi*y)"});
  f.add_override({Rational(a), Rational(-3, 20)}, {Rational(b), Rational(3, 20)},
                 {"0.2*sin(2*pi*x) " + sign + " 0.4*" + bump(a, b, 0.15), "0.2*sin(2*pi*y)"});
  return VectorFieldModel{TorusField{TorusChart(sine_torus(), 0), f}};
}

RealizedField sphere_field(const std::vector<RationalVector>& w) {
  return make_realized_field(tetrahedron_boundary(), tetrahedron_positions(), w);
}

RationalVector cross(const RationalVector& a, const RationalVector& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::vector<int> indices(const std::vector<ZeroRecord>& z) {
  std::vector<int> out;
  for (const auto& r : z) out.push_back(*r.index);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("sine field on the torus") {
  const auto v = sine_field(0);
  const auto zs = find_zeros(v, 0);
  REQUIRE(zs.size() == 4);
  // Jacobian diag(2 pi cos 2 pi x, 2 pi cos 2 pi y): the sign is the product of the cosine signs.
  for (const auto& z : zs) {
    const double x = z.position[0].convert_to<double>(), y = z.position[1].convert_to<double>();
    const int expected = (std::cos(2 * std::numbers::pi * x) > 0) == (std::cos(2 * std::numbers::pi * y) > 0) ? 1 : -1;
    CHECK(field_index(v, z) == expected);
    CHECK(field_index(v, z, 1e-3) == expected);
  }
  const auto r = index_class(v);
  CHECK(indices(r.zeros) == std::vector<int>{-1, -1, 1, 1});
  CHECK(r.function == ClassFunction{});
  CHECK(r.tameness.verdict == "strongly tame");
  CHECK(index_class(sine_field(1)).function == r.function);
  const auto ph = poincare_hopf_check(v, r);
  CHECK(ph.euler_characteristic == 0);
  CHECK(ph.verdict.rfind("consistent", 0) == 0);
}

TEST_CASE("negating a surface field keeps every index") {
  const auto v = sine_field(0);
  const auto a = index_class(v), b = index_class(negate(v));
  REQUIRE(a.zeros.size() == b.zeros.size());
  for (std::size_t i = 0; i < a.zeros.size(); ++i) CHECK(*a.zeros[i].index == *b.zeros[i].index);
}

TEST_CASE("degenerate zeros of the squared sine field") {
  // (s_x + i s_y)^2 has index 2 where the chart is orientation preserving
  // and -2 where one sine is reflected.
  VectorFieldModel v{TorusField{TorusChart(sine_torus(), 0),
                                AnalyticField(2, {"sin(2*pi*x)^2 - sin(2*pi*y)^2", "2*sin(2*pi*x)*sin(2*pi*y)"})}};
  const auto r = index_class(v);
  CHECK(indices(r.zeros) == std::vector<int>{-2, -2, 2, 2});
  CHECK(r.function == ClassFunction{});
}

TEST_CASE("constant field on the zero field is not tame") {
  VectorFieldModel v{TorusField{TorusChart(sine_torus(), 0), AnalyticField(2, {"0", "0"})}};
  CHECK(field_tameness(v).verdict == "not tame");
  CHECK_THROWS_AS(index_class(v), TamenessError);
}

TEST_CASE("canceling pairs leave the index class unchanged") {
  const auto base = index_class(sine_field(0)).function;
  const MarkedGroup& g = sine_field(0).group();
  for (auto [a, b, sign] : {std::tuple{0.1, 0.4, "-"}, std::tuple{0.52, 0.72, "+"}}) {
    const auto v = with_pair(a, b, sign);
    const auto r = index_class(v);
    std::vector<ZeroRecord> added;
    for (const auto& z : r.zeros)
      if (z.piece == 0) added.push_back(z);
    REQUIRE(added.size() == 2);
    CHECK(*added[0].index + *added[1].index == 0);
    CHECK(r.function.constant == base.constant);
    long long mass = 0;
    for (const auto& [e, val] : r.function.finite) mass += val;
    CHECK(mass == 0);
    const auto d = decide_class(g, r.function);
    CHECK(d.verdict == "zero-by-boundary");
    CHECK(poincare_hopf_check(v, r).verdict.rfind("consistent", 0) == 0);
    if (a > 0.5) {
      // This box straddles a translate boundary, so the pair splits.
      CHECK(!(added[0].coset == added[1].coset));
      CHECK(r.function.finite.size() == 2);
    } else {
      CHECK(added[0].coset == added[1].coset);
      CHECK(r.function.finite.empty());
    }
  }
}

TEST_CASE("constant ambient field on the realized tetrahedron") {
  const RationalVector dir{1, 2, 3};
  VectorFieldModel v{constant_direction_field(tetrahedron_boundary(), tetrahedron_positions(), dir)};
  const auto zs = find_zeros(v, 0);
  REQUIRE(zs.size() == 2);
  // Zeros sit on the rays +-dir: positions are parallel to dir.
  const auto pos = tetrahedron_positions();
  for (const auto& z : zs) {
    std::vector<double> x(3, 0.0);
    for (const auto& [c, w] : z.point.terms)
      for (int i = 0; i < 3; ++i) x[i] += w.convert_to<double>() * pos[c.id][i].convert_to<double>();
    CHECK(std::abs(x[0] * 2 - x[1]) < 1e-12);
    CHECK(std::abs(x[0] * 3 - x[2]) < 1e-12);
    CHECK(z.exact);
  }
  const auto r = index_class(v);
  // Source and sink on a surface both have index +1.
  CHECK(indices(r.zeros) == std::vector<int>{1, 1});
  CHECK(r.function == ClassFunction{2, {}});
  CHECK(poincare_hopf_check(v, r).verdict.rfind("consistent", 0) == 0);
  CHECK(indices(index_class(negate(v)).zeros) == std::vector<int>{1, 1});
}

TEST_CASE("rotation field on the realized tetrahedron") {
  const RationalVector axis{1, 2, 3};
  std::vector<RationalVector> w;
  for (const auto& p : tetrahedron_positions()) w.push_back(cross(axis, p));
  VectorFieldModel v{sphere_field(w)};
  const auto r = index_class(v);
  CHECK(indices(r.zeros) == std::vector<int>{1, 1});
  CHECK(r.function.constant == 2);
  for (const auto& z : r.zeros) CHECK(field_index(v, z, 1e-3) == 1);
  // About a coordinate axis the zeros land on edge midpoints.
  std::vector<RationalVector> wz;
  for (const auto& p : tetrahedron_positions()) wz.push_back(cross({0, 0, 1}, p));
  VectorFieldModel vz{sphere_field(wz)};
  const auto t = field_tameness(vz);
  CHECK(t.verdict == "tame");
  CHECK(t.witnesses.size() == 2);
  CHECK_THROWS_AS(index_class(vz), TamenessError);
}

TEST_CASE("realized field validation") {
  CHECK_THROWS_AS(make_realized_field(tetrahedron_boundary(), tetrahedron_positions(), {{1, 0, 0}}), InputError);
  auto pos = tetrahedron_positions();
  pos[0] = {-1, 1, 1};
  CHECK_THROWS_AS(constant_direction_field(tetrahedron_boundary(), pos, {1, 0, 0}), InputError);
  VectorFieldModel v{constant_direction_field(tetrahedron_boundary(), tetrahedron_positions(), {1, 2, 3})};
  v.declared_bound = Rational(1, 100);
  CHECK_THROWS_AS(field_tameness(v), ValidationError);
}

TEST_CASE("external index data on the genus-2 surface") {
  const auto d = ingest_index_data(json::parse(R"({"group": {"kind": "surface", "genus": 2}, "constant": -2})"));
  const int chi = genus2_surface().euler_characteristic();
  CHECK(chi == -2);
  // Keep the flow radii small; the surface group ball grows fast.
  const DecideOptions small{{3, 4}};
  const auto ok = poincare_hopf_check(d.group, d.function, chi, small);
  CHECK(ok.verdict.rfind("consistent", 0) == 0);
  CHECK(ok.difference == ClassFunction{});
  // Any constant is a boundary over a non-amenable group.
  ClassFunction other = d.function;
  other.constant = 0;
  CHECK(poincare_hopf_check(d.group, other, chi, small).verdict.rfind("consistent", 0) == 0);
  // Over Z^2 a nonzero constant is detected by its mean.
  const auto bad = poincare_hopf_check(MarkedGroup::free_abelian(2), ClassFunction{1, {}}, 0);
  CHECK(bad.difference == ClassFunction{1, {}});
  CHECK(bad.verdict.rfind("counterexample", 0) == 0);
}
