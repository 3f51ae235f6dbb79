#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ulef/error.hpp"
#include "ulef/fixpoint.hpp"
#include "ulef/ufh.hpp"

using namespace ulef;

namespace {

const std::vector<int> kRotation{2, 3, 4, 5, 0, 1};  // cyclic x -> y -> z about (1,1,1)
const std::vector<int> kAntipodal{1, 0, 3, 2, 5, 4};

CoverPoint at_identity(const MarkedGroup& g, std::vector<std::pair<int, Rational>> t) {
  std::vector<std::pair<Cell, Rational>> v;
  for (auto& [i, w] : t) v.push_back({Cell{g.identity(), 0, i}, w});
  return normalize(v);
}

// Rotation on Sd^1 of the octahedron with the images of the two face
// barycenters on the rotation axis moved off center, so the fixed points
// leave the subdivision vertices.
SelfMapModel perturbed_rotation() {
  auto oct = octahedron();
  PLSelfMap m = induced_vertex_permutation(oct.complex, 1, kRotation);
  const MarkedGroup& g = oct.complex.group();
  auto img = m.image;
  img[0] = at_identity(g, {{0, Rational(1, 2)}, {2, Rational(1, 4)}, {4, Rational(1, 4)}});
  img[7] = at_identity(g, {{1, Rational(1, 5)}, {3, Rational(2, 5)}, {5, Rational(2, 5)}});
  return SelfMapModel{make_pl_map(oct.complex, 1, img)};
}

SelfMapModel sine_map(int t, const std::string& amplitude = "0.2") {
  return SelfMapModel{AnalyticSelfMap{
      TorusChart(sine_torus(), t),
      AnalyticField(2, {amplitude + "*sin(2*pi*x)", amplitude + "*sin(2*pi*y)"},
                    {{amplitude + "*2*pi*cos(2*pi*x)", "0"}, {"0", amplitude + "*2*pi*cos(2*pi*y)"}})}};
}

}  // namespace

TEST_CASE("rotation of the octahedron fixes the two axis face barycenters") {
  auto oct = octahedron();
  SelfMapModel m{vertex_map_model(oct.complex, 0, kRotation)};
  const auto pts = find_fixed_points(m, 0);
  REQUIRE(pts.size() == 2);
  const MarkedGroup& g = m.group();
  const CoverPoint north = at_identity(g, {{0, Rational(1, 3)}, {2, Rational(1, 3)}, {4, Rational(1, 3)}});
  const CoverPoint south = at_identity(g, {{1, Rational(1, 3)}, {3, Rational(1, 3)}, {5, Rational(1, 3)}});
  CHECK(((pts[0].point == north && pts[1].point == south) || (pts[0].point == south && pts[1].point == north)));
  // A rotation by 2pi/3 has I - Df with determinant 3 in any chart.
  for (const auto& p : pts) CHECK(local_index(m, p) == 1);
  const auto res = lefschetz_class(m);
  CHECK(res.tameness.verdict == "strongly tame");
  CHECK(res.function == ClassFunction{2, {}});
  const auto o = equivariant_oracle_check(m);
  CHECK(o.classical == 2);
  CHECK(o.equal);
}

TEST_CASE("antipodal map is fixed-point free") {
  auto oct = octahedron();
  SelfMapModel m{vertex_map_model(oct.complex, 0, kAntipodal)};
  CHECK(find_fixed_points(m, 0).empty());
  const auto t = tameness_check(m);
  CHECK(t.verdict == "strongly tame");
  CHECK(t.fixed_point_free);
  // Antipodal vertices are at chordal distance 1.
  CHECK(t.max_displacement == doctest::Approx(1));
  const auto o = equivariant_oracle_check(m);
  CHECK(o.classical == 0);
  CHECK(o.index_sum == 0);
}

TEST_CASE("identity is not tame") {
  SelfMapModel m{vertex_map_model(tetrahedron_boundary(), 0, {0, 1, 2, 3})};
  CHECK_THROWS_AS(find_fixed_points(m, 0), TamenessError);
  CHECK(tameness_check(m).verdict == "not tame");
  CHECK_THROWS_AS(lefschetz_class(m), TamenessError);
  CHECK_THROWS_AS(equivariant_oracle_check(m), TamenessError);
}

TEST_CASE("fixed points on subdivision vertices are refused") {
  auto oct = octahedron();
  SelfMapModel m{induced_vertex_permutation(oct.complex, 1, kRotation)};
  CHECK_THROWS_WITH_AS(find_fixed_points(m, 0), doctest::Contains("subdivide"), TamenessError);
  CHECK(tameness_check(m).verdict == "tame");
}

TEST_CASE("images must stay in one closed simplex") {
  auto oct = octahedron();
  // 0 -> 0, 2 -> 1 puts the face {0, 2, 4} across two antipodal vertices.
  CHECK_THROWS_AS(vertex_map_model(oct.complex, 0, {0, 0, 1, 3, 4, 5}), ValidationError);
  CHECK_THROWS_AS(vertex_map_model(oct.complex, 0, {0, 1}), InputError);
}

TEST_CASE("perturbed rotation keeps the class under subdivision") {
  const SelfMapModel m = perturbed_rotation();
  const auto a = lefschetz_class(m);
  REQUIRE(a.points.size() == 2);
  for (const auto& p : a.points) {
    CHECK(p.index == 1);
    for (double b : p.barycentric) CHECK(b > 0);
  }
  const auto b = lefschetz_class(refine(m));
  CHECK(b.points.size() == 2);
  CHECK(a.function == b.function);
  CHECK(a.function == ClassFunction{2, {}});
}

TEST_CASE("torus translation by a grid step") {
  const Torus t = square_torus(3);
  SelfMapModel m{torus_translation(t, 0, {Rational(1, 3), Rational(0)})};
  CHECK(find_fixed_points(m, 2).empty());
  const auto c = lefschetz_class(m);
  CHECK(c.function == ClassFunction{});
  CHECK(lefschetz_class(refine(m)).function == c.function);
  const auto o = equivariant_oracle_check(m);
  CHECK(o.classical == 0);
  CHECK(o.equal);
  CHECK_THROWS_AS(torus_translation(t, 0, {Rational(1, 5), Rational(1, 7)}), ValidationError);
}

TEST_CASE("sine displacement: four fixed points with indices +1 -1 -1 +1") {
  const SelfMapModel m = sine_map(0);
  const auto pts = find_fixed_points(m, 0);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    REQUIRE(p.exact);
    const double x = p.position[0].convert_to<double>(), y = p.position[1].convert_to<double>();
    // det(I - Df) = (1 - 0.4 pi cos 2 pi x)(1 - 0.4 pi cos 2 pi y), 0.4 pi > 1.
    const double a = 1 - 0.4 * std::numbers::pi * std::cos(2 * std::numbers::pi * x);
    const double b = 1 - 0.4 * std::numbers::pi * std::cos(2 * std::numbers::pi * y);
    const int expected = a * b > 0 ? 1 : -1;
    CHECK(local_index(m, p) == expected);
    CHECK(local_index(m, p, p.enclosure / 2) == expected);
    CHECK(local_index(m, p, 1e-3) == expected);
  }
  const auto t = tameness_check(m);
  CHECK(t.verdict == "strongly tame");
  CHECK(t.delta == Rational(1, 4));
  CHECK(t.epsilon > 0);
  const auto c = lefschetz_class(m);
  CHECK(c.function == ClassFunction{});
  const auto o = equivariant_oracle_check(m);
  CHECK(o.classical == 0);
  CHECK(o.equal);
}

TEST_CASE("sine displacement: deck invariance of indices") {
  const SelfMapModel m = sine_map(0);
  const auto pts = find_fixed_points(m, 2);
  CHECK(pts.size() == 4 * m.group().ball(2).size());
  for (const auto& p : pts) {
    RationalVector base = p.position;
    for (auto& c : base) c -= Rational(static_cast<long long>(std::floor(c.convert_to<double>())));
    const double x = base[0].convert_to<double>(), y = base[1].convert_to<double>();
    const int expected = x == y ? 1 : -1;  // (0,0), (1/2,1/2) versus the mixed points
    CHECK(local_index(m, p) == expected);
    CHECK(p.coset == p.host->deck);
  }
}

TEST_CASE("sine displacement: subdivision and scaling stability") {
  const auto c0 = lefschetz_class(sine_map(0)).function;
  CHECK(lefschetz_class(sine_map(1)).function == c0);
  CHECK(lefschetz_class(refine(sine_map(0))).function == c0);
  const SelfMapModel scaled = scale_displacement(sine_map(0), Rational(3, 2));
  CHECK(lefschetz_class(scaled).function == c0);
  CHECK(lefschetz_class(sine_map(0, "0.3")).function == c0);
}

TEST_CASE("constant displacement has no fixed points") {
  SelfMapModel m{AnalyticSelfMap{TorusChart(sine_torus(), 0), AnalyticField(2, {"0.3", "0"})}};
  CHECK(find_fixed_points(m, 1).empty());
  const auto t = tameness_check(m);
  CHECK(t.fixed_point_free);
  CHECK(t.verdict == "strongly tame");
  CHECK(t.epsilon <= Rational(3, 10));
  CHECK(t.epsilon > Rational(299, 1000));
  m.declared_bound = Rational(1, 10);
  CHECK_THROWS_AS(tameness_check(m), ValidationError);
}

TEST_CASE("zero displacement is not tame") {
  SelfMapModel m{AnalyticSelfMap{TorusChart(sine_torus(), 0), AnalyticField(2, {"0", "0"})}};
  CHECK(tameness_check(m).verdict == "not tame");
  CHECK_THROWS_AS(lefschetz_class(m), TamenessError);
}

TEST_CASE("override adding a canceling pair in one translate") {
  AnalyticField f(2, {"0.2*sin(2*pi*x)", "0.2*sin(2*pi*y)"});
  const std::string bump = "((x - 0.1)*(0.4 - x))^2*((y + 0.15)*(0.15 - y))^2/(0.15^4*0.15^4)";
  f.add_override({Rational(1, 10), Rational(-3, 20)}, {Rational(2, 5), Rational(3, 20)},
                 {"0.2*sin(2*pi*x) - 0.4*" + bump, "0.2*sin(2*pi*y)"});
  SelfMapModel m{AnalyticSelfMap{TorusChart(sine_torus(), 0), f}};
  const auto c = lefschetz_class(m);
  // The two new points have opposite indices, and their hosts tell the cosets.
  long long added = 0;
  int count = 0;
  for (const auto& p : c.points)
    if (p.piece == 0) {
      added += *p.index;
      ++count;
    }
  CHECK(count == 2);
  CHECK(added == 0);
  CHECK(c.function.constant == 0);
  CHECK(total_mass(c.function) == 0);
  const auto d = decide_class(m.group(), c.function);
  CHECK(d.verdict == "zero-by-boundary");
  CHECK_THROWS_AS(equivariant_oracle_check(m), ValidationError);
}

TEST_CASE("index data ingestion") {
  const auto d = ingest_index_data(json::parse(R"({"group": {"kind": "free-abelian", "rank": 1}, "constant": 2})"));
  CHECK(d.function == ClassFunction{2, {}});
  CHECK(d.note == "externally supplied index data");
  const auto e = ingest_index_data(json::parse(R"({"group": {"kind": "trivial"}, "constant": 0, "finite": []})"));
  CHECK(e.function == ClassFunction{});
  CHECK_THROWS_AS(ingest_index_data(json::parse(R"({"constant": 2})")), InputError);
}
