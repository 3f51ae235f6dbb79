#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ulef/analytic.hpp"
#include "ulef/error.hpp"

using namespace ulef;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kSine = {"sin(2*pi*x)", "sin(2*pi*y)"};
const std::vector<std::string> kSquared = {"sin(2*pi*x)^2 - sin(2*pi*y)^2", "2*sin(2*pi*x)*sin(2*pi*y)"};

// Bump equal to 1 at (1/4, 0) and vanishing to second order on the box edges.
const std::string kBump = "((x - 0.1)*(0.4 - x))^2*((y + 0.15)*(0.15 - y))^2/(0.15^4*0.15^4)";

}  // namespace

TEST_CASE("expressions evaluate and differentiate") {
  const auto names = variable_names(2);
  const Expr e = Expr::parse("x^3*sin(y) - exp(x/2) + 0.25", names);
  const std::vector<double> p{0.7, -1.3};
  CHECK(e.eval(p) == doctest::Approx(std::pow(0.7, 3) * std::sin(-1.3) - std::exp(0.35) + 0.25));
  for (int v = 0; v < 2; ++v) {
    auto a = p, b = p;
    a[v] += 1e-6;
    b[v] -= 1e-6;
    const double fd = (e.eval(a) - e.eval(b)) / 2e-6;
    CHECK(e.derivative(v).eval(p) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK_THROWS_AS(Expr::parse("x +* y", names), InputError);
  CHECK_THROWS_AS(Expr::parse("z", names), InputError);
  CHECK(Expr::parse("x - x", names).derivative(1).is_zero());
}

TEST_CASE("interval evaluation encloses sampled values") {
  const auto names = variable_names(2);
  const Expr e = Expr::parse("sin(2*pi*x)*cos(3*y) + exp(-x*y)", names);
  const IntervalVector box{Interval(0.1, 0.45), Interval(-0.4, 0.9)};
  const Interval r = e.eval(box);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double x = 0.1 + 0.35 * i / 20, y = -0.4 + 1.3 * j / 20;
      CHECK(r.contains(e.eval(std::vector<double>{x, y})));
    }
  CHECK(sin(Interval(1.5, 1.7)).hi == 1.0);
}

TEST_CASE("declared derivatives are checked") {
  CHECK_NOTHROW(AnalyticField(2, kSine, {{"2*pi*cos(2*pi*x)", "0"}, {"0", "2*pi*cos(2*pi*y)"}}));
  CHECK_THROWS_AS(AnalyticField(2, kSine, {{"2*pi*cos(2*pi*x)", "0"}, {"0", "cos(2*pi*y)"}}), InputError);
  CHECK_THROWS_AS(AnalyticField(2, {"x"}), InputError);
}

TEST_CASE("sine field zeros are the half-period points with alternating signs") {
  const AnalyticField f(2, kSine);
  const ZeroSearch s = periodic_zeros(f, 16);
  REQUIRE(s.zeros.size() == 4);
  for (const auto& z : s.zeros) {
    REQUIRE(z.exact);
    CHECK(z.validation == "krawczyk");
    // det Du = 4 pi^2 cos(2 pi x) cos(2 pi y).
    const double expected = std::cos(2 * kPi * z.point[0]) * std::cos(2 * kPi * z.point[1]);
    CHECK(jacobian_sign(f.base(), z.point, z.radius) == (expected > 0 ? 1 : -1));
    CHECK(boundary_degree(f.base(), z.point, 0.01) == (expected > 0 ? 1 : -1));
    for (const auto& c : *z.exact) CHECK((c == 0 || c == Rational(1, 2)));
  }
}

TEST_CASE("degenerate zeros are validated by degree") {
  const AnalyticField f(2, kSquared);
  const ZeroSearch s = periodic_zeros(f, 16);
  REQUIRE(s.zeros.size() == 4);
  for (const auto& z : s.zeros) {
    CHECK(z.validation == "degree");
    CHECK_FALSE(jacobian_sign(f.base(), z.point, 1e-3));
    // Squaring in C doubles the winding of (sin 2 pi x, sin 2 pi y).
    const double c = std::cos(2 * kPi * z.point[0]) * std::cos(2 * kPi * z.point[1]);
    CHECK(boundary_degree(f.base(), z.point, 0.01) == (c > 0 ? 2 : -2));
  }
}

TEST_CASE("boundary degree of linear maps") {
  const AnalyticField id(2, {"x - 0.3", "y - 0.3"});
  CHECK(boundary_degree(id.base(), {0.3, 0.3}, 0.1) == 1);
  const AnalyticField flip(2, {"x", "-y"});
  CHECK(boundary_degree(flip.base(), {0, 0}, 0.1) == -1);
  const AnalyticField far(2, {"x - 5", "y"});
  CHECK(boundary_degree(far.base(), {0, 0}, 0.1) == 0);
  CHECK_THROWS_AS(boundary_degree(id.base(), {0.3, 0.2}, 0.1), ValidationError);
  const AnalyticField line(1, {"x^2 - 0.25"});
  CHECK(boundary_degree(line.base(), {0.5}, 0.1) == 1);
  CHECK(boundary_degree(line.base(), {-0.5}, 0.1) == -1);
}

TEST_CASE("overrides add a canceling pair inside their box") {
  AnalyticField f(2, kSine);
  f.add_override({Rational(1, 10), Rational(-3, 20)}, {Rational(2, 5), Rational(3, 20)},
                 {"sin(2*pi*x) - 2*" + kBump, "sin(2*pi*y)"});
  const ZeroSearch s = override_zeros(f, 0, 64);
  REQUIRE(s.zeros.size() == 2);
  // Along y = 0 the first component changes sign + to - then - to +.
  auto v1 = [&](double x) { return f.overrides()[0].piece.value(std::vector<double>{x, 0})[0]; };
  CHECK(v1(0.25) < 0);
  CHECK(v1(0.1 + 1e-3) > 0);
  CHECK(v1(0.4 - 1e-3) > 0);
  CHECK(s.zeros[0].point[0] < 0.25);
  CHECK(s.zeros[1].point[0] > 0.25);
  CHECK(jacobian_sign(f.overrides()[0].piece, s.zeros[0].point, s.zeros[0].radius) == -1);
  CHECK(jacobian_sign(f.overrides()[0].piece, s.zeros[1].point, s.zeros[1].radius) == 1);
  CHECK(&f.piece_at({0.25, 0}) == &f.overrides()[0].piece);
  CHECK(&f.piece_at({0.25, 0.5}) == &f.base());

  CHECK_THROWS_AS(f.add_override({Rational(0), Rational(0)}, {Rational(1, 5), Rational(1, 5)}, {"x", "y"}),
                  InputError);
}

TEST_CASE("fields serialize and scale") {
  AnalyticField f(2, kSine);
  f.add_override({Rational(1, 10), Rational(-3, 20)}, {Rational(2, 5), Rational(3, 20)},
                 {"sin(2*pi*x) - 2*" + kBump, "sin(2*pi*y)"});
  const AnalyticField g = AnalyticField::from_json(f.to_json(), 2);
  REQUIRE(g.overrides().size() == 1);
  CHECK(g.overrides()[0].lo[1] == Rational(-3, 20));
  const std::vector<double> p{0.31, 0.02};
  CHECK(g.piece_at(p).value(p)[0] == doctest::Approx(f.piece_at(p).value(p)[0]));
  const AnalyticField h = f.scaled(Rational(3, 10));
  CHECK(h.piece_at(p).value(p)[0] == doctest::Approx(0.3 * f.piece_at(p).value(p)[0]));
  CHECK(h.base().jacobian[0][0].eval(p) == doctest::Approx(0.3 * 2 * kPi * std::cos(2 * kPi * 0.31)));
}

TEST_CASE("torus chart hosts points in open top simplices") {
  const TorusChart chart(sine_torus(), 0);
  chart.require_unit_periods();
  for (double x : {0.0, 0.5})
    for (double y : {0.0, 0.5}) {
      const auto h = chart.host(std::vector<double>{x, y});
      REQUIRE(h);
      CHECK(h->clearance > 0);
      double sum = 0;
      std::vector<double> back(2, 0.0);
      const auto verts = chart.vertices(h->cell);
      for (int i = 0; i < 3; ++i) {
        sum += h->barycentric[i];
        for (int r = 0; r < 2; ++r) back[r] += h->barycentric[i] * verts[i][r];
      }
      CHECK(sum == doctest::Approx(1));
      CHECK(back[0] == doctest::Approx(x));
      CHECK(back[1] == doctest::Approx(y));
    }
  const TorusChart plain(square_torus(3), 0);
  CHECK_FALSE(plain.host(std::vector<double>{0, 0}));
  CHECK_FALSE(plain.host(std::vector<double>{1.0 / 6, 1.0 / 6}));  // on the Kuhn diagonal
  CHECK(plain.host(std::vector<double>{0.2, 0.1}));
  const TorusChart fine(sine_torus(), 1);
  CHECK(fine.host(std::vector<double>{0.5, 0.5}));
}

TEST_CASE("simplex clearance is the distance to the nearest facet") {
  const std::vector<std::vector<double>> tri{{0, 0}, {1, 0}, {0, 1}};
  const double third = 1.0 / 3;
  CHECK(simplex_clearance(tri, {third, third, third}) == doctest::Approx(third / std::sqrt(2.0)));
  CHECK(simplex_clearance(tri, {0.8, 0.1, 0.1}) == doctest::Approx(0.1));
}

TEST_CASE("rational bounds") {
  CHECK(rational_below(0.5) <= Rational(1, 2));
  CHECK(rational_below(0.5) > Rational(49, 100));
  CHECK(sqrt_below(Rational(9, 16)) == Rational(3, 4));
  const Rational s = sqrt_below(Rational(2));
  CHECK(s * s < 2);
  CHECK(s > Rational(141, 100));
}
