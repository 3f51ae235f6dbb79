#include <algorithm>
#include <cmath>
#include <numbers>

#include "ulef/analytic.hpp"
#include "ulef/error.hpp"

namespace ulef {

namespace {

using Matrix = std::vector<std::vector<double>>;

std::optional<std::vector<double>> solve_dense(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-300) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

std::optional<Matrix> invert(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1;
    auto col = solve_dense(a, e);
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = (*col)[i];
  }
  return inv;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Interval det(const std::vector<IntervalVector>& m) {
  switch (m.size()) {
    case 1: return m[0][0];
    case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    default: throw UnsupportedError("interval determinants are implemented for dimension <= 3");
  }
}

Rational read_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw InputError("expected a rational number, got " + v.dump());
}

// Deterministic sample points for comparing declared and symbolic derivatives.
std::vector<std::vector<double>> probe_points(int n) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 16; ++k) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::fmod(0.1234567 * (k + 1) + 0.3771 * (i + 1) * (k % 5 + 1), 1.0);
    pts.push_back(x);
  }
  return pts;
}

struct Newton {
  std::vector<double> x;
  double residual = 0;
  bool converged = false;
};

Newton newton(const FieldPiece& p, std::vector<double> x, double tolerance) {
  std::vector<double> f = p.value(x);
  double r = norm(f);
  for (int it = 0; it < 200; ++it) {
    if (r == 0) break;
    auto step = solve_dense(p.derivative(x), f);
    if (!step) break;
    double t = 1;
    std::vector<double> y(x.size());
    double ry = r;
    for (; t > 1e-6; t /= 2) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t * (*step)[i];
      ry = norm(p.value(y));
      if (ry < r) break;
    }
    if (ry >= r) break;
    const double moved = t * norm(*step);
    x = y;
    f = p.value(x);
    r = ry;
    if (moved < 1e-15) break;
  }
  return {x, r, r < tolerance};
}

std::optional<RationalVector> snap(const std::vector<double>& x) {
  RationalVector out;
  for (double c : x) {
    bool found = false;
    for (long q = 1; q <= 64 && !found; ++q) {
      const double p = std::round(c * q);
      if (std::abs(c - p / q) < 1e-9) {
        out.push_back(Rational(static_cast<long long>(p), q));
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

bool krawczyk(const FieldPiece& p, const std::vector<double>& c, double r) {
  const std::size_t n = c.size();
  auto y = invert(p.derivative(c));
  if (!y) return false;
  IntervalVector point(n), box(n);
  for (std::size_t i = 0; i < n; ++i) {
    point[i] = Interval(c[i]);
    box[i] = Interval::around(c[i], r);
  }
  const IntervalVector fc = p.value(point);
  const auto jx = p.derivative(box);
  for (std::size_t i = 0; i < n; ++i) {
    Interval k = point[i];
    for (std::size_t j = 0; j < n; ++j) k = k - Interval((*y)[i][j]) * fc[j];
    for (std::size_t j = 0; j < n; ++j) {
      Interval m(i == j ? 1.0 : 0.0);
      for (std::size_t l = 0; l < n; ++l) m = m - Interval((*y)[i][l]) * jx[l][j];
      k = k + m * (box[j] - point[j]);
    }
    if (!k.subset_interior(box[i])) return false;
  }
  return true;
}

void validate(const FieldPiece& p, AnalyticZero& z) {
  if (auto e = snap(z.point)) {
    std::vector<double> c;
    for (const auto& v : *e) c.push_back(v.convert_to<double>());
    z.point = c;
    z.exact = e;
  }
  for (double r : {1e-10, 1e-8, 1e-6}) {
    if (krawczyk(p, z.point, r)) {
      z.radius = r;
      z.validation = "krawczyk";
      return;
    }
  }
  if (z.point.size() <= 2) {
    for (double h : {1e-6, 1e-4}) {
      try {
        if (boundary_degree(p, z.point, h) != 0) {
          z.radius = h;
          z.validation = "degree";
          return;
        }
      } catch (const ValidationError&) {
      }
    }
  }
  z.radius = 1e-6;
  z.validation = "none";
  z.exact.reset();
}

std::vector<std::vector<double>> grid_starts(const std::vector<double>& lo, const std::vector<double>& hi, int per_unit) {
  const std::size_t n = lo.size();
  std::vector<int> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = std::max(1, static_cast<int>(std::ceil((hi[i] - lo[i]) * per_unit)));
  std::vector<std::vector<double>> out;
  std::vector<int> idx(n, 0);
  for (;;) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo[i] + (idx[i] + 0.5) * (hi[i] - lo[i]) / counts[i];
    out.push_back(x);
    std::size_t k = 0;
    while (k < n && ++idx[k] == counts[k]) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

double periodic_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    d = std::min(d, 1 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

std::string format_point(const std::vector<double>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + ")";
}

ZeroSearch search(const FieldPiece& p, const std::vector<std::vector<double>>& starts, double tolerance, bool periodic,
                  const FieldOverride* box, int piece) {
  ZeroSearch out;
  constexpr double kMerge = 1e-6;
  std::vector<std::string> cells;
  for (const auto& s : starts) {
    Newton res = newton(p, s, tolerance);
    if (!res.converged) {
      if (res.residual < 1e-3) out.diagnostics.push_back("Newton stalled near " + format_point(res.x) +
                                                         " from the start cell at " + format_point(s));
      continue;
    }
    if (periodic)
      for (double& c : res.x) {
        c -= std::floor(c);
        if (c > 1 - kMerge) c = 0;
      }
    if (box && !box->contains(res.x)) continue;
    bool dup = false;
    for (auto& z : out.zeros) {
      const double d = periodic ? periodic_distance(z.point, res.x) : norm([&] {
        std::vector<double> v(res.x.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = z.point[i] - res.x[i];
        return v;
      }());
      if (d < kMerge) dup = true;
    }
    if (!dup) {
      AnalyticZero z;
      z.point = res.x;
      z.piece = piece;
      out.zeros.push_back(std::move(z));
    }
  }
  for (auto& z : out.zeros) validate(p, z);
  std::sort(out.zeros.begin(), out.zeros.end(), [](const auto& a, const auto& b) { return a.point < b.point; });
  return out;
}

}  // namespace

std::vector<double> FieldPiece::value(const std::vector<double>& x) const {
  std::vector<double> out;
  for (const auto& e : u) out.push_back(e.eval(x));
  return out;
}

std::vector<std::vector<double>> FieldPiece::derivative(const std::vector<double>& x) const {
  std::vector<std::vector<double>> out;
  for (const auto& row : jacobian) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(e.eval(x));
  }
  return out;
}

IntervalVector FieldPiece::value(const IntervalVector& x) const {
  IntervalVector out;
  for (const auto& e : u) out.push_back(e.eval(x));
  return out;
}

std::vector<IntervalVector> FieldPiece::derivative(const IntervalVector& x) const {
  std::vector<IntervalVector> out;
  for (const auto& row : jacobian) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(e.eval(x));
  }
  return out;
}

bool FieldOverride::contains(const std::vector<double>& x, double slack) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i].convert_to<double>() - slack || x[i] > hi[i].convert_to<double>() + slack) return false;
  return true;
}

AnalyticField::AnalyticField(int n, const std::vector<std::string>& components,
                             const std::vector<std::vector<std::string>>& declared_jacobian)
    : n_(n) {
  if (n < 1) throw InputError("field dimension must be positive");
  base_ = make_piece(components, declared_jacobian);
}

FieldPiece AnalyticField::make_piece(const std::vector<std::string>& components,
                                     const std::vector<std::vector<std::string>>& declared) const {
  if (static_cast<int>(components.size()) != n_)
    throw InputError("expected " + std::to_string(n_) + " components, got " + std::to_string(components.size()));
  const auto names = variable_names(n_);
  FieldPiece p;
  p.text = components;
  for (const auto& c : components) p.u.push_back(Expr::parse(c, names));
  for (int i = 0; i < n_; ++i) {
    p.jacobian.emplace_back();
    for (int j = 0; j < n_; ++j) p.jacobian[i].push_back(p.u[i].derivative(j));
  }
  if (declared.empty()) return p;
  if (static_cast<int>(declared.size()) != n_)
    throw InputError("declared jacobian must be " + std::to_string(n_) + " x " + std::to_string(n_));
  const auto probes = probe_points(n_);
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(declared[i].size()) != n_)
      throw InputError("declared jacobian must be " + std::to_string(n_) + " x " + std::to_string(n_));
    for (int j = 0; j < n_; ++j) {
      const Expr d = Expr::parse(declared[i][j], names);
      for (const auto& x : probes) {
        const double a = d.eval(x), b = p.jacobian[i][j].eval(x);
        if (std::abs(a - b) > 1e-9 * (1 + std::abs(b)))
          throw InputError("declared derivative d(" + components[i] + ")/d" + names[j] + " = " + declared[i][j] +
                           " disagrees with " + p.jacobian[i][j].str(names));
      }
    }
  }
  return p;
}

AnalyticField AnalyticField::from_json(const json& doc, int n) {
  try {
    auto jac = doc.value("jacobian", std::vector<std::vector<std::string>>{});
    AnalyticField f(n, doc.at("components").get<std::vector<std::string>>(), jac);
    if (doc.contains("overrides"))
      for (const auto& o : doc.at("overrides")) {
        RationalVector lo, hi;
        for (const auto& side : o.at("box")) {
          lo.push_back(read_rational(side.at(0)));
          hi.push_back(read_rational(side.at(1)));
        }
        f.add_override(lo, hi, o.at("components").get<std::vector<std::string>>(),
                       o.value("jacobian", std::vector<std::vector<std::string>>{}));
      }
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed field expressions: ") + e.what());
  }
}

json AnalyticField::to_json() const {
  const auto names = variable_names(n_);
  auto piece_json = [&](const FieldPiece& p) {
    json jac = json::array();
    for (const auto& row : p.jacobian) {
      json r = json::array();
      for (const auto& e : row) r.push_back(e.str(names));
      jac.push_back(r);
    }
    return json{{"components", p.text}, {"jacobian", jac}};
  };
  json doc = piece_json(base_);
  if (!overrides_.empty()) {
    doc["overrides"] = json::array();
    for (const auto& o : overrides_) {
      json box = json::array();
      for (int i = 0; i < n_; ++i) box.push_back({to_string(o.lo[i]), to_string(o.hi[i])});
      json e = piece_json(o.piece);
      e["box"] = box;
      doc["overrides"].push_back(e);
    }
  }
  return doc;
}

void AnalyticField::add_override(RationalVector lo, RationalVector hi, const std::vector<std::string>& components,
                                 const std::vector<std::vector<std::string>>& declared_jacobian) {
  if (static_cast<int>(lo.size()) != n_ || static_cast<int>(hi.size()) != n_)
    throw InputError("override box has the wrong dimension");
  for (int i = 0; i < n_; ++i)
    if (!(lo[i] < hi[i])) throw InputError("override box sides must have lo < hi");
  FieldOverride o{std::move(lo), std::move(hi), make_piece(components, declared_jacobian)};
  // The override must agree with the periodic piece on the box boundary.
  std::vector<double> l, h;
  for (int i = 0; i < n_; ++i) {
    l.push_back(o.lo[i].convert_to<double>());
    h.push_back(o.hi[i].convert_to<double>());
  }
  for (const auto& s : grid_starts(l, h, 64)) {
    for (int i = 0; i < n_; ++i)
      for (double side : {l[i], h[i]}) {
        auto x = s;
        x[i] = side;
        const auto a = o.piece.value(x), b = base_.value(x);
        for (int k = 0; k < n_; ++k)
          if (std::abs(a[k] - b[k]) > 1e-9)
            throw InputError("override '" + o.piece.text[k] + "' does not match the periodic field on its box boundary");
      }
  }
  overrides_.push_back(std::move(o));
}

const FieldPiece& AnalyticField::piece_at(const std::vector<double>& x) const {
  for (const auto& o : overrides_)
    if (o.contains(x)) return o.piece;
  return base_;
}

AnalyticField AnalyticField::scaled(const Rational& s) const {
  AnalyticField out = *this;
  auto scale = [&](FieldPiece& p) {
    const Expr c = Expr::constant(s);
    for (auto& e : p.u) e = c * e;
    for (auto& row : p.jacobian)
      for (auto& e : row) e = c * e;
    for (auto& t : p.text) t = to_string(s) + "*(" + t + ")";
  };
  scale(out.base_);
  for (auto& o : out.overrides_) scale(o.piece);
  return out;
}

ZeroSearch periodic_zeros(const AnalyticField& f, int grid, double tolerance) {
  if (grid < 1) throw InputError("grid resolution must be positive");
  const std::vector<double> lo(f.dimension(), 0.0), hi(f.dimension(), 1.0);
  return search(f.base(), grid_starts(lo, hi, grid), tolerance, true, nullptr, -1);
}

ZeroSearch override_zeros(const AnalyticField& f, int index, int grid, double tolerance) {
  const auto& o = f.overrides().at(index);
  std::vector<double> lo, hi;
  for (int i = 0; i < f.dimension(); ++i) {
    lo.push_back(o.lo[i].convert_to<double>());
    hi.push_back(o.hi[i].convert_to<double>());
  }
  return search(o.piece, grid_starts(lo, hi, grid), tolerance, false, &o, index);
}

std::optional<int> jacobian_sign(const FieldPiece& p, const std::vector<double>& c, double r) {
  IntervalVector box;
  for (double x : c) box.push_back(Interval::around(x, r));
  const Interval d = det(p.derivative(box));
  if (d.contains_zero()) return std::nullopt;
  return d.lo > 0 ? 1 : -1;
}

int boundary_degree(const FieldPiece& p, const std::vector<double>& c, double h) {
  const std::size_t n = c.size();
  auto definite = [](const IntervalVector& v) {
    for (const auto& x : v)
      if (!x.contains_zero()) return true;
    return false;
  };
  if (n == 1) {
    int s[2];
    for (int k = 0; k < 2; ++k) {
      const Interval v = p.value(IntervalVector{Interval(c[0] + (k ? h : -h))})[0];
      if (v.contains_zero()) throw ValidationError("field may vanish on the isolating interval; use a smaller radius");
      s[k] = v.lo > 0 ? 1 : -1;
    }
    return (s[1] - s[0]) / 2;
  }
  if (n != 2) throw UnsupportedError("degree by boundary winding is implemented for dimension <= 2");
  // Counterclockwise square; each accepted segment has an interval image
  // avoiding 0, so its angle change is the principal difference.
  const double corners[5][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  double total = 0;
  for (int e = 0; e < 4; ++e) {
    const double ax = c[0] + h * corners[e][0], ay = c[1] + h * corners[e][1];
    const double bx = c[0] + h * corners[e + 1][0], by = c[1] + h * corners[e + 1][1];
    std::vector<std::pair<double, double>> stack{{0.0, 1.0}};
    std::vector<std::pair<double, double>> accepted;
    while (!stack.empty()) {
      auto [s, t] = stack.back();
      stack.pop_back();
      const IntervalVector seg{hull(Interval(ax + s * (bx - ax)), Interval(ax + t * (bx - ax))),
                               hull(Interval(ay + s * (by - ay)), Interval(ay + t * (by - ay)))};
      if (definite(p.value(seg))) {
        accepted.push_back({s, t});
        continue;
      }
      if (t - s < 1.0 / (1 << 20))
        throw ValidationError("field may vanish on the isolating square; use a smaller radius");
      stack.push_back({0.5 * (s + t), t});
      stack.push_back({s, 0.5 * (s + t)});
    }
    std::sort(accepted.begin(), accepted.end());
    for (auto [s, t] : accepted) {
      const auto u0 = p.value(std::vector<double>{ax + s * (bx - ax), ay + s * (by - ay)});
      const auto u1 = p.value(std::vector<double>{ax + t * (bx - ax), ay + t * (by - ay)});
      double d = std::atan2(u1[1], u1[0]) - std::atan2(u0[1], u0[0]);
      while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
      while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
      total += d;
    }
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

Rational rational_below(double x) {
  if (!(x > 0)) return Rational(0);
  const double scaled = std::floor(x * 1e9);
  return Rational(static_cast<long long>(scaled), 1000000000LL);
}

Rational sqrt_below(const Rational& r) {
  if (r <= 0) return Rational(0);
  const BigInt num = numerator(r), den = denominator(r);
  const BigInt sn = boost::multiprecision::sqrt(num), sd = boost::multiprecision::sqrt(den);
  if (sn * sn == num && sd * sd == den) return Rational(sn, sd);
  return rational_below(std::sqrt(r.convert_to<double>()) * (1 - 1e-12));
}

TorusChart::TorusChart(Torus torus, int subdivide) : torus_(std::move(torus)) {
  sd_ = barycentric_subdivide(torus_.complex(), subdivide);
  const int n = torus_.dimension();
  by_carrier_.assign(torus_.complex().count(n), {});
  for (std::size_t s = 0; s < sd_.top_carrier.size(); ++s) by_carrier_[sd_.top_carrier[s]].push_back(static_cast<int>(s));
}

void TorusChart::require_unit_periods() const {
  if (!torus_.euclidean()) throw UnsupportedError("analytic models need a torus with the Z^n deck group");
  const int n = dimension();
  const auto& g = torus_.complex().group();
  for (int i = 0; i < n; ++i) {
    const RationalVector t = torus_.translation(g.generator(i));
    for (int r = 0; r < n; ++r)
      if (t[r] != (r == i ? 1 : 0))
        throw UnsupportedError("analytic models need unit periods; the torus lattice is not Z^n");
  }
}

std::vector<double> TorusChart::translation(const Element& deck) const {
  std::vector<double> out;
  for (const auto& r : torus_.translation(deck)) out.push_back(r.convert_to<double>());
  return out;
}

std::vector<std::vector<double>> TorusChart::vertices(const Cell& top) const {
  const auto& g = complex().group();
  std::vector<std::vector<double>> out;
  for (int i = 0; i <= top.dim; ++i) {
    const CoverPoint p = translate(g, top.deck, simplex_vertex_position(sd_, top.dim, top.id, i));
    std::vector<double> x;
    for (const auto& r : torus_.position(p)) x.push_back(r.convert_to<double>());
    out.push_back(x);
  }
  return out;
}

std::optional<TorusChart::Host> TorusChart::host(const std::vector<double>& x) const {
  RationalVector xr;
  for (double c : x) xr.push_back(Rational(c));
  return host(xr);
}

std::optional<TorusChart::Host> TorusChart::host(const RationalVector& xr) const {
  const int n = dimension();
  const CoverPoint cp = torus_.locate(xr);
  if (static_cast<int>(cp.terms.size()) != n + 1) return std::nullopt;
  const QuotientComplex& q = torus_.complex();
  Simplex s;
  for (const auto& [c, w] : cp.terms) s.push_back(c.id);
  std::sort(s.begin(), s.end());
  const int tau = q.index(s);
  if (tau < 0) throw InternalError("located point has no carrier top simplex");
  Element deck;
  for (const auto& [c, w] : cp.terms)
    if (c.id == s[0]) deck = q.group().multiply(c.deck, q.group().inverse(q.vertex_shift(n, tau, 0)));

  const auto& g = q.group();
  for (int cand : by_carrier_[tau]) {
    // Exact barycentric coordinates of x in the candidate subdivided top.
    RationalMatrix a(n + 1, RationalVector(n + 1));
    RationalVector b(n + 1);
    for (int i = 0; i <= n; ++i) {
      const RationalVector v = torus_.position(translate(g, deck, simplex_vertex_position(sd_, n, cand, i)));
      for (int r = 0; r < n; ++r) a[r][i] = v[r];
      a[n][i] = 1;
    }
    for (int r = 0; r < n; ++r) b[r] = xr[r];
    b[n] = 1;
    const LinearSolution sol = solve_linear(a, b);
    if (!sol.consistent) continue;
    bool inside = true, interior = true;
    for (const auto& l : sol.particular) {
      if (l < 0) inside = false;
      if (l <= 0) interior = false;
    }
    if (!inside) continue;
    if (!interior) return std::nullopt;
    Host h;
    h.cell = Cell{deck, n, cand};
    for (const auto& l : sol.particular) h.barycentric.push_back(l.convert_to<double>());
    h.clearance = simplex_clearance(vertices(h.cell), h.barycentric);
    return h;
  }
  throw InternalError("no subdivided top simplex contains the located point");
}

double simplex_clearance(const std::vector<std::vector<double>>& vertices, const std::vector<double>& barycentric) {
  const std::size_t k = vertices.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<double>> basis;
    const std::size_t o = i == 0 ? 1 : 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i || j == o) continue;
      std::vector<double> w(vertices[j].size());
      for (std::size_t r = 0; r < w.size(); ++r) w[r] = vertices[j][r] - vertices[o][r];
      for (const auto& b : basis) {
        double d = 0;
        for (std::size_t r = 0; r < w.size(); ++r) d += w[r] * b[r];
        for (std::size_t r = 0; r < w.size(); ++r) w[r] -= d * b[r];
      }
      const double len = norm(w);
      for (auto& c : w) c /= len;
      basis.push_back(w);
    }
    std::vector<double> v(vertices[i].size());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = vertices[i][r] - vertices[o][r];
    for (const auto& b : basis) {
      double d = 0;
      for (std::size_t r = 0; r < v.size(); ++r) d += v[r] * b[r];
      for (std::size_t r = 0; r < v.size(); ++r) v[r] -= d * b[r];
    }
    best = std::min(best, barycentric[i] * norm(v));
  }
  return best;
}

}  // namespace ulef

namespace ulef {

namespace {

std::vector<double> to_doubles(const RationalVector& v) {
  std::vector<double> out;
  for (const auto& r : v) out.push_back(r.convert_to<double>());
  return out;
}

RationalVector location_of(const AnalyticZero& z) {
  if (z.exact) return *z.exact;
  RationalVector out;
  for (double c : z.point) out.push_back(Rational(c));
  return out;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double wrapped(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    d -= std::floor(d);
    d = std::min(d, 1 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

TorusZero hosted(const TorusChart& chart, AnalyticZero z, const FieldPiece& p, int orientation) {
  TorusZero out;
  out.location = location_of(z);
  out.host = chart.host(out.location);
  if (out.host) out.coset = out.host->cell.deck;
  out.zero = std::move(z);
  out.index = orientation * zero_degree(p, out.zero, out.zero.radius);
  return out;
}

// Does some integer translate of x fall in an override box?
bool owned_by_box(const AnalyticField& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  for (const auto& o : f.overrides()) {
    std::vector<long long> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = static_cast<long long>(std::floor(o.lo[i].convert_to<double>() - x[i]));
      hi[i] = static_cast<long long>(std::ceil(o.hi[i].convert_to<double>() - x[i]));
    }
    std::vector<long long> k = lo;
    for (;;) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + k[i];
      if (o.contains(y)) return true;
      std::size_t i = 0;
      while (i < n && ++k[i] > hi[i]) k[i] = lo[i], ++i;
      if (i == n) break;
    }
  }
  return false;
}

bool in_any_box(const AnalyticField& f, const std::vector<double>& x) {
  for (const auto& o : f.overrides())
    if (o.contains(x)) return true;
  return false;
}

}  // namespace

int zero_degree(const FieldPiece& p, const AnalyticZero& z, double radius) {
  if (z.validation == "krawczyk")
    if (auto s = jacobian_sign(p, z.point, radius)) return *s;
  try {
    return boundary_degree(p, z.point, z.validation == "none" ? std::max(radius, 1e-4) : radius);
  } catch (const ValidationError&) {
    throw ValidationError("degree at the zero near " + format_point(z.point) +
                          " is ambiguous at this radius; a smaller isolation radius is needed");
  }
}

TorusZero translate_zero(const TorusChart& chart, const TorusZero& z, const std::vector<long long>& k) {
  TorusZero out = z;
  for (std::size_t i = 0; i < k.size(); ++i) {
    out.location[i] += k[i];
    out.zero.point[i] += static_cast<double>(k[i]);
  }
  if (out.zero.exact) out.zero.exact = out.location;
  out.host = chart.host(out.location);
  if (out.host) out.coset = out.host->cell.deck;
  return out;
}

std::vector<std::vector<long long>> override_translates(const AnalyticField& f, const TorusZero& z) {
  std::vector<std::vector<long long>> out;
  const std::size_t n = z.zero.point.size();
  for (const auto& o : f.overrides()) {
    std::vector<long long> lo(n), hi(n), k(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = static_cast<long long>(std::floor(o.lo[i].convert_to<double>() - z.zero.point[i])) - 1;
      hi[i] = static_cast<long long>(std::ceil(o.hi[i].convert_to<double>() - z.zero.point[i])) + 1;
    }
    k = lo;
    for (;;) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = z.zero.point[i] + k[i];
      if (o.contains(x) && std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
      std::size_t i = 0;
      while (i < n && ++k[i] > hi[i]) k[i] = lo[i], ++i;
      if (i == n) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TorusZeroSet torus_zeros(const TorusChart& chart, const AnalyticField& f, int grid, int orientation) {
  chart.require_unit_periods();
  if (chart.dimension() != f.dimension()) throw InputError("field and torus dimensions differ");
  TorusZeroSet out;
  ZeroSearch base = periodic_zeros(f, grid);
  out.diagnostics = base.diagnostics;
  for (auto& z : base.zeros) out.periodic.push_back(hosted(chart, std::move(z), f.base(), orientation));
  for (const auto& z : out.periodic)
    for (const auto& k : override_translates(f, z)) out.removed.push_back(translate_zero(chart, z, k));
  for (std::size_t i = 0; i < f.overrides().size(); ++i) {
    ZeroSearch s = override_zeros(f, static_cast<int>(i), grid);
    out.diagnostics.insert(out.diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
    for (auto& z : s.zeros) {
      // The first box containing the zero owns it.
      if (&f.piece_at(z.point) != &f.overrides()[i].piece) continue;
      out.added.push_back(hosted(chart, std::move(z), f.overrides()[i].piece, orientation));
    }
  }
  return out;
}

TorusSampling sample_torus(const TorusChart& chart, const AnalyticField& f, const TorusZeroSet& zeros, int grid) {
  const int n = f.dimension();
  TorusSampling out;

  // Separation: periodic zeros against every translate (self translates sit
  // at distance >= 1), override zeros against everything.
  double sep = 1;
  for (std::size_t i = 0; i < zeros.periodic.size(); ++i)
    for (std::size_t j = i + 1; j < zeros.periodic.size(); ++j)
      sep = std::min(sep, wrapped(zeros.periodic[i].zero.point, zeros.periodic[j].zero.point));
  for (std::size_t i = 0; i < zeros.added.size(); ++i) {
    for (const auto& p : zeros.periodic) sep = std::min(sep, wrapped(zeros.added[i].zero.point, p.zero.point));
    for (std::size_t j = i + 1; j < zeros.added.size(); ++j)
      sep = std::min(sep, euclidean(zeros.added[i].zero.point, zeros.added[j].zero.point));
  }
  out.delta = sep / 2;
  out.strong_delta = out.delta;
  auto strong = [&](const TorusZero& z) {
    if (!z.host) {
      out.strong_delta = 0;
      out.witnesses.push_back("zero at " + format_point(z.zero.point) + " lies on a face of the triangulation");
      return;
    }
    out.strong_delta = std::min(out.strong_delta, z.host->clearance - z.zero.radius);
  };
  for (const auto& z : zeros.periodic) strong(z);
  for (const auto& z : zeros.added) strong(z);
  out.strong_delta = std::max(out.strong_delta, 0.0);

  auto nearest = [&](const std::vector<double>& x, bool in_box) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& z : zeros.periodic) d = std::min(d, wrapped(x, z.zero.point));
    for (const auto& z : zeros.added) d = std::min(d, in_box ? euclidean(x, z.zero.point) : wrapped(x, z.zero.point));
    return d;
  };

  auto run = [&](int g) {
    out.grid = g;
    out.epsilon = out.strong_epsilon = std::numeric_limits<double>::infinity();
    out.max_norm = out.certified_norm = 0;
    auto visit = [&](const FieldPiece& p, const std::vector<double>& x, bool in_box) {
      const double v = norm(p.value(x));
      out.max_norm = std::max(out.max_norm, v);
      const double d = nearest(x, in_box);
      if (d >= out.delta) out.epsilon = std::min(out.epsilon, v);
      if (d >= out.strong_delta) out.strong_epsilon = std::min(out.strong_epsilon, v);
    };
    auto certify = [&](const FieldPiece& p, const std::vector<double>& lo, double h) {
      IntervalVector box;
      for (double c : lo) box.push_back(Interval(c, c + h));
      const IntervalVector v = p.value(box);
      Interval s(0);
      for (const auto& c : v) s = s + pow(c, 2);
      out.certified_norm = std::max(out.certified_norm, std::sqrt(s.hi) * (1 + 1e-15));
    };
    const std::vector<double> zero(n, 0.0), one(n, 1.0);
    for (const auto& x : grid_starts(zero, one, g)) {
      std::vector<double> corner(n);
      for (int i = 0; i < n; ++i) corner[i] = x[i] - 0.5 / g;
      certify(f.base(), corner, 1.0 / g);
      if (owned_by_box(f, x)) continue;
      visit(f.base(), x, false);
    }
    for (const auto& o : f.overrides()) {
      const auto lo = to_doubles(o.lo), hi = to_doubles(o.hi);
      for (const auto& x : grid_starts(lo, hi, g)) {
        if (!in_any_box(f, x)) continue;
        visit(f.piece_at(x), x, true);
        std::vector<double> corner(n);
        for (int i = 0; i < n; ++i) corner[i] = x[i] - 0.5 / g;
        certify(f.piece_at(x), corner, 1.0 / g);
      }
    }
  };
  run(grid);
  if (out.epsilon < 0.1 * out.max_norm) run(2 * grid);
  if (!std::isfinite(out.epsilon)) out.epsilon = out.max_norm;
  if (!std::isfinite(out.strong_epsilon)) out.strong_epsilon = out.max_norm;
  if (out.epsilon <= 0) out.witnesses.push_back("sampled |u| vanishes outside the isolating balls");
  return out;
}

}  // namespace ulef
