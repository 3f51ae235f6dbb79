#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ulef/error.hpp"
#include "ulef/vectorfield.hpp"

namespace ulef {

namespace {

using Matrix = std::vector<std::vector<double>>;

RationalMatrix columns(const std::vector<RationalVector>& all, const Simplex& s) {
  const std::size_t d = all.front().size();
  RationalMatrix m(d, RationalVector(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) m[i][j] = all[s[j]][i];
  return m;
}

RationalVector face_normal(const RationalMatrix& p) {
  const std::size_t d = p.size();
  RationalMatrix pt(d, RationalVector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) pt[i][j] = p[j][i];
  const LinearSolution s = solve_linear(pt, RationalVector(d, Rational(1)));
  if (!s.consistent || !s.kernel.empty()) throw InputError("a realized face passes through the origin");
  return s.particular;
}

// det(W - t P) as coefficients c_0 + c_1 t + ... by exact interpolation.
RationalVector char_poly(const RationalMatrix& w, const RationalMatrix& p) {
  const std::size_t d = w.size();
  RationalMatrix vander(d + 1, RationalVector(d + 1));
  RationalVector values(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    RationalMatrix m = w;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m[i][j] -= Rational(static_cast<long long>(k)) * p[i][j];
    values[k] = determinant(m);
    Rational pw = 1;
    for (std::size_t e = 0; e <= d; ++e, pw *= static_cast<long long>(k)) vander[k][e] = pw;
  }
  return solve_linear(vander, values).particular;
}

Rational eval_poly(const RationalVector& c, const Rational& t) {
  Rational v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

std::vector<long long> divisors(BigInt n) {
  if (n < 0) n = -n;
  std::vector<long long> out;
  if (n == 0 || n > 1000000) return out;
  const long long m = static_cast<long long>(n);
  for (long long k = 1; k <= m; ++k)
    if (m % k == 0) out.push_back(k);
  return out;
}

struct Roots {
  std::vector<Rational> exact;
  std::vector<double> numeric;
  bool identically_zero = false;
};

// Real roots: rational ones exactly, the rest numerically.
Roots real_roots(RationalVector c) {
  Roots r;
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.empty()) {
    r.identically_zero = true;
    return r;
  }
  auto deflate = [&](const Rational& t) {
    RationalVector q(c.size() - 1);
    Rational carry = 0;
    for (std::size_t i = c.size(); i-- > 1;) {
      carry = carry * t + c[i];
      q[i - 1] = carry;
    }
    c = q;
  };
  while (c.size() > 1 && c.front() == 0) {
    if (std::find(r.exact.begin(), r.exact.end(), Rational(0)) == r.exact.end()) r.exact.push_back(0);
    c.erase(c.begin());
  }
  for (bool found = true; found && c.size() > 1;) {
    found = false;
    BigInt lcm = 1;
    for (const auto& x : c) lcm = boost::multiprecision::lcm(lcm, denominator(x));
    const BigInt a0 = numerator(c.front() * Rational(lcm)), an = numerator(c.back() * Rational(lcm));
    for (long long p : divisors(a0)) {
      for (long long q : divisors(an)) {
        for (int s : {1, -1}) {
          const Rational t(s * p, q);
          if (eval_poly(c, t) == 0) {
            if (std::find(r.exact.begin(), r.exact.end(), t) == r.exact.end()) r.exact.push_back(t);
            deflate(t);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
  }
  if (c.size() == 3) {
    const double a = c[2].convert_to<double>(), b = c[1].convert_to<double>(), cc = c[0].convert_to<double>();
    const double disc = b * b - 4 * a * cc;
    if (disc > 0) {
      r.numeric.push_back((-b + std::sqrt(disc)) / (2 * a));
      r.numeric.push_back((-b - std::sqrt(disc)) / (2 * a));
    }
  } else if (c.size() > 3) {
    // Bisection on a fine bracket scan; degrees here are small.
    auto f = [&](double t) {
      double v = 0;
      for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i].convert_to<double>();
      return v;
    };
    double bound = 1;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      bound = std::max(bound, 1 + std::abs(c[i].convert_to<double>() / c.back().convert_to<double>()));
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
      double lo = -bound + 2 * bound * k / steps, hi = -bound + 2 * bound * (k + 1) / steps;
      if (f(lo) == 0) {
        r.numeric.push_back(lo);
        continue;
      }
      if ((f(lo) < 0) == (f(hi) < 0)) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f(lo) < 0) == (f(mid) < 0)) lo = mid;
        else hi = mid;
      }
      r.numeric.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(r.exact.begin(), r.exact.end());
  return r;
}

// Points of {A l = b, l >= 0} at basic solutions, used to decide whether a
// kernel of dimension > 1 meets the simplex.
bool meets_simplex(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t k = a.front().size();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    RationalMatrix aa = a;
    RationalVector bb = b;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) {
        RationalVector r(k, Rational(0));
        r[i] = 1;
        aa.push_back(r);
        bb.push_back(0);
      }
    const LinearSolution s = solve_linear(aa, bb);
    if (s.consistent && s.kernel.empty() &&
        std::all_of(s.particular.begin(), s.particular.end(), [](const Rational& x) { return x >= 0; }))
      return true;
  }
  return false;
}

std::vector<double> to_d(const RationalVector& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.convert_to<double>());
  return out;
}

Matrix to_d(const RationalMatrix& m) {
  Matrix out;
  for (const auto& r : m) out.push_back(to_d(r));
  return out;
}

std::vector<double> mul(const Matrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

double ddot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Least-squares coordinates of v in the columns of e (normal equations).
std::vector<double> coordinates(const Matrix& e, const std::vector<double>& v) {
  const std::size_t n = e.front().size();
  Matrix g(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < e.size(); ++r) g[i][j] += e[r][i] * e[r][j];
    for (std::size_t r = 0; r < e.size(); ++r) g[i][n] += e[r][i] * v[r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(g[r][c]) > std::abs(g[p][c])) p = r;
    std::swap(g[p], g[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = g[r][c] / g[c][c];
      for (std::size_t k = c; k <= n; ++k) g[r][k] -= f * g[c][k];
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = g[i][n] / g[i][i];
  return out;
}

struct Face {
  int id = 0;
  RationalMatrix p, w;
  RationalVector nu;
};

Face face_data(const RealizedField& f, int id) {
  const Simplex& s = f.complex.cell(f.complex.dimension(), id);
  Face fd{id, columns(f.position, s), columns(f.vectors, s), {}};
  fd.nu = face_normal(fd.p);
  return fd;
}

// Field on the face in ambient coordinates at barycentric weights l.
std::vector<double> face_field(const Face& fc, const std::vector<double>& l) {
  const Matrix p = to_d(fc.p), w = to_d(fc.w);
  const std::vector<double> x = mul(p, l), wx = mul(w, l), nu = to_d(fc.nu);
  const double t = ddot(wx, nu);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = wx[i] - t * x[i];
  return v;
}

// Tangential part of W at the radial image of x; continuous across faces.
double tangential_norm(const Face& fc, const std::vector<double>& l) {
  const std::vector<double> x = mul(to_d(fc.p), l), wx = mul(to_d(fc.w), l);
  const double s = ddot(wx, x) / ddot(x, x);
  double n2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n2 += (wx[i] - s * x[i]) * (wx[i] - s * x[i]);
  return std::sqrt(n2 / ddot(x, x));
}

Matrix edge_basis(const Face& fc) {
  const Matrix p = to_d(fc.p);
  const std::size_t d = p.size(), n = d - 1;
  Matrix e(d, std::vector<double>(n));
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = 0; i < d; ++i) e[i][j - 1] = p[i][j] - p[i][0];
  return e;
}

// Winding of the chart field around the zero, for surfaces.
int chart_winding(const Face& fc, const std::vector<double>& l0, double h) {
  const std::size_t d = l0.size();
  if (d != 3) throw UnsupportedError("degenerate PL zeros are resolved by winding on surfaces only");
  const Matrix e = edge_basis(fc);
  auto chart = [&](double s1, double s2) {
    std::vector<double> l{1 - s1 - s2, s1, s2};
    return coordinates(e, face_field(fc, l));
  };
  const double c1 = l0[1], c2 = l0[2];
  const int steps = 2048;
  double total = 0;
  std::vector<double> prev = chart(c1 + h, c2);
  for (int k = 1; k <= steps; ++k) {
    const double a = 2 * std::numbers::pi * k / steps;
    const std::vector<double> cur = chart(c1 + h * std::cos(a), c2 + h * std::sin(a));
    if (std::hypot(cur[0], cur[1]) < 1e-12)
      throw ValidationError("degree at a PL zero is ambiguous at this radius; a smaller radius is needed");
    double dd = std::atan2(cur[1], cur[0]) - std::atan2(prev[1], prev[0]);
    while (dd > std::numbers::pi) dd -= 2 * std::numbers::pi;
    while (dd <= -std::numbers::pi) dd += 2 * std::numbers::pi;
    total += dd;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

int realized_index(const Face& fc, const std::vector<double>& l0) {
  // Columns c_j = W d_j - t0 P d_j - <W d_j, nu> x0 with d_j = e_j - e_0,
  // written in the edge basis P d_j.
  const Matrix p = to_d(fc.p), w = to_d(fc.w);
  const std::vector<double> nu = to_d(fc.nu), x0 = mul(p, l0), wx0 = mul(w, l0);
  const double t0 = ddot(wx0, nu);
  const std::size_t d = l0.size(), n = d - 1;
  const Matrix e = edge_basis(fc);
  Matrix a(n, std::vector<double>(n));
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<double> dj(d, 0.0);
    dj[j] = 1;
    dj[0] = -1;
    const std::vector<double> wd = mul(w, dj), pd = mul(p, dj);
    const double s = ddot(wd, nu);
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = wd[i] - t0 * pd[i] - s * x0[i];
    const auto col = coordinates(e, c);
    for (std::size_t i = 0; i < n; ++i) a[i][j - 1] = col[i];
  }
  double det;
  if (n == 1) det = a[0][0];
  else if (n == 2) det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  else
    det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
          a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  double scale = 0;
  for (const auto& r : a)
    for (double x : r) scale = std::max(scale, std::abs(x));
  if (std::abs(det) > 1e-9 * std::max(1.0, std::pow(scale, static_cast<double>(n)))) return det > 0 ? 1 : -1;
  double h = 1;
  for (double x : l0) h = std::min(h, x);
  return chart_winding(fc, l0, std::min(1e-3, h / 4));
}

struct RealizedZeros {
  std::vector<ZeroRecord> interior;
  std::vector<ZeroRecord> on_face;
};

ZeroRecord realized_record(const RealizedField& f, const Face& fc, const std::vector<Rational>& l, bool exact) {
  const int n = f.complex.dimension();
  const Simplex& s = f.complex.cell(n, fc.id);
  const Element e = f.complex.group().identity();
  ZeroRecord r;
  r.host = Cell{e, n, fc.id};
  r.coset = e;
  std::vector<std::pair<Cell, Rational>> terms;
  for (std::size_t i = 0; i < s.size(); ++i) terms.push_back({Cell{e, 0, s[i]}, l[i]});
  r.point = normalize(std::move(terms));
  r.exact = exact;
  r.validation = exact ? "exact" : "numeric";
  for (const auto& x : l) r.barycentric.push_back(x.convert_to<double>());
  std::vector<std::vector<double>> verts(s.size(), std::vector<double>(s.size(), 0.0));
  for (std::size_t i = 0; i < s.size(); ++i) verts[i][i] = 1 / std::sqrt(2.0);
  r.clearance = simplex_clearance(verts, r.barycentric);
  return r;
}

RealizedZeros realized_zeros(const RealizedField& f) {
  RealizedZeros out;
  const int n = f.complex.dimension();
  for (int id = 0; id < static_cast<int>(f.complex.count(n)); ++id) {
    const Face fc = face_data(f, id);
    const std::size_t d = fc.p.size();
    const Roots roots = real_roots(char_poly(fc.w, fc.p));
    if (roots.identically_zero) throw TamenessError("zeros are not isolated on face " + std::to_string(id));
    auto consider = [&](std::vector<Rational> l, bool exact) {
      bool face = false;
      for (const auto& x : l) {
        if (exact ? x < 0 : x.convert_to<double>() < -1e-12) return;
        if (exact ? x == 0 : x.convert_to<double>() < 1e-12) face = true;
      }
      ZeroRecord r = realized_record(f, fc, l, exact);
      if (face) {
        r.host.reset();
        if (std::none_of(out.on_face.begin(), out.on_face.end(), [&](const auto& o) {
              return cover_distance(o.point, r.point) < 1e-12;
            }))
          out.on_face.push_back(r);
        return;
      }
      r.index = realized_index(fc, r.barycentric);
      out.interior.push_back(r);
    };
    for (const auto& t : roots.exact) {
      RationalMatrix m = fc.w;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i][j] -= t * fc.p[i][j];
      const LinearSolution ker = solve_linear(m, RationalVector(d, Rational(0)));
      if (ker.kernel.size() == 1) {
        const RationalVector& k = ker.kernel[0];
        const Rational sum = std::accumulate(k.begin(), k.end(), Rational(0));
        if (sum == 0) continue;
        RationalVector l;
        for (const auto& x : k) l.push_back(x / sum);
        consider(l, true);
      } else if (ker.kernel.size() > 1) {
        RationalMatrix a = m;
        a.push_back(RationalVector(d, Rational(1)));
        RationalVector b(d, Rational(0));
        b.push_back(1);
        if (meets_simplex(a, b))
          throw TamenessError("zeros are not isolated on face " + std::to_string(id) +
                              ": W is parallel to x along a whole region");
      }
    }
    for (double t : roots.numeric) {
      if (d != 3) throw UnsupportedError("irrational PL zeros are located on surfaces only");
      Matrix m = to_d(fc.w);
      const Matrix p = to_d(fc.p);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i][j] -= t * p[i][j];
      // Null vector of a rank-2 3x3 matrix: the largest cross product of two rows.
      std::vector<double> best(3, 0.0);
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const std::vector<double> c{m[a][1] * m[b][2] - m[a][2] * m[b][1], m[a][2] * m[b][0] - m[a][0] * m[b][2],
                                      m[a][0] * m[b][1] - m[a][1] * m[b][0]};
          if (ddot(c, c) > ddot(best, best)) best = c;
        }
      const double sum = best[0] + best[1] + best[2];
      if (std::abs(sum) < 1e-12) continue;
      std::vector<Rational> l;
      Rational acc = 0;
      for (int i = 0; i < 2; ++i) {
        l.push_back(Rational(best[i] / sum));
        acc += l.back();
      }
      l.push_back(1 - acc);
      consider(l, false);
    }
  }
  return out;
}

TamenessReport realized_tameness(const VectorFieldModel& v) {
  const RealizedField& f = v.realized();
  TamenessReport rep;
  rep.metric = "chordal distance on vertex weights; |v| is the tangential part of W on the radial sphere";
  RealizedZeros zs;
  try {
    zs = realized_zeros(f);
  } catch (const TamenessError& err) {
    rep.verdict = "not tame";
    rep.witnesses.push_back(err.what());
    return rep;
  }
  const int n = f.complex.dimension();
  std::vector<const ZeroRecord*> all;
  for (const auto& z : zs.interior) all.push_back(&z);
  for (const auto& z : zs.on_face) all.push_back(&z);
  double sep = 1 / std::sqrt(static_cast<double>(n + 1));
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) sep = std::min(sep, cover_distance(all[i]->point, all[j]->point));
  const double delta = sep / 2;
  double strong = delta;
  for (const auto& z : zs.interior) strong = std::min(strong, z.clearance);
  if (!zs.on_face.empty()) strong = 0;
  for (const auto& z : zs.on_face) {
    std::string s;
    for (const auto& [c, w] : z.point.terms) s += (s.empty() ? "" : " + ") + to_string(w) + "*v" + std::to_string(c.id);
    rep.witnesses.push_back("zero " + s + " lies on a face of the triangulation");
  }

  constexpr int kDen = 16;
  double eps = std::numeric_limits<double>::infinity(), seps = eps, top = 0;
  const Element e = f.complex.group().identity();
  for (int id = 0; id < static_cast<int>(f.complex.count(n)); ++id) {
    const Face fc = face_data(f, id);
    const Simplex& s = f.complex.cell(n, id);
    std::vector<int> c(n + 1, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n) {
        c[n] = left;
        std::vector<double> l;
        std::vector<std::pair<Cell, Rational>> terms;
        for (int k = 0; k <= n; ++k) {
          l.push_back(static_cast<double>(c[k]) / kDen);
          terms.push_back({Cell{e, 0, s[k]}, Rational(c[k], kDen)});
        }
        const CoverPoint x = normalize(std::move(terms));
        const double norm = tangential_norm(fc, l);
        top = std::max(top, norm);
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto* z : all) dmin = std::min(dmin, cover_distance(x, z->point));
        if (dmin >= delta) eps = std::min(eps, norm);
        if (dmin >= strong) seps = std::min(seps, norm);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        c[i] = k;
        rec(i + 1, left - k);
      }
    };
    rec(0, kDen);
  }
  if (!std::isfinite(eps)) eps = top;
  if (!std::isfinite(seps)) seps = top;
  rep.max_displacement = top;
  if (v.declared_bound && top > v.declared_bound->convert_to<double>())
    throw ValidationError("sampled field norm " + std::to_string(top) + " exceeds the declared bound " +
                          to_string(*v.declared_bound));
  rep.delta = rational_below(delta);
  rep.strong_delta = rational_below(strong);
  rep.epsilon = rational_below(eps);
  rep.strong_epsilon = rational_below(seps);
  rep.fixed_point_free = all.empty();
  if (eps <= 0) {
    rep.verdict = "not tame";
    rep.witnesses.push_back("sampled |v| vanishes outside the isolating balls");
  } else if (zs.on_face.empty() && seps > 0) {
    rep.verdict = "strongly tame";
  } else {
    rep.verdict = "tame";
  }
  return rep;
}

}  // namespace

const QuotientComplex& VectorFieldModel::quotient() const {
  return analytic() ? torus().chart.torus().complex() : realized().complex;
}

std::vector<RationalVector> tetrahedron_positions() {
  return {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
}

RealizedField make_realized_field(QuotientComplex q, std::vector<RationalVector> position,
                                  std::vector<RationalVector> vectors) {
  if (!q.group().is_finite() || q.group().order() != 1)
    throw UnsupportedError("realized PL fields need a trivial deck group");
  const std::size_t d = static_cast<std::size_t>(q.dimension()) + 1;
  if (static_cast<int>(position.size()) != q.num_vertices() || static_cast<int>(vectors.size()) != q.num_vertices())
    throw InputError("need one position and one vector per vertex");
  for (const auto* list : {&position, &vectors})
    for (const auto& v : *list)
      if (v.size() != d) throw InputError("positions and vectors must have " + std::to_string(d) + " coordinates");
  RealizedField f{std::move(q), std::move(position), std::move(vectors)};
  for (int id = 0; id < static_cast<int>(f.complex.count(f.complex.dimension())); ++id) face_data(f, id);
  return f;
}

RealizedField constant_direction_field(QuotientComplex q, std::vector<RationalVector> position,
                                       const RationalVector& direction) {
  std::vector<RationalVector> vectors(position.size(), direction);
  return make_realized_field(std::move(q), std::move(position), std::move(vectors));
}

std::vector<ZeroRecord> find_zeros(const VectorFieldModel& v, int radius) {
  if (v.analytic()) {
    const TorusField& t = v.torus();
    const TorusZeroSet zs = analytic_zero_set(t.chart, t.field, v.grid, 1, "field");
    auto out = torus_records(t.chart, t.field, zs, radius);
    for (auto& r : out) r.index.reset();
    return out;
  }
  const RealizedZeros zs = realized_zeros(v.realized());
  if (!zs.on_face.empty())
    throw TamenessError("a zero lies on a face of the triangulation; subdivide or move the vertex vectors");
  auto out = zs.interior;
  for (auto& r : out) r.index.reset();
  sort_records(v.group(), out);
  return out;
}

int field_index(const VectorFieldModel& v, const ZeroRecord& z, double radius) {
  if (v.analytic()) return torus_degree(v.torus().field, z, radius);
  if (!z.host) throw ValidationError("zero lies on a face; its index needs a host simplex");
  const Face fc = face_data(v.realized(), z.host->id);
  if (radius > 0) return chart_winding(fc, z.barycentric, radius);
  return realized_index(fc, z.barycentric);
}

TamenessReport field_tameness(const VectorFieldModel& v) {
  if (!v.analytic()) return realized_tameness(v);
  const TorusField& t = v.torus();
  return torus_tameness(t.chart, t.field, v.grid, v.sample_grid, 1, v.declared_bound, "field");
}

IndexClassResult index_class(const VectorFieldModel& v) {
  IndexClassResult out;
  out.tameness = field_tameness(v);
  if (out.tameness.verdict == "not tame") {
    std::string why = "the field is not tame";
    for (const auto& w : out.tameness.witnesses) why += "; " + w;
    throw TamenessError(why);
  }
  if (v.analytic()) {
    const TorusField& t = v.torus();
    const TorusZeroSet zs = analytic_zero_set(t.chart, t.field, v.grid, 1, "field");
    for (const auto* list : {&zs.periodic, &zs.added})
      for (const auto& z : *list)
        if (!z.host)
          throw TamenessError("a zero lies on a face of the chart triangulation; use one more subdivision");
    out.diagnostics = zs.diagnostics;
    out.function = torus_class(t.field, zs, &out.zeros);
  } else {
    const RealizedZeros zs = realized_zeros(v.realized());
    if (!zs.on_face.empty())
      throw TamenessError("a zero lies on a face of the triangulation; subdivide or move the vertex vectors");
    out.zeros = zs.interior;
    for (const auto& z : zs.interior) out.function.constant += *z.index;
  }
  for (auto& z : out.zeros) z.isolation = out.tameness.strong_delta;
  sort_records(v.group(), out.zeros);
  return out;
}

PoincareHopfReport poincare_hopf_check(const MarkedGroup& g, const ClassFunction& index, int euler_characteristic,
                                       const DecideOptions& options) {
  PoincareHopfReport r;
  r.euler_characteristic = euler_characteristic;
  r.index = index;
  r.difference = index;
  r.difference.constant -= euler_characteristic;
  r.certificate = decide_class(g, r.difference, options);
  const std::string& v = r.certificate.verdict;
  if (!r.certificate.verified) r.verdict = "unverified certificate";
  else if (v.rfind("zero", 0) == 0) r.verdict = "consistent: ind(v) = chi * 1 in the coinvariants";
  else if (v == "nonzero-by-mean")
    r.verdict = "counterexample flagged: ind(v) - chi * 1 is nonzero, so the input model is inconsistent";
  else r.verdict = "inconclusive";
  return r;
}

PoincareHopfReport poincare_hopf_check(const VectorFieldModel& v, const IndexClassResult& r,
                                       const DecideOptions& options) {
  return poincare_hopf_check(v.group(), r.function, v.quotient().euler_characteristic(), options);
}

VectorFieldModel negate(const VectorFieldModel& v) {
  VectorFieldModel out = v;
  if (v.analytic()) {
    const TorusField& t = v.torus();
    out.field = TorusField{t.chart, t.field.scaled(Rational(-1))};
  } else {
    RealizedField f = v.realized();
    for (auto& w : f.vectors)
      for (auto& x : w) x = -x;
    out.field = std::move(f);
  }
  return out;
}

}  // namespace ulef
