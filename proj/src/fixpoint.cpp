#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "ulef/error.hpp"
#include "ulef/fixpoint.hpp"
#include "ulef/ufh.hpp"

namespace ulef {

namespace {

using Key = std::pair<Element, int>;

CoverPoint combine(const std::vector<CoverPoint>& pts, const std::vector<Rational>& lambda) {
  std::vector<std::pair<Cell, Rational>> terms;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (const auto& [c, w] : pts[i].terms) terms.push_back({c, w * lambda[i]});
  return normalize(std::move(terms));
}

std::string describe(const MarkedGroup& g, const CoverPoint& p) {
  std::string s;
  for (const auto& [c, w] : p.terms) {
    if (!s.empty()) s += " + ";
    s += to_string(w) + "*v" + std::to_string(c.id) + "@" + g.format(c.deck);
  }
  return s;
}

// Vertex cells of the lift of top simplex tau at deck h.
std::vector<Cell> top_lift(const QuotientComplex& q, const Element& h, int tau) {
  const int n = q.dimension();
  std::vector<Cell> out;
  for (int k = 0; k <= n; ++k)
    out.push_back(Cell{q.group().multiply(h, q.vertex_shift(n, tau, k)), 0, q.cell(n, tau)[k]});
  return out;
}

// A closed top simplex of the cover containing all the cells, if any.
std::optional<std::pair<Element, int>> common_top(const QuotientComplex& q, const std::set<Cell>& cells) {
  if (cells.empty()) return std::nullopt;
  const int n = q.dimension();
  const Cell& c0 = *cells.begin();
  for (int tau = 0; tau < static_cast<int>(q.count(n)); ++tau) {
    const Simplex& s = q.cell(n, tau);
    for (int j = 0; j <= n; ++j) {
      if (s[j] != c0.id) continue;
      const Element h = q.group().multiply(c0.deck, q.group().inverse(q.vertex_shift(n, tau, j)));
      const auto lift = top_lift(q, h, tau);
      if (std::all_of(cells.begin(), cells.end(),
                      [&](const Cell& c) { return std::find(lift.begin(), lift.end(), c) != lift.end(); }))
        return std::pair{h, tau};
    }
  }
  return std::nullopt;
}

// Domain top simplex s at deck g: its vertices in the cover of q and their images.
struct TopData {
  Element deck;
  int top = 0;
  std::vector<CoverPoint> vertices, images;
};

TopData top_data(const PLSelfMap& m, const Element& g, int s) {
  const QuotientComplex& d = m.domain.complex;
  const MarkedGroup& grp = d.group();
  const int n = d.dimension();
  TopData t{g, s, {}, {}};
  for (int i = 0; i <= n; ++i) {
    t.vertices.push_back(translate(grp, g, simplex_vertex_position(m.domain, n, s, i)));
    t.images.push_back(m.image_at(grp.multiply(g, d.vertex_shift(n, s, i)), d.cell(n, s)[i]));
  }
  return t;
}

enum class Solve { None, Interior, Face, Continuum };

struct TopSolution {
  Solve kind = Solve::None;
  RationalVector lambda;
};

// Fixed points of the affine map on one domain simplex: sum l_i (P_i - F_i) = 0, sum l_i = 1.
TopSolution solve_top(const TopData& t) {
  const std::size_t k = t.vertices.size();
  std::map<Cell, int> row;
  for (const auto* list : {&t.vertices, &t.images})
    for (const auto& p : *list)
      for (const auto& [c, w] : p.terms) row.emplace(c, static_cast<int>(row.size()));
  RationalMatrix a(row.size() + 1, RationalVector(k, Rational(0)));
  RationalVector b(row.size() + 1, Rational(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& [c, w] : t.vertices[i].terms) a[row.at(c)][i] += w;
    for (const auto& [c, w] : t.images[i].terms) a[row.at(c)][i] -= w;
    a[row.size()][i] = 1;
  }
  b[row.size()] = 1;
  const LinearSolution sol = solve_linear(a, b);
  if (!sol.consistent) return {};
  auto classify = [](const RationalVector& l) {
    bool face = false;
    for (const auto& x : l) {
      if (x < 0) return Solve::None;
      if (x == 0) face = true;
    }
    return face ? Solve::Face : Solve::Interior;
  };
  if (sol.kernel.empty()) return {classify(sol.particular), sol.particular};
  // Vertices of {A l = b, l >= 0}: basic solutions with a set of zero coordinates.
  std::vector<RationalVector> feasible;
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
    if (s.consistent && s.kernel.empty() && classify(s.particular) != Solve::None) feasible.push_back(s.particular);
  }
  if (feasible.empty()) return {};
  for (const auto& f : feasible)
    if (f != feasible.front()) return {Solve::Continuum, feasible.front()};
  return {Solve::Face, feasible.front()};
}

struct PLAnalysis {
  std::vector<FixedPointRecord> base;  // equivariant fixed points at the identity translate
  std::map<Key, std::vector<FixedPointRecord>> affected;  // (deck, top) recomputed with overrides
  std::vector<FixedPointRecord> on_face;
};

// Chart of the carrier top: barycentric coordinates of a cover point in the
// lift of tau at deck g.
RationalVector chart_coordinates(const std::vector<Cell>& lift, const CoverPoint& p) {
  RationalVector x(lift.size(), Rational(0));
  Rational total = 0;
  for (const auto& [c, w] : p.terms) {
    auto it = std::find(lift.begin(), lift.end(), c);
    if (it == lift.end()) throw InternalError("point leaves the carrier simplex of its fixed point");
    x[it - lift.begin()] += w;
    total += w;
  }
  if (total != 1) throw InternalError("cover point weights do not sum to one");
  return x;
}

int pl_index(const PLSelfMap& m, const TopData& t) {
  const int n = m.domain.complex.dimension();
  const int tau = m.domain.top_carrier.at(t.top);
  const auto lift = top_lift(m.quotient, t.deck, tau);
  RationalMatrix p(n + 1, RationalVector(n + 1)), f(n + 1, RationalVector(n + 1));
  for (int i = 0; i <= n; ++i) {
    const RationalVector pc = chart_coordinates(lift, t.vertices[i]), fc = chart_coordinates(lift, t.images[i]);
    for (int j = 0; j <= n; ++j) {
      p[j][i] = pc[j];
      f[j][i] = fc[j];
    }
  }
  // Row j of M = F P^-1 solves P^T m_j = f_j.
  RationalMatrix pt(n + 1, RationalVector(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) pt[i][j] = p[j][i];
  RationalMatrix mm(n + 1);
  for (int j = 0; j <= n; ++j) {
    const LinearSolution s = solve_linear(pt, f[j]);
    if (!s.consistent || !s.kernel.empty()) throw InternalError("domain simplex is degenerate in its carrier chart");
    mm[j] = s.particular;
  }
  // Affine chart y_1..y_n with y_0 = 1 - sum y_k.
  RationalMatrix ia(n, RationalVector(n));
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) ia[j - 1][k - 1] = Rational(j == k ? 1 : 0) - (mm[j][k] - mm[j][0]);
  const int s = sign(determinant(ia));
  if (s == 0) throw InternalError("isolated PL fixed point with singular I - Df");
  return s;
}

FixedPointRecord pl_record(const PLSelfMap& m, const TopData& t, const RationalVector& lambda) {
  const int n = m.domain.complex.dimension();
  FixedPointRecord r;
  r.host = Cell{t.deck, n, t.top};
  r.coset = t.deck;
  r.point = combine(t.vertices, lambda);
  r.exact = true;
  r.validation = "exact";
  for (const auto& l : lambda) r.barycentric.push_back(l.convert_to<double>());
  const auto lift = top_lift(m.quotient, t.deck, m.domain.top_carrier.at(t.top));
  std::vector<std::vector<double>> verts;
  for (const auto& v : t.vertices) {
    std::vector<double> x;
    for (const auto& c : chart_coordinates(lift, v)) x.push_back(c.convert_to<double>() / std::sqrt(2.0));
    verts.push_back(x);
  }
  r.clearance = simplex_clearance(verts, r.barycentric);
  return r;
}

// Fixed points of one domain top; faces are reported through `on_face`.
std::vector<FixedPointRecord> top_fixed_points(const PLSelfMap& m, const Element& g, int s,
                                               std::vector<FixedPointRecord>* on_face) {
  const TopData t = top_data(m, g, s);
  const TopSolution sol = solve_top(t);
  const MarkedGroup& grp = m.quotient.group();
  switch (sol.kind) {
    case Solve::None: return {};
    case Solve::Continuum:
      throw TamenessError("fixed points are not isolated: the map fixes a continuum in domain simplex " +
                          std::to_string(s) + " at " + grp.format(g) + " near " +
                          describe(grp, combine(t.vertices, sol.lambda)));
    case Solve::Face: {
      FixedPointRecord r;
      r.coset = g;
      r.point = combine(t.vertices, sol.lambda);
      r.exact = true;
      r.validation = "exact";
      if (!on_face)
        throw TamenessError("fixed point " + describe(grp, r.point) + " lies on a face of domain simplex " +
                            std::to_string(s) + "; subdivide once more so it becomes interior");
      if (std::none_of(on_face->begin(), on_face->end(), [&](const auto& o) { return o.point == r.point; }))
        on_face->push_back(r);
      return {};
    }
    case Solve::Interior: {
      FixedPointRecord r = pl_record(m, t, sol.lambda);
      r.index = pl_index(m, t);
      return {r};
    }
  }
  return {};
}

std::set<Key> affected_tops(const PLSelfMap& m) {
  const QuotientComplex& d = m.domain.complex;
  const int n = d.dimension();
  std::set<Key> out;
  for (const auto& [key, p] : m.overrides) {
    const auto& [h, v] = key;
    for (int s = 0; s < static_cast<int>(d.count(n)); ++s) {
      const Simplex& sx = d.cell(n, s);
      for (int i = 0; i <= n; ++i)
        if (sx[i] == v) out.insert({d.group().multiply(h, d.group().inverse(d.vertex_shift(n, s, i))), s});
    }
  }
  return out;
}

PLAnalysis analyze_pl(const PLSelfMap& m, bool allow_faces) {
  PLAnalysis a;
  const QuotientComplex& d = m.domain.complex;
  const int n = d.dimension();
  const Element e = d.group().identity();
  auto* faces = allow_faces ? &a.on_face : nullptr;
  for (int s = 0; s < static_cast<int>(d.count(n)); ++s)
    for (auto& r : top_fixed_points(m, e, s, faces)) a.base.push_back(std::move(r));
  for (const auto& key : affected_tops(m)) a.affected[key] = top_fixed_points(m, key.first, key.second, faces);
  return a;
}

// Fixed points whose support shares a vertex cell with `cells`.
std::vector<CoverPoint> nearby(const PLSelfMap& m, const PLAnalysis& a, const std::set<Cell>& cells) {
  const MarkedGroup& g = m.quotient.group();
  std::vector<CoverPoint> out;
  std::set<std::pair<Element, const FixedPointRecord*>> seen;
  for (const auto& c : cells) {
    for (const auto& r : a.base)
      for (const auto& [dc, w] : r.point.terms) {
        if (dc.id != c.id) continue;
        const Element k = g.multiply(c.deck, g.inverse(dc.deck));
        if (a.affected.count({k, r.host->id})) continue;
        if (seen.insert({k, &r}).second) out.push_back(translate(g, k, r.point));
      }
    for (const auto& [key, list] : a.affected)
      for (const auto& r : list)
        for (const auto& [dc, w] : r.point.terms)
          if (dc == c && seen.insert({key.first, &r}).second) out.push_back(r.point);
  }
  for (const auto& r : a.on_face)
    for (const auto& [dc, w] : r.point.terms)
      if (cells.count(dc)) {
        out.push_back(r.point);
        break;
      }
  return out;
}

std::set<Cell> support(const CoverPoint& p) {
  std::set<Cell> s;
  for (const auto& [c, w] : p.terms) s.insert(c);
  return s;
}

TamenessReport pl_tameness(const SelfMapModel& model) {
  const PLSelfMap& m = model.pl();
  const QuotientComplex& d = m.domain.complex;
  const MarkedGroup& grp = d.group();
  const int n = d.dimension();
  TamenessReport rep;
  rep.metric = "chordal distance on vertex weights; each simplex is a regular unit simplex";

  PLAnalysis a;
  try {
    a = analyze_pl(m, true);
  } catch (const TamenessError& err) {
    rep.verdict = "not tame";
    rep.witnesses.push_back(err.what());
    return rep;
  }

  // Displacement is convex on each simplex, so vertices realize its maximum.
  double max_disp = 0;
  for (int v = 0; v < d.num_vertices(); ++v)
    max_disp = std::max(max_disp, cover_distance(m.domain.vertex_position[v], m.image[v]));
  for (const auto& [key, p] : m.overrides)
    max_disp = std::max(max_disp, cover_distance(translate(grp, key.first, m.domain.vertex_position[key.second]), p));
  rep.max_displacement = max_disp;
  rep.certified_bound = max_disp;
  if (model.declared_bound && max_disp > model.declared_bound->convert_to<double>() * (1 + 1e-12))
    throw ValidationError("displacement " + std::to_string(max_disp) + " exceeds the declared bound " +
                          to_string(*model.declared_bound));

  // Points without a shared vertex are at least 1/sqrt(n+1) apart.
  const double far = 1 / std::sqrt(static_cast<double>(n + 1));
  std::vector<const FixedPointRecord*> all;
  for (const auto& r : a.base) all.push_back(&r);
  for (const auto& [k, list] : a.affected)
    for (const auto& r : list) all.push_back(&r);
  for (const auto& r : a.on_face) all.push_back(&r);
  double sep = far;
  for (const auto* r : all)
    for (const auto& q : nearby(m, a, support(r->point))) {
      const double dd = cover_distance(r->point, q);
      if (dd > 1e-12) sep = std::min(sep, dd);
    }
  const double delta = sep / 2;
  double strong = delta;
  for (const auto* r : all) strong = std::min(strong, r->host ? r->clearance : 0.0);
  for (const auto& r : a.on_face)
    rep.witnesses.push_back("fixed point " + describe(grp, r.point) + " lies on a face of the domain triangulation");

  // Barycentric grid with denominator 8 on every domain top that matters.
  std::vector<Key> tops;
  for (int s = 0; s < static_cast<int>(d.count(n)); ++s) tops.push_back({grp.identity(), s});
  for (const auto& [key, list] : a.affected) tops.push_back(key);
  constexpr int kDen = 8;
  double eps = std::numeric_limits<double>::infinity(), seps = eps;
  std::vector<int> c(n + 1, 0);
  for (const auto& [g, s] : tops) {
    const TopData t = top_data(m, g, s);
    std::set<Cell> cells;
    for (const auto& p : t.vertices)
      for (const auto& [cc, w] : p.terms) cells.insert(cc);
    const auto near = nearby(m, a, cells);
    // Compositions of kDen into n + 1 parts.
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n) {
        c[n] = left;
        RationalVector l;
        for (int x : c) l.push_back(Rational(x, kDen));
        const CoverPoint x = combine(t.vertices, l), fx = combine(t.images, l);
        const double disp = cover_distance(x, fx);
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& q : near) dmin = std::min(dmin, cover_distance(x, q));
        if (dmin >= delta) {
          if (disp < eps && disp == 0)
            rep.witnesses.push_back("displacement vanishes at " + describe(grp, x) + " outside the isolating balls");
          eps = std::min(eps, disp);
        }
        if (dmin >= strong) seps = std::min(seps, disp);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        c[i] = v;
        rec(i + 1, left - v);
      }
    };
    rec(0, kDen);
  }
  if (!std::isfinite(eps)) eps = max_disp;
  if (!std::isfinite(seps)) seps = max_disp;

  rep.delta = rational_below(delta);
  rep.strong_delta = rational_below(strong);
  rep.epsilon = rational_below(eps);
  rep.strong_epsilon = rational_below(seps);
  rep.fixed_point_free = all.empty();
  if (eps <= 0) rep.verdict = "not tame";
  else if (a.on_face.empty() && seps > 0) rep.verdict = "strongly tame";
  else rep.verdict = "tame";
  return rep;
}

bool coset_less(const MarkedGroup& g, const FixedPointRecord& a, const FixedPointRecord& b) {
  if (a.coset != b.coset) return g.shortlex_less(a.coset, b.coset);
  const int ha = a.host ? a.host->id : -1, hb = b.host ? b.host->id : -1;
  if (ha != hb) return ha < hb;
  if (a.position != b.position) return a.position < b.position;
  return a.point.terms < b.point.terms;
}


int orientation_sign(int n) { return n % 2 == 0 ? 1 : -1; }

}  // namespace

void sort_records(const MarkedGroup& g, std::vector<FixedPointRecord>& v) {
  std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return coset_less(g, a, b); });
}

FixedPointRecord torus_record(const TorusZero& z) {
  FixedPointRecord r;
  if (z.host) {
    r.host = z.host->cell;
    r.barycentric = z.host->barycentric;
    r.clearance = z.host->clearance;
  }
  r.coset = z.coset;
  r.position = z.location;
  r.exact = z.zero.exact.has_value();
  r.enclosure = z.zero.radius;
  r.validation = z.zero.validation;
  r.piece = z.zero.piece;
  r.index = z.index;
  return r;
}

TorusZeroSet analytic_zero_set(const TorusChart& chart, const AnalyticField& f, int grid, int orientation,
                               const std::string& what) {
  if (std::all_of(f.base().u.begin(), f.base().u.end(), [](const Expr& e) { return e.is_zero(); }))
    throw TamenessError("zeros are not isolated: the " + what + " vanishes identically");
  return torus_zeros(chart, f, grid, orientation);
}

std::vector<FixedPointRecord> torus_records(const TorusChart& chart, const AnalyticField& f, const TorusZeroSet& zs,
                                            int radius) {
  std::vector<FixedPointRecord> out;
  for (const auto& deck : chart.complex().group().ball(radius)) {
    const std::vector<long long> k(deck.data.begin(), deck.data.end());
    for (const auto& z : zs.periodic) {
      const auto skip = override_translates(f, z);
      if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
      out.push_back(torus_record(translate_zero(chart, z, k)));
    }
  }
  for (const auto& z : zs.added) out.push_back(torus_record(z));
  sort_records(chart.complex().group(), out);
  return out;
}

int torus_degree(const AnalyticField& f, const FixedPointRecord& p, double radius) {
  if (!p.host) throw ValidationError("zero lies on a face; its index needs a host simplex");
  const FieldPiece& piece = p.piece < 0 ? f.base() : f.overrides().at(p.piece).piece;
  AnalyticZero z;
  for (const auto& c : p.position) z.point.push_back(c.convert_to<double>());
  z.validation = p.validation;
  z.radius = p.enclosure;
  return zero_degree(piece, z, radius > 0 ? radius : p.enclosure);
}

TamenessReport torus_tameness(const TorusChart& chart, const AnalyticField& f, int grid, int sample_grid,
                              int orientation, const std::optional<Rational>& bound, const std::string& what) {
  TamenessReport rep;
  rep.metric = "Euclidean metric of the cover";
  TorusZeroSet zs;
  try {
    zs = analytic_zero_set(chart, f, grid, orientation, what);
  } catch (const TamenessError& err) {
    rep.verdict = "not tame";
    rep.witnesses.push_back(err.what());
    return rep;
  }
  const TorusSampling s = sample_torus(chart, f, zs, sample_grid);
  rep.max_displacement = s.max_norm;
  rep.certified_bound = s.certified_norm;
  if (bound && s.max_norm > bound->convert_to<double>())
    throw ValidationError("sampled " + what + " norm " + std::to_string(s.max_norm) + " exceeds the declared bound " +
                          to_string(*bound));
  rep.delta = rational_below(s.delta);
  rep.strong_delta = rational_below(s.strong_delta);
  rep.epsilon = rational_below(s.epsilon);
  rep.strong_epsilon = rational_below(s.strong_epsilon);
  rep.witnesses = s.witnesses;
  for (const auto& d : zs.diagnostics) rep.witnesses.push_back(d);
  rep.fixed_point_free = zs.periodic.empty() && zs.added.empty();
  bool faces = false;
  for (const auto* list : {&zs.periodic, &zs.added})
    for (const auto& z : *list) faces = faces || !z.host;
  if (s.epsilon <= 0) rep.verdict = "not tame";
  else if (!faces && s.strong_epsilon > 0 && (rep.fixed_point_free || s.strong_delta > 0)) rep.verdict = "strongly tame";
  else rep.verdict = "tame";
  return rep;
}

ClassFunction torus_class(const AnalyticField& f, const TorusZeroSet& zs, std::vector<FixedPointRecord>* points) {
  ClassFunction out;
  const std::vector<long long> origin(f.dimension(), 0);
  for (const auto& z : zs.periodic) {
    out.constant += z.index;
    const auto skip = override_translates(f, z);
    if (points && std::find(skip.begin(), skip.end(), origin) == skip.end()) points->push_back(torus_record(z));
  }
  for (const auto& z : zs.removed) out.add(z.coset, -z.index);
  for (const auto& z : zs.added) {
    out.add(z.coset, z.index);
    if (points) points->push_back(torus_record(z));
  }
  return out;
}

CoverPoint PLSelfMap::image_at(const Element& deck, int vertex) const {
  auto it = overrides.find({deck, vertex});
  if (it != overrides.end()) return it->second;
  return translate(quotient.group(), deck, image.at(vertex));
}

const QuotientComplex& SelfMapModel::quotient() const {
  return analytic() ? smooth().chart.torus().complex() : pl().quotient;
}

bool SelfMapModel::equivariant() const {
  return analytic() ? smooth().displacement.overrides().empty() : pl().overrides.empty();
}

double cover_distance(const CoverPoint& a, const CoverPoint& b) {
  std::map<Cell, double> w;
  for (const auto& [c, x] : a.terms) w[c] += x.convert_to<double>();
  for (const auto& [c, x] : b.terms) w[c] -= x.convert_to<double>();
  double s = 0;
  for (const auto& [c, x] : w) s += x * x;
  return std::sqrt(s / 2);
}

PLSelfMap make_pl_map(QuotientComplex q, int t, std::vector<CoverPoint> image,
                      std::map<std::pair<Element, int>, CoverPoint> overrides) {
  PLSelfMap m;
  m.domain = barycentric_subdivide(q, t);
  m.quotient = std::move(q);
  const QuotientComplex& d = m.domain.complex;
  if (static_cast<int>(image.size()) != d.num_vertices())
    throw InputError("expected " + std::to_string(d.num_vertices()) + " vertex images, got " +
                     std::to_string(image.size()));
  const int nq = m.quotient.num_vertices();
  auto check_point = [&](const CoverPoint& p) {
    Rational total = 0;
    for (const auto& [c, w] : p.terms) {
      if (c.id < 0 || c.id >= nq) throw InputError("image refers to vertex " + std::to_string(c.id));
      total += w;
    }
    if (total != 1 || p.terms.empty()) throw InputError("image weights must be positive and sum to one");
  };
  for (const auto& p : image) check_point(p);
  for (const auto& [k, p] : overrides) {
    check_point(p);
    if (k.second < 0 || k.second >= d.num_vertices()) throw InputError("override refers to a missing domain vertex");
  }
  m.image = std::move(image);
  m.overrides = std::move(overrides);

  const int n = d.dimension();
  std::vector<Key> tops;
  for (int s = 0; s < static_cast<int>(d.count(n)); ++s) tops.push_back({d.group().identity(), s});
  for (const auto& k : affected_tops(m)) tops.push_back(k);
  for (const auto& [g, s] : tops) {
    const TopData td = top_data(m, g, s);
    std::set<Cell> cells;
    for (const auto& p : td.images)
      for (const auto& [c, w] : p.terms) cells.insert(c);
    if (!common_top(m.quotient, cells))
      throw ValidationError("images of domain simplex " + std::to_string(s) + " at " + d.group().format(g) +
                            " do not lie in one closed simplex; the map is not PL on this subdivision");
  }

  if (m.overrides.empty()) {
    std::vector<int> vm;
    for (const auto& p : m.image)
      if (p.terms.size() == 1) vm.push_back(p.terms[0].first.id);
    if (vm.size() == m.image.size()) m.simplicial = PLSelfMap::Simplicial{m.domain, vm};
  }
  return m;
}

PLSelfMap vertex_map_model(QuotientComplex q, int t, const std::vector<int>& vertex_map) {
  std::vector<CoverPoint> image;
  for (int v : vertex_map) image.push_back(CoverPoint{{{Cell{q.group().identity(), 0, v}, Rational(1)}}});
  return make_pl_map(std::move(q), t, std::move(image));
}

PLSelfMap induced_vertex_permutation(QuotientComplex q, int t, const std::vector<int>& permutation) {
  if (!q.group().is_finite() || q.group().order() != 1)
    throw UnsupportedError("vertex permutations are only induced for a trivial deck group");
  if (static_cast<int>(permutation.size()) != q.num_vertices()) throw InputError("permutation has the wrong length");
  const Subdivision sd = barycentric_subdivide(q, t);
  std::vector<CoverPoint> image;
  for (const auto& p : sd.vertex_position) {
    std::vector<std::pair<Cell, Rational>> terms;
    for (const auto& [c, w] : p.terms) terms.push_back({Cell{c.deck, 0, permutation.at(c.id)}, w});
    image.push_back(normalize(std::move(terms)));
  }
  return make_pl_map(std::move(q), t, std::move(image));
}

PLSelfMap torus_translation(const Torus& torus, int t, const RationalVector& shift) {
  if (static_cast<int>(shift.size()) != torus.dimension()) throw InputError("shift has the wrong dimension");
  const Subdivision sd = barycentric_subdivide(torus.complex(), t);
  std::vector<CoverPoint> image;
  for (const auto& p : sd.vertex_position) {
    RationalVector x = torus.position(p);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += shift[i];
    image.push_back(torus.locate(x));
  }
  return make_pl_map(torus.complex(), t, std::move(image));
}

std::vector<FixedPointRecord> find_fixed_points(const SelfMapModel& model, int radius) {
  const MarkedGroup& g = model.group();
  std::vector<FixedPointRecord> out;
  if (!model.analytic()) {
    const PLSelfMap& m = model.pl();
    const int n = m.domain.complex.dimension();
    for (const auto& deck : g.ball(radius))
      for (int s = 0; s < static_cast<int>(m.domain.complex.count(n)); ++s)
        for (auto& r : top_fixed_points(m, deck, s, nullptr)) out.push_back(std::move(r));
  } else {
    const AnalyticSelfMap& m = model.smooth();
    const TorusZeroSet zs = analytic_zero_set(m.chart, m.displacement, model.grid,
                                              orientation_sign(m.chart.dimension()), "displacement");
    out = torus_records(m.chart, m.displacement, zs, radius);
  }
  for (auto& r : out) r.index.reset();
  sort_records(g, out);
  return out;
}

int local_index(const SelfMapModel& model, const FixedPointRecord& p, double radius) {
  if (!p.host) throw ValidationError("fixed point lies on a face; its index needs a host simplex");
  if (!model.analytic()) {
    const PLSelfMap& m = model.pl();
    return pl_index(m, top_data(m, p.host->deck, p.host->id));
  }
  const AnalyticSelfMap& m = model.smooth();
  return orientation_sign(m.chart.dimension()) * torus_degree(m.displacement, p, radius);
}

TamenessReport tameness_check(const SelfMapModel& m) {
  if (!m.analytic()) return pl_tameness(m);
  const AnalyticSelfMap& a = m.smooth();
  return torus_tameness(a.chart, a.displacement, m.grid, m.sample_grid, orientation_sign(a.chart.dimension()),
                        m.declared_bound, "displacement");
}

LefschetzResult lefschetz_class(const SelfMapModel& model) {
  LefschetzResult out;
  out.tameness = tameness_check(model);
  if (out.tameness.verdict != "strongly tame") {
    std::string why = "the map is " + out.tameness.verdict + "; the Lefschetz class needs a strongly tame map";
    for (const auto& w : out.tameness.witnesses) why += "; " + w;
    throw TamenessError(why);
  }
  const MarkedGroup& g = model.group();
  if (!model.analytic()) {
    const PLSelfMap& m = model.pl();
    const PLAnalysis a = analyze_pl(m, false);
    for (const auto& r : a.base) {
      out.function.constant += *r.index;
      if (!a.affected.count({r.host->deck, r.host->id})) out.points.push_back(r);
    }
    for (const auto& [key, list] : a.affected) {
      for (const auto& r : list) {
        out.function.add(key.first, *r.index);
        out.points.push_back(r);
      }
      for (const auto& r : a.base)
        if (r.host->id == key.second) out.function.add(key.first, -*r.index);
    }
  } else {
    const AnalyticSelfMap& m = model.smooth();
    const TorusZeroSet zs = analytic_zero_set(m.chart, m.displacement, model.grid,
                                              orientation_sign(m.chart.dimension()), "displacement");
    out.diagnostics = zs.diagnostics;
    out.function = torus_class(m.displacement, zs, &out.points);
  }
  for (auto& p : out.points) p.isolation = out.tameness.strong_delta;
  sort_records(g, out.points);
  return out;
}

IndexData ingest_index_data(const json& doc) {
  if (!doc.is_object() || !doc.contains("group")) throw InputError("index data needs a \"group\" entry");
  IndexData d{MarkedGroup::from_json(doc.at("group")), {}, "externally supplied index data"};
  d.function = class_function_from_json(d.group, doc);
  // Indices of the fixed points in one fundamental domain add to the constant.
  if (doc.contains("domain_indices")) {
    if (!doc.at("domain_indices").is_array()) throw InputError("\"domain_indices\" is a list of integers");
    for (const auto& i : doc.at("domain_indices")) d.function.constant += i.get<long long>();
  }
  return d;
}

OracleComparison equivariant_oracle_check(const SelfMapModel& model) {
  if (!model.equivariant()) throw ValidationError("the classical comparison needs an equivariant map without overrides");
  OracleComparison c;
  if (!model.analytic()) {
    const PLSelfMap& m = model.pl();
    if (!m.simplicial)
      throw UnsupportedError("the classical comparison needs a map that was given by a vertex map");
    c.classical = lefschetz_number_quotient(m.quotient, m.simplicial->domain, m.simplicial->vertex_map);
    c.method = "trace formula for the descended simplicial map";
  } else {
    // x + s u(x), s in [0, 1], is an equivariant homotopy to the identity.
    const QuotientComplex& q = model.quotient();
    const Subdivision sd = barycentric_subdivide(q, 1);
    c.classical = lefschetz_number_quotient(q, sd, carrier_vertex_map(sd));
    c.method = "trace formula for a simplicial approximation of the identity, to which x + u is homotopic";
  }
  c.index_sum = lefschetz_class(model).function.constant;
  c.equal = c.index_sum == c.classical;
  return c;
}

SelfMapModel refine(const SelfMapModel& model) {
  SelfMapModel out = model;
  if (model.analytic()) {
    const AnalyticSelfMap& m = model.smooth();
    out.map = AnalyticSelfMap{TorusChart(m.chart.torus(), m.chart.subdivisions() + 1), m.displacement};
    return out;
  }
  const PLSelfMap& m = model.pl();
  const QuotientComplex& d = m.domain.complex;
  const MarkedGroup& g = d.group();
  const int n = d.dimension();
  const Subdivision next = barycentric_subdivide(m.quotient, m.domain.times + 1);

  // New vertices are barycenters of domain simplices, by decreasing dimension.
  std::vector<std::pair<int, int>> order;
  for (int k = n; k >= 0; --k)
    for (int id = 0; id < static_cast<int>(d.count(k)); ++id) order.push_back({k, id});
  if (static_cast<int>(order.size()) != next.complex.num_vertices())
    throw InternalError("subdivision vertex count does not match the simplices of the domain");

  auto barycenter_image = [&](const Element& deck, int k, int id) {
    std::vector<CoverPoint> imgs;
    for (int i = 0; i <= k; ++i)
      imgs.push_back(m.image_at(g.multiply(deck, d.vertex_shift(k, id, i)), d.cell(k, id)[i]));
    return combine(imgs, RationalVector(k + 1, Rational(1, k + 1)));
  };

  std::vector<CoverPoint> image;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const auto [k, id] = order[idx];
    std::vector<CoverPoint> pos;
    for (int i = 0; i <= k; ++i) pos.push_back(simplex_vertex_position(m.domain, k, id, i));
    if (combine(pos, RationalVector(k + 1, Rational(1, k + 1))) != next.vertex_position[idx])
      throw InternalError("subdivision vertex " + std::to_string(idx) + " is not the expected barycenter");
    image.push_back(barycenter_image(g.identity(), k, id));
  }
  std::map<Key, CoverPoint> overrides;
  for (const auto& [key, p] : m.overrides) {
    const auto& [h, v] = key;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const auto [k, id] = order[idx];
      const Simplex& sx = d.cell(k, id);
      for (int i = 0; i <= k; ++i)
        if (sx[i] == v) {
          const Element deck = g.multiply(h, g.inverse(d.vertex_shift(k, id, i)));
          overrides[{deck, static_cast<int>(idx)}] = barycenter_image(deck, k, id);
        }
    }
  }
  PLSelfMap refined = make_pl_map(m.quotient, m.domain.times + 1, std::move(image), std::move(overrides));
  refined.simplicial = m.simplicial;
  out.map = std::move(refined);
  return out;
}

SelfMapModel scale_displacement(const SelfMapModel& model, const Rational& s) {
  if (!model.analytic()) throw UnsupportedError("displacement scaling applies to analytic maps");
  SelfMapModel out = model;
  const AnalyticSelfMap& m = model.smooth();
  out.map = AnalyticSelfMap{m.chart, m.displacement.scaled(s)};
  if (model.declared_bound) out.declared_bound = *model.declared_bound * abs(s);
  return out;
}

json fixed_point_to_json(const MarkedGroup& g, const FixedPointRecord& p) {
  json j;
  j["coset"] = g.format(p.coset);
  if (p.host) j["host"] = {{"deck", g.format(p.host->deck)}, {"simplex", p.host->id}};
  else j["host"] = nullptr;
  if (!p.point.terms.empty()) {
    json terms = json::array();
    for (const auto& [c, w] : p.point.terms) terms.push_back({g.format(c.deck), c.id, to_string(w)});
    j["point"] = terms;
  }
  if (!p.position.empty()) {
    json pos = json::array();
    for (const auto& x : p.position) {
      if (p.exact) pos.push_back(to_string(x));
      else pos.push_back(x.convert_to<double>());
    }
    j["position"] = pos;
  }
  j["validation"] = p.validation;
  if (p.enclosure > 0) j["enclosure"] = p.enclosure;
  j["clearance"] = p.clearance;
  if (p.piece >= 0) j["override"] = p.piece;
  if (p.index) j["index"] = *p.index;
  if (p.isolation) j["isolation_radius"] = to_string(*p.isolation);
  return j;
}

json tameness_to_json(const TamenessReport& r) {
  json j{{"verdict", r.verdict},
         {"delta", to_string(r.delta)},
         {"epsilon", to_string(r.epsilon)},
         {"strong_delta", to_string(r.strong_delta)},
         {"strong_epsilon", to_string(r.strong_epsilon)},
         {"fixed_point_free", r.fixed_point_free},
         {"max_displacement", r.max_displacement},
         {"metric", r.metric},
         {"witnesses", r.witnesses}};
  if (r.certified_bound) j["certified_bound"] = *r.certified_bound;
  return j;
}

}  // namespace ulef
