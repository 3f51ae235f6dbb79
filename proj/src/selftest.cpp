#include <random>

#include "ulef/chain.hpp"
#include "ulef/error.hpp"
#include "ulef/fixpoint.hpp"
#include "ulef/fixtures.hpp"
#include "ulef/selftest.hpp"
#include "ulef/ufh.hpp"

namespace ulef {

namespace {

struct Cover {
  std::string name;
  PeriodicComplex pc;
  std::vector<Element> support;
};

Cover make_cover(std::string name, const QuotientComplex& q) {
  int reach = 0;
  for (const auto& [e, l] : q.labels()) reach = std::max(reach, q.group().length(l));
  Cover c{std::move(name), PeriodicComplex(q), q.group().ball(2)};
  c.pc.expand(2 + reach);
  return c;
}

PeriodicChain random_chain(std::mt19937_64& rng, const Cover& cv, int degree, bool periodic) {
  const QuotientComplex& q = cv.pc.quotient();
  PeriodicChain c = PeriodicChain::zero(q, degree);
  std::uniform_int_distribution<int> coeff(-3, 3);
  if (periodic)
    for (auto& v : c.equivariant) v = coeff(rng);
  std::uniform_int_distribution<std::size_t> pick(0, cv.support.size() - 1);
  std::uniform_int_distribution<int> simplex(0, static_cast<int>(q.count(degree)) - 1);
  for (int i = 0; i < 6; ++i) c.add(Cell{cv.support[pick(rng)], degree, simplex(rng)}, coeff(rng));
  return c;
}

ClassFunction random_function(std::mt19937_64& rng, const MarkedGroup& g, bool with_constant) {
  const auto ball = g.ball(3);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3), entries(1, 4);
  ClassFunction f;
  if (with_constant) f.constant = coeff(rng);
  for (int i = entries(rng); i > 0; --i) f.add(ball[pick(rng)], coeff(rng));
  return f;
}

// Runs `trial` on every cover `trials` times; the first failure is kept.
template <class Trial>
PropertyResult over_covers(const std::string& name, const std::vector<Cover>& covers, int trials, Trial trial) {
  PropertyResult r{name, 0, 0, nullptr};
  for (const auto& cv : covers)
    for (int i = 0; i < trials; ++i) {
      ++r.trials;
      json witness;
      try {
        witness = trial(cv);
      } catch (const Error& e) {
        witness = {{"error", e.what()}};
      }
      if (witness.is_null()) ++r.passed;
      else if (r.counterexample.is_null()) r.counterexample = {{"cover", cv.name}, {"trial", i}, {"witness", witness}};
    }
  return r;
}

json chain_pair(const MarkedGroup& g, const PeriodicChain& a, const PeriodicChain& b) {
  return {{"expected", chain_to_json(g, a)}, {"got", chain_to_json(g, b)}};
}

PropertyResult fundamental_cycles(bool corrupt) {
  std::vector<std::pair<std::string, QuotientComplex>> fixtures{
      {"tetrahedron", tetrahedron_boundary()},     {"octahedron", octahedron().complex},
      {"square torus", square_torus(3).complex()}, {"seven-vertex torus", seven_vertex_torus().complex()},
      {"cyclic torus", cyclic_torus().complex()},  {"genus 2", genus2_surface()}};
  if (corrupt) {
    auto signs = fixtures[0].second.orientations();
    signs[0] = -signs[0];
    fixtures[0].second.set_orientation(signs);
  }
  PropertyResult r{"fundamental cycle is a cycle", 0, 0, nullptr};
  for (const auto& [name, q] : fixtures) {
    ++r.trials;
    PeriodicComplex pc(q);
    pc.expand(1);
    PeriodicChain mu = PeriodicChain::zero(q, q.dimension());
    for (std::size_t t = 0; t < q.count(q.dimension()); ++t) mu.equivariant[t] = q.orientation(static_cast<int>(t));
    const PeriodicChain d = boundary(pc, mu);
    if (d == PeriodicChain::zero(q, q.dimension() - 1)) {
      ++r.passed;
    } else if (r.counterexample.is_null()) {
      json faces = json::array();
      for (std::size_t f = 0; f < d.equivariant.size(); ++f)
        if (d.equivariant[f] != 0) faces.push_back({{"face", q.cell(q.dimension() - 1, static_cast<int>(f))}, {"coefficient", d.equivariant[f]}});
      r.counterexample = {{"fixture", name}, {"boundary_of_mu", faces}};
    }
  }
  return r;
}

PropertyResult klein_rejected() {
  PropertyResult r{"non-orientable quotient is rejected", 1, 0, nullptr};
  const QuotientComplex k = klein_bottle();
  bool rejected = false;
  try {
    PeriodicComplex pc(k);
    fundamental_cycle(pc);
  } catch (const OrientationError&) {
    rejected = true;
  } catch (const ValidationError&) {
    rejected = true;
  }
  if (rejected && !k.coherent_orientation()) r.passed = 1;
  else r.counterexample = {{"fixture", "klein bottle"}, {"detail", "accepted as orientable"}};
  return r;
}

// The rotation about (1,1,1) on Sd^1 of the octahedron, with the images of
// the two axis barycenters moved so the fixed points avoid subdivision vertices.
SelfMapModel perturbed_rotation() {
  auto oct = octahedron();
  PLSelfMap m = induced_vertex_permutation(oct.complex, 1, {2, 3, 4, 5, 0, 1});
  const Element e = oct.complex.group().identity();
  auto img = m.image;
  img[0] = normalize({{Cell{e, 0, 0}, Rational(1, 2)}, {Cell{e, 0, 2}, Rational(1, 4)}, {Cell{e, 0, 4}, Rational(1, 4)}});
  img[7] = normalize({{Cell{e, 0, 1}, Rational(1, 5)}, {Cell{e, 0, 3}, Rational(2, 5)}, {Cell{e, 0, 5}, Rational(2, 5)}});
  SelfMapModel out;
  out.map = make_pl_map(oct.complex, 1, img);
  return out;
}

PropertyResult subdivision_stability() {
  PropertyResult r{"Lefschetz class is stable under subdivision", 0, 0, nullptr};
  std::vector<std::pair<std::string, SelfMapModel>> maps;
  maps.push_back({"perturbed octahedron rotation", perturbed_rotation()});
  SelfMapModel shift, sine;
  shift.map = torus_translation(square_torus(3), 0, {Rational(1, 3), Rational(0)});
  sine.map = AnalyticSelfMap{TorusChart(sine_torus(), 0), AnalyticField(2, {"0.2*sin(2*pi*x)", "0.2*sin(2*pi*y)"})};
  maps.push_back({"torus translation", shift});
  maps.push_back({"sine displacement", sine});
  for (const auto& [name, m] : maps) {
    ++r.trials;
    try {
      const ClassFunction a = lefschetz_class(m).function, b = lefschetz_class(refine(m)).function;
      if (a == b) ++r.passed;
      else if (r.counterexample.is_null())
        r.counterexample = {{"map", name},
                            {"before", class_function_to_json(m.group(), a)},
                            {"after", class_function_to_json(m.group(), b)}};
    } catch (const Error& e) {
      if (r.counterexample.is_null()) r.counterexample = {{"map", name}, {"error", e.what()}};
    }
  }
  return r;
}

template <class Make>
PropertyResult over_groups(const std::string& name, int trials, Make make) {
  PropertyResult r{name, 0, 0, nullptr};
  for (const auto& g : {MarkedGroup::free_abelian(2), MarkedGroup::free_group(2)})
    for (int i = 0; i < trials; ++i) {
      ++r.trials;
      json witness;
      try {
        witness = make(g);
      } catch (const Error& e) {
        witness = {{"error", e.what()}};
      }
      if (witness.is_null()) ++r.passed;
      else if (r.counterexample.is_null()) r.counterexample = {{"group", g.to_json()}, {"trial", i}, {"witness", witness}};
    }
  return r;
}

}  // namespace

std::vector<PropertyResult> run_selftest(const SelftestOptions& options) {
  std::mt19937_64 rng(options.seed);
  const int n = options.trials;
  std::vector<Cover> covers;
  covers.push_back(make_cover("torus", square_torus(3).complex()));
  covers.push_back(make_cover("genus 2", genus2_surface()));
  std::vector<PropertyResult> out;

  out.push_back(over_covers("boundary squares to zero", covers, n, [&](const Cover& cv) -> json {
    const auto c = random_chain(rng, cv, 2, true);
    const auto dd = boundary(cv.pc, boundary(cv.pc, c));
    const auto z = PeriodicChain::zero(cv.pc.quotient(), 0);
    return dd == z ? json() : chain_pair(cv.pc.group(), z, dd);
  }));
  out.push_back(over_covers("coboundary squares to zero", covers, n, [&](const Cover& cv) -> json {
    const auto u = random_chain(rng, cv, 0, true);
    const auto dd = coboundary(cv.pc, coboundary(cv.pc, u));
    const auto z = PeriodicChain::zero(cv.pc.quotient(), 2);
    return dd == z ? json() : chain_pair(cv.pc.group(), z, dd);
  }));
  out.push_back(over_covers("coboundary is adjoint to boundary", covers, n, [&](const Cover& cv) -> json {
    const int p = static_cast<int>(rng() % 2);
    const auto u = random_chain(rng, cv, p, true);
    const auto c = random_chain(rng, cv, p + 1, false);
    const long long a = pairing(coboundary(cv.pc, u), c), b = pairing(u, boundary(cv.pc, c));
    if (a == b) return json();
    return {{"degree", p}, {"du_c", a}, {"u_dc", b}};
  }));
  const std::vector<std::pair<int, int>> degrees{{0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  out.push_back(over_covers("Leibniz identity for the cap product", covers, n, [&](const Cover& cv) -> json {
    const auto [p, k] = degrees[rng() % degrees.size()];
    const QuotientComplex& q = cv.pc.quotient();
    const auto u = random_chain(rng, cv, p, true);
    const auto c = random_chain(rng, cv, k, true);
    if (k - p < 1) return json();  // both sides vanish
    const auto lhs = boundary(cv.pc, cap(cv.pc, u, c));
    auto rhs = PeriodicChain::zero(q, k - p - 1);
    if (p + 1 <= k) rhs = rhs + cap(cv.pc, signed_coboundary(cv.pc, u), c);
    rhs = rhs + (p % 2 ? -1 : 1) * cap(cv.pc, u, boundary(cv.pc, c));
    if (lhs == rhs) return json();
    json w = chain_pair(cv.pc.group(), lhs, rhs);
    w["degrees"] = {p, k};
    return w;
  }));
  out.push_back(fundamental_cycles(options.corrupt_orientation));
  out.push_back(klein_rejected());
  out.push_back(subdivision_stability());
  out.push_back(over_groups("vanishing certificates re-verify", n, [&](const MarkedGroup& g) -> json {
    const ClassFunction f = random_function(rng, g, false);
    const auto cert = decide_class(g, f);
    std::string detail;
    const bool ok = cert.verdict.rfind("zero", 0) == 0 && cert.verified &&
                    verify_certificate(certificate_to_json(g, cert), &detail);
    if (ok) return json();
    return {{"function", class_function_to_json(g, f)}, {"verdict", cert.verdict}, {"detail", detail}};
  }));
  out.push_back(over_groups("f - g.f vanishes in the coinvariants", n, [&](const MarkedGroup& g) -> json {
    const ClassFunction f = random_function(rng, g, true);
    const auto ball = g.ball(2);
    const Element h = ball[rng() % ball.size()];
    ClassFunction d = f;
    const ClassFunction hf = translate(g, h, f);
    d.constant -= hf.constant;
    for (const auto& [x, v] : hf.finite) d.add(x, -v);
    const auto cert = decide_class(g, d);
    if (cert.verdict.rfind("zero", 0) == 0 && cert.verified) return json();
    return {{"function", class_function_to_json(g, f)}, {"shift", g.format(h)}, {"verdict", cert.verdict}};
  }));
  return out;
}

json selftest_to_json(const SelftestOptions& options, const std::vector<PropertyResult>& results) {
  json props = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.ok();
    json p{{"property", r.name}, {"trials", r.trials}, {"passed", r.passed}, {"verdict", r.ok() ? "pass" : "fail"}};
    if (!r.ok()) p["counterexample"] = r.counterexample;
    props.push_back(p);
  }
  return {{"seed", options.seed}, {"trials_per_cover", options.trials}, {"properties", props}, {"all_passed", all}};
}

}  // namespace ulef
