// Acceptance criteria 1-8, one PASS/FAIL line each. argv[1], when given, is
// the CLI binary used for the determinism runs.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ulef/chain.hpp"
#include "ulef/commands.hpp"
#include "ulef/error.hpp"
#include "ulef/fixpoint.hpp"
#include "ulef/io.hpp"
#include "ulef/ufh.hpp"
#include "ulef/vectorfield.hpp"

using namespace ulef;

namespace {

std::string cli_path;

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

// Head minus tail of every edge x -> x s_i, computed from the payload rows.
std::map<Element, long long> payload_boundary(const MarkedGroup& g, const json& rows) {
  std::map<Element, long long> db;
  const auto& names = g.generator_names();
  for (const auto& r : rows) {
    const Element x = g.parse(r.at(0).get<std::string>());
    const int i = static_cast<int>(std::find(names.begin(), names.end(), r.at(1).get<std::string>()) - names.begin());
    const long long v = r.at(2).get<long long>();
    db[g.multiply(x, g.generator(i))] += v;
    db[x] -= v;
  }
  return db;
}

bool bounds_on(const MarkedGroup& g, const std::map<Element, long long>& db, const ClassFunction& f,
               const std::vector<Element>& region) {
  for (const auto& x : region) {
    auto it = db.find(x);
    if ((it == db.end() ? 0 : it->second) != f.value(x)) return false;
  }
  return true;
}

bool bounds_everywhere(const std::map<Element, long long>& db, const ClassFunction& f) {
  if (f.constant != 0) return false;
  for (const auto& [x, v] : db)
    if (v != f.value(x)) return false;
  for (const auto& [x, v] : f.finite) {
    auto it = db.find(x);
    if ((it == db.end() ? 0 : it->second) != v) return false;
  }
  return true;
}

// Re-derives db = c on the stated region for a vanishing certificate.
bool payload_bounds(const MarkedGroup& g, const ClassFunction& f, const ClassCertificate& cert) {
  const json doc = certificate_to_json(g, cert);
  const json& p = doc.at("payload");
  if (cert.verdict == "zero-by-boundary") {
    const auto db = payload_boundary(g, p.at("chain"));
    if (p.at("global").get<bool>()) return bounds_everywhere(db, f);
    return bounds_on(g, db, f, g.ball(p.at("radius").get<int>() - 1));
  }
  if (cert.verdict == "zero-by-truncated-flow") {
    for (const auto& run : p.at("runs")) {
      if (!run.at("feasible").get<bool>()) return false;
      if (!bounds_on(g, payload_boundary(g, run.at("chain")), f, g.ball(run.at("radius").get<int>() - 1)))
        return false;
    }
    return true;
  }
  return false;
}

ClassFunction random_function(std::mt19937_64& rng, const MarkedGroup& g, bool constant) {
  const auto ball = g.ball(3);
  ClassFunction f;
  if (constant) f.constant = static_cast<long long>(rng() % 7) - 3;
  for (int i = 1 + static_cast<int>(rng() % 4); i > 0; --i)
    f.add(ball[rng() % ball.size()], static_cast<long long>(rng() % 7) - 3);
  return f;
}

SelfMapModel sine_map(int t, const std::string& amp = "0.2") {
  return SelfMapModel{AnalyticSelfMap{TorusChart(sine_torus(), t),
                                      AnalyticField(2, {amp + "*sin(2*pi*x)", amp + "*sin(2*pi*y)"})}};
}

SelfMapModel perturbed_rotation() {
  auto oct = octahedron();
  PLSelfMap m = induced_vertex_permutation(oct.complex, 1, {2, 3, 4, 5, 0, 1});
  const Element e = oct.complex.group().identity();
  m.image[0] = normalize({{Cell{e, 0, 0}, Rational(1, 2)}, {Cell{e, 0, 2}, Rational(1, 4)}, {Cell{e, 0, 4}, Rational(1, 4)}});
  m.image[7] = normalize({{Cell{e, 0, 1}, Rational(1, 5)}, {Cell{e, 0, 3}, Rational(2, 5)}, {Cell{e, 0, 5}, Rational(2, 5)}});
  return SelfMapModel{make_pl_map(oct.complex, 1, m.image)};
}

void criterion1(Check& c) {
  const json doc = {{"model", "index-data"}, {"group", {{"kind", "free-abelian"}, {"rank", 1}}}, {"domain_indices", {1, 1}}};
  const CommandOutput out = cmd_map_analyze(doc, RunConfig{});
  const json& r = out.report;
  c.expect(r.at("lefschetz_class") == json({{"constant", 2}, {"finite", json::array()}}), "class is not 2*1");
  const json& cert = r.at("certificate");
  c.expect(cert.at("verdict") == "nonzero-by-mean", "verdict " + cert.at("verdict").dump());
  c.expect(cert.at("payload").at("limit") == "2", "limit " + cert.at("payload").at("limit").dump());
  // A constant function averages to itself on every interval.
  for (const auto& row : cert.at("payload").at("averages"))
    c.expect(row.at("average") == "2" && row.at("sum").get<long long>() == 2 * row.at("size").get<long long>(),
             "average row " + row.dump());
  c.expect(cert.at("verifier_result").at("verified").get<bool>(), "certificate not verified");
}

void criterion2(Check& c) {
  auto oct = octahedron();
  struct Case {
    std::string name;
    SelfMapModel model;
    long long classical;  // Lefschetz number from the degree of the map on the quotient
  };
  std::vector<Case> cases;
  // Rotation of S^2: degree 1, L = 1 + 1. Antipode: degree -1, L = 1 - 1.
  cases.push_back({"octahedron rotation", SelfMapModel{vertex_map_model(oct.complex, 0, {2, 3, 4, 5, 0, 1})}, 2});
  cases.push_back({"octahedron antipode", SelfMapModel{vertex_map_model(oct.complex, 0, {1, 0, 3, 2, 5, 4})}, 0});
  // Homotopic to the identity of T^2: L = chi(T^2) = 0.
  cases.push_back({"torus sine displacement", sine_map(0), 0});
  cases.push_back({"torus translation", SelfMapModel{torus_translation(square_torus(3), 0, {Rational(1, 3), Rational(0)})}, 0});
  for (const auto& k : cases) {
    const auto res = lefschetz_class(k.model);
    c.expect(res.tameness.verdict == "strongly tame", k.name + " is " + res.tameness.verdict);
    c.expect(res.function.finite.empty(), k.name + " has a finite part");
    const auto o = equivariant_oracle_check(k.model);
    c.expect(res.function.constant == o.classical, k.name + ": index sum " + std::to_string(res.function.constant) +
                                                      " vs trace formula " + std::to_string(o.classical));
    c.expect(o.classical == k.classical, k.name + ": trace formula " + std::to_string(o.classical) +
                                            " vs degree count " + std::to_string(k.classical));
  }
}

void criterion3(Check& c) {
  VectorFieldModel sine{TorusField{TorusChart(sine_torus(), 0), AnalyticField(2, {"sin(2*pi*x)", "sin(2*pi*y)"})}};
  const auto r = index_class(sine);
  const int chi_t = sine_torus().complex().euler_characteristic();
  c.expect(chi_t == 0, "chi(T^2) = " + std::to_string(chi_t));
  c.expect(r.function == ClassFunction{chi_t, {}}, "sine field class is not chi * 1");
  c.expect(poincare_hopf_check(sine, r).verdict.rfind("consistent", 0) == 0, "sine field not consistent");
  VectorFieldModel sphere{constant_direction_field(tetrahedron_boundary(), tetrahedron_positions(), {1, 2, 3})};
  const auto s = index_class(sphere);
  const int chi_s = tetrahedron_boundary().euler_characteristic();
  c.expect(chi_s == 2, "chi(S^2) = " + std::to_string(chi_s));
  c.expect(s.zeros.size() == 2, "sphere field has " + std::to_string(s.zeros.size()) + " zeros");
  c.expect(s.function == ClassFunction{chi_s, {}}, "sphere total " + std::to_string(s.function.constant));
}

void criterion4(Check& c) {
  const MarkedGroup z2 = MarkedGroup::free_abelian(2), f2 = MarkedGroup::free_group(2);
  const FolnerScheme scheme(z2, 1);
  Rational prev = 2;
  for (int t = 2; t <= 8; ++t) {
    const Rational ratio(static_cast<long long>(scheme.boundary_size(t)), static_cast<long long>(scheme.set_size(t)));
    c.expect(ratio < prev, "Z^2 ratio does not decrease at t=" + std::to_string(t));
    // The box [-t, t]^2 has (2t + 1)^2 elements and 8t of them on its rim.
    c.expect(ratio == Rational(8 * t, (2 * t + 1) * (2 * t + 1)), "Z^2 ratio at t=" + std::to_string(t));
    prev = ratio;
  }
  c.expect(prev < Rational(1, 3), "Z^2 ratio(8) = " + to_string(prev));
  for (const auto& row : isoperimetric_probe(f2, {1, 2, 3, 4, 5, 6})) {
    // |S_r| = 4 * 3^(r-1), |B_r| = 2 * 3^r - 1.
    long long p = 1;
    for (int i = 1; i < row.radius; ++i) p *= 3;
    c.expect(row.ball == static_cast<std::size_t>(6 * p - 1) && row.boundary == static_cast<std::size_t>(4 * p),
             "F2 ball counts at r=" + std::to_string(row.radius));
    c.expect(row.ratio >= Rational(1, 2), "F2 ratio below 1/2 at r=" + std::to_string(row.radius));
  }
  const ClassFunction one{1, {}};
  for (int rad = 3; rad <= 6; ++rad) {
    const FlowResult fr = flow_certificate(f2, one, rad, 2);
    c.expect(fr.feasible, "F2 flow infeasible at R=" + std::to_string(rad));
    c.expect(fr.chain.sup_norm() <= 2, "F2 flow exceeds capacity at R=" + std::to_string(rad));
    std::map<Element, long long> db;
    for (const auto& [key, v] : fr.chain.edges) {
      db[f2.multiply(key.first, f2.generator(key.second))] += v;
      db[key.first] -= v;
    }
    c.expect(bounds_on(f2, db, one, f2.ball(rad - 1)), "F2 flow boundary differs from 1 at R=" + std::to_string(rad));
  }
  const long long c4 = minimal_capacity(z2, one, 4), c8 = minimal_capacity(z2, one, 8);
  c.expect(c8 > c4, "Z^2 minimal capacity " + std::to_string(c8) + " at R=8 vs " + std::to_string(c4) + " at R=4");
}

void criterion5(Check& c) {
  std::mt19937_64 rng(5);
  for (const auto& g : {MarkedGroup::free_abelian(2), MarkedGroup::free_group(2)}) {
    int ok = 0, relation = 0;
    for (int i = 0; i < 100; ++i) {
      const ClassFunction f = random_function(rng, g, false);
      const auto cert = decide_class(g, f);
      if (payload_bounds(g, f, cert)) ++ok;
      const ClassFunction h = random_function(rng, g, true);
      const auto ball = g.ball(2);
      const Element s = ball[rng() % ball.size()];
      ClassFunction d = h;
      d.constant = 0;  // the constant parts of h and s.h cancel
      for (const auto& [x, v] : h.finite) d.add(g.multiply(s, x), -v);
      const auto dc = decide_class(g, d);
      if (dc.verdict.rfind("zero", 0) == 0 && payload_bounds(g, d, dc)) ++relation;
    }
    const std::string name = g.is_amenable() ? "Z^2" : "F2";
    c.expect(ok == 100, name + ": " + std::to_string(ok) + "/100 payloads bound");
    c.expect(relation == 100, name + ": " + std::to_string(relation) + "/100 coinvariant relations vanish");
  }
}

struct Cover {
  std::string name;
  PeriodicComplex pc;
  std::vector<Element> support;
};

PeriodicChain random_chain(std::mt19937_64& rng, const Cover& cv, int degree, bool periodic) {
  const QuotientComplex& q = cv.pc.quotient();
  PeriodicChain ch = PeriodicChain::zero(q, degree);
  if (periodic)
    for (auto& v : ch.equivariant) v = static_cast<long long>(rng() % 7) - 3;
  for (int i = 0; i < 6; ++i)
    ch.add(Cell{cv.support[rng() % cv.support.size()], degree, static_cast<int>(rng() % q.count(degree))},
           static_cast<long long>(rng() % 7) - 3);
  return ch;
}

void criterion6(Check& c) {
  std::mt19937_64 rng(6);
  std::vector<Cover> covers;
  for (auto [name, q] : {std::pair{std::string("torus"), square_torus(3).complex()},
                         std::pair{std::string("genus 2"), genus2_surface()}}) {
    int reach = 0;
    for (const auto& [e, l] : q.labels()) reach = std::max(reach, q.group().length(l));
    Cover cv{name, PeriodicComplex(q), q.group().ball(2)};
    cv.pc.expand(2 + reach);
    covers.push_back(std::move(cv));
  }
  for (const auto& cv : covers) {
    const QuotientComplex& q = cv.pc.quotient();
    int dd = 0, cc = 0, adj = 0, leib = 0;
    for (int i = 0; i < 100; ++i) {
      const auto ch = random_chain(rng, cv, 2, true);
      dd += boundary(cv.pc, boundary(cv.pc, ch)) == PeriodicChain::zero(q, 0);
      const auto u = random_chain(rng, cv, 0, true);
      cc += coboundary(cv.pc, coboundary(cv.pc, u)) == PeriodicChain::zero(q, 2);
      // <du, c> and <u, dc> against the face sum written out by hand.
      const int p = i % 2;
      const auto up = random_chain(rng, cv, p, true);
      const auto cp = random_chain(rng, cv, p + 1, false);
      long long rhs = 0;
      for (const auto& [cell, a] : cp.exceptional)
        for (int k = 0; k <= p + 1; ++k) rhs += (k % 2 ? -a : a) * up.value(cv.pc.face(cell, k));
      adj += pairing(coboundary(cv.pc, up), cp) == rhs && pairing(up, boundary(cv.pc, cp)) == rhs;
      const int pl = i % 2, k = 2;
      const auto ul = random_chain(rng, cv, pl, true);
      const auto cl = random_chain(rng, cv, k, true);
      const auto lhs = boundary(cv.pc, cap(cv.pc, ul, cl));
      const auto r = cap(cv.pc, signed_coboundary(cv.pc, ul), cl) + (pl % 2 ? -1 : 1) * cap(cv.pc, ul, boundary(cv.pc, cl));
      leib += lhs == r;
    }
    c.expect(dd == 100, cv.name + ": boundary squared " + std::to_string(dd) + "/100");
    c.expect(cc == 100, cv.name + ": coboundary squared " + std::to_string(cc) + "/100");
    c.expect(adj == 100, cv.name + ": adjointness " + std::to_string(adj) + "/100");
    c.expect(leib == 100, cv.name + ": Leibniz " + std::to_string(leib) + "/100");
  }
  for (const auto& [name, q] : std::vector<std::pair<std::string, QuotientComplex>>{
           {"tetrahedron", tetrahedron_boundary()},     {"octahedron", octahedron().complex},
           {"square torus", square_torus(3).complex()}, {"seven-vertex torus", seven_vertex_torus().complex()},
           {"cyclic torus", cyclic_torus().complex()},  {"genus 2", genus2_surface()}}) {
    PeriodicComplex pc(q);
    pc.expand(2);
    c.expect(boundary(pc, fundamental_cycle(pc)) == PeriodicChain::zero(q, q.dimension() - 1),
             name + ": boundary of the fundamental cycle");
  }
  const QuotientComplex k = klein_bottle();
  c.expect(!k.coherent_orientation(), "Klein bottle has a coherent orientation");
  bool rejected = false;
  try {
    PeriodicComplex pc(k);
    fundamental_cycle(pc);
  } catch (const ValidationError&) {
    rejected = true;
  }
  c.expect(rejected, "Klein bottle fundamental cycle accepted");
}

void criterion7(Check& c) {
  std::vector<std::pair<std::string, SelfMapModel>> maps{
      {"perturbed rotation", perturbed_rotation()},
      {"torus translation", SelfMapModel{torus_translation(square_torus(3), 0, {Rational(1, 3), Rational(0)})}},
      {"sine displacement", sine_map(0)}};
  for (const auto& [name, m] : maps) {
    const auto a = lefschetz_class(m).function, b = lefschetz_class(refine(m)).function;
    c.expect(a == b, name + ": class changes under subdivision");
  }
  const auto base = lefschetz_class(sine_map(0)).function;
  c.expect(lefschetz_class(scale_displacement(sine_map(0), Rational(3, 2))).function == base,
           "sine displacement: class changes under scaling by 3/2");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion8(Check& c) {
  std::vector<std::string> reports;
  const auto dir = std::filesystem::temp_directory_path() / "ulef_acceptance_determinism";
  std::filesystem::remove_all(dir);
  for (int i = 0; i < 10; ++i) {
    if (cli_path.empty()) {
      RunConfig cfg;
      cfg.seed = 7;
      reports.push_back(dump(cmd_selftest(cfg).report));
      continue;
    }
    const auto out = dir / std::to_string(i);
    const std::string cmd = "\"" + cli_path + "\" selftest --seed 7 --out \"" + out.string() + "\"";
    const int rc = std::system(cmd.c_str());
    c.expect(rc == 0, "selftest run " + std::to_string(i) + " exited with " + std::to_string(rc));
    reports.push_back(slurp(out / "report.json"));
  }
  for (std::size_t i = 1; i < reports.size(); ++i)
    c.expect(reports[i] == reports[0], "report " + std::to_string(i) + " differs from report 0");
  c.expect(!reports[0].empty() && json::parse(reports[0]).at("all_passed").get<bool>(), "selftest did not pass");
  std::filesystem::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  struct Criterion {
    int id;
    std::string name;
    double limit;  // seconds
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> all{
      {1, "index data over Z gives 2*1, nonzero by mean with limit 2", 1, criterion1},
      {2, "index sums match the classical trace formula", 30, criterion2},
      {3, "index class equals chi * 1 on the torus and the sphere", 10, criterion3},
      {4, "amenability dichotomy on Z^2 and F2", 60, criterion4},
      {5, "vanishing certificates bound their functions", 60, criterion5},
      {6, "chain-algebra identities and fundamental cycles", 60, criterion6},
      {7, "Lefschetz class stable under subdivision and scaling", 60, criterion7},
      {8, "selftest reports are byte-identical", 120, criterion8},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit) c.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(cr.limit));
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (c.failures.empty() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " (" << secs << " s)";
    std::cout << line.str() << "\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
    failed += !c.failures.empty();
  }
  std::cout.flush();
  return failed == 0 ? 0 : 1;
}
