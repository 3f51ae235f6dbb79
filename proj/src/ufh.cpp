#include "ulef/ufh.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <limits>
#include <unordered_map>

#include "maxflow.hpp"
#include "ulef/error.hpp"

namespace ulef {

namespace {

std::string rational_text(const Rational& r) { return to_string(r); }

json chain_json(const MarkedGroup& g, const GraphChain& b) {
  std::vector<std::pair<Element, std::pair<int, long long>>> rows;
  for (const auto& [key, v] : b.edges) rows.push_back({key.first, {key.second, v}});
  std::stable_sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return g.shortlex_less(x.first, y.first);
    return x.second.first < y.second.first;
  });
  json out = json::array();
  for (const auto& [x, e] : rows) out.push_back({g.format(x), g.generator_names()[e.first], e.second});
  return out;
}

GraphChain chain_from(const MarkedGroup& g, const json& rows) {
  GraphChain b;
  const auto& names = g.generator_names();
  for (const auto& r : rows) {
    const std::string name = r.at(1).get<std::string>();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("unknown generator " + name + " in chain");
    const long long v = r.at(2).get<long long>();
    if (v != 0) b.edges[{g.parse(r.at(0).get<std::string>()), static_cast<int>(it - names.begin())}] += v;
  }
  return b;
}

long long function_value(const ClassFunction& f, const Element& x) { return f.value(x); }

// Outward geodesic step: least letter that increases the length.
std::optional<std::pair<Letter, Element>> outward_step(const MarkedGroup& g, const Element& y, int radius) {
  const int len = g.length(y);
  for (Letter l = 0; l < 2 * g.num_generators(); ++l) {
    auto z = g.neighbor_in_ball(y, l, radius);
    if (z && g.length(*z) == len + 1) return std::make_pair(l, *z);
  }
  return std::nullopt;
}

// Checks db == f on `region` (or on every vertex touched when region is
// empty and `global`). Returns an empty string on success.
std::string compare_boundary(const MarkedGroup& g, const GraphChain& b, const ClassFunction& f,
                             const std::vector<Element>* region) {
  const auto db = b.boundary(g);
  auto at = [&](const Element& x) {
    auto it = db.find(x);
    return it == db.end() ? 0LL : it->second;
  };
  if (region) {
    for (const auto& x : *region)
      if (at(x) != function_value(f, x))
        return "boundary mismatch at " + g.format(x) + ": " + std::to_string(at(x)) + " vs " +
               std::to_string(function_value(f, x));
    return {};
  }
  if (f.constant != 0) return "a finite chain cannot bound a function with nonzero constant part";
  for (const auto& [x, v] : db)
    if (v != function_value(f, x)) return "boundary mismatch at " + g.format(x);
  for (const auto& [x, v] : f.finite)
    if (at(x) != v) return "boundary mismatch at " + g.format(x);
  return {};
}

}  // namespace

void GraphChain::add(const Element& x, Letter l, const Element& y, long long v) {
  if (v == 0) return;
  const bool forward = l % 2 == 0;
  auto key = forward ? std::make_pair(x, l / 2) : std::make_pair(y, l / 2);
  auto& slot = edges[key];
  slot += forward ? v : -v;
  if (slot == 0) edges.erase(key);
}

long long GraphChain::sup_norm() const {
  long long m = 0;
  for (const auto& [e, v] : edges) m = std::max(m, std::llabs(v));
  return m;
}

std::map<Element, long long> GraphChain::boundary(const MarkedGroup& g) const {
  std::map<Element, long long> out;
  for (const auto& [e, v] : edges) {
    out[e.first] -= v;
    out[g.multiply(e.first, g.generator(e.second))] += v;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

json class_function_to_json(const MarkedGroup& g, const ClassFunction& f) {
  std::vector<std::pair<Element, long long>> rows(f.finite.begin(), f.finite.end());
  std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return g.shortlex_less(a.first, b.first); });
  json finite = json::array();
  for (const auto& [x, v] : rows) finite.push_back({g.format(x), v});
  return {{"constant", f.constant}, {"finite", finite}};
}

ClassFunction class_function_from_json(const MarkedGroup& g, const json& doc) {
  try {
    ClassFunction f;
    f.constant = doc.value("constant", 0LL);
    if (doc.contains("finite"))
      for (const auto& e : doc["finite"]) f.add(g.parse(e.at(0).get<std::string>()), e.at(1).get<long long>());
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed function document: ") + e.what());
  }
}

ClassFunction translate(const MarkedGroup& g, const Element& h, const ClassFunction& f) {
  ClassFunction out;
  out.constant = f.constant;
  for (const auto& [x, v] : f.finite) out.add(g.multiply(h, x), v);
  return out;
}

long long total_mass(const ClassFunction& f) {
  long long m = 0;
  for (const auto& [x, v] : f.finite) m += std::llabs(v);
  return m;
}

FolnerResult folner_search(const MarkedGroup& g, const Rational& delta, int r, int max_t) {
  if (delta <= 0) throw InputError("Følner threshold must be positive");
  FolnerScheme scheme(g, r);
  for (int t = 0; t <= max_t; ++t) {
    FolnerResult res{t, scheme.set_size(t), scheme.boundary_size(t), Rational(0)};
    res.ratio = Rational(static_cast<long long>(res.boundary)) / static_cast<long long>(res.size);
    if (res.ratio < delta) return res;
    if (g.is_finite()) break;
  }
  throw ResourceError("no Følner set below the threshold up to index " + std::to_string(max_t));
}

std::vector<ProbeRow> isoperimetric_probe(const MarkedGroup& g, const std::vector<int>& radii) {
  std::vector<ProbeRow> rows;
  for (int r : radii) {
    if (r < 0) throw InputError("negative probe radius");
    ProbeRow row;
    row.radius = r;
    const auto ball = g.ball(r);
    row.ball = ball.size();
    for (const auto& x : ball) {
      if (g.length(x) < r) continue;
      for (Letter l = 0; l < 2 * g.num_generators(); ++l)
        if (!g.neighbor_in_ball(x, l, r)) {
          ++row.boundary;
          break;
        }
    }
    row.ratio = Rational(static_cast<long long>(row.boundary)) / static_cast<long long>(row.ball);
    rows.push_back(row);
  }
  return rows;
}

MassBound bound_finite_mass(const MarkedGroup& g, const ClassFunction& c, int radius) {
  if (c.constant != 0) throw InputError("bound_finite_mass needs a finitely supported function");
  MassBound out;
  out.radius = radius;
  out.bound = total_mass(c);
  long long net = 0;
  for (const auto& [x, v] : c.finite) net += v;
  if (c.finite.empty()) {
    out.global = true;
    return out;
  }
  if (net == 0) {
    // Geodesics from every supported vertex to a common hub.
    const Element hub = c.finite.begin()->first;
    for (const auto& [x, m] : c.finite) {
      Element y = x;
      for (Letter l : g.to_word(g.multiply(g.inverse(x), hub))) {
        Element z = g.multiply(y, g.letter(l));
        out.chain.add(y, l, z, -m);
        y = std::move(z);
      }
    }
    out.global = true;
    return out;
  }
  if (g.is_finite()) throw InputError("on a finite group a function with nonzero total mass is not a boundary");
  for (const auto& [x, m] : c.finite) {
    if (g.length(x) >= radius)
      throw InputError("support element " + g.format(x) + " lies outside ball(" + std::to_string(radius - 1) +
                       "); raise the radius");
    Element y = x;
    while (g.length(y) < radius) {
      auto step = outward_step(g, y, radius);
      if (!step) throw InternalError("no outward geodesic step from " + g.format(y));
      out.chain.add(y, step->first, step->second, -m);
      y = step->second;
    }
  }
  return out;
}

FlowResult flow_certificate(const MarkedGroup& g, const ClassFunction& c, int radius, long long capacity) {
  if (radius < 1) throw InputError("flow radius must be at least 1");
  if (capacity < 0) throw InputError("flow capacity must be nonnegative");
  const auto ball = g.ball(radius);
  const int n = static_cast<int>(ball.size());
  std::unordered_map<Element, int, ElementHash> index;
  for (int i = 0; i < n; ++i) index.emplace(ball[i], i);
  const int source = n, sink = n + 1, infinity = n + 2;
  constexpr long long kUnbounded = std::numeric_limits<long long>::max() / 4;
  MaxFlow net(n + 3);

  struct Edge {
    int tail, gen, forward, backward;
  };
  std::vector<Edge> edges;
  long long positive = 0, negative = 0;
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < g.num_generators(); ++s) {
      auto y = g.neighbor_in_ball(ball[i], 2 * s, radius);
      if (!y) continue;
      const int j = index.at(*y);
      edges.push_back({i, s, net.add_arc(i, j, capacity), net.add_arc(j, i, capacity)});
    }
    if (g.length(ball[i]) == radius) {
      net.add_arc(i, infinity, kUnbounded);
      net.add_arc(infinity, i, kUnbounded);
      continue;
    }
    const long long s = c.value(ball[i]);
    if (s > 0) {
      net.add_arc(i, sink, s);
      positive += s;
    } else if (s < 0) {
      net.add_arc(source, i, -s);
      negative -= s;
    }
  }
  if (positive > negative) net.add_arc(source, infinity, positive - negative);
  if (negative > positive) net.add_arc(infinity, sink, negative - positive);

  FlowResult res;
  res.radius = radius;
  res.capacity = capacity;
  res.required = std::max(positive, negative);
  res.achieved = net.run(source, sink);
  res.feasible = res.achieved == res.required;
  if (res.feasible)
    for (const auto& e : edges) {
      const long long v = net.flow(e.forward) - net.flow(e.backward);
      if (v != 0) res.chain.edges[{ball[e.tail], e.gen}] += v;
    }
  return res;
}

long long minimal_capacity(const MarkedGroup& g, const ClassFunction& c, int radius) {
  long long lo = 0, hi = 1;
  while (!flow_certificate(g, c, radius, hi).feasible) {
    lo = hi;
    hi *= 2;
    if (hi > (1LL << 40)) throw ResourceError("no feasible capacity found");
  }
  if (flow_certificate(g, c, radius, 0).feasible) return 0;
  while (hi - lo > 1) {
    const long long mid = (lo + hi) / 2;
    (flow_certificate(g, c, radius, mid).feasible ? hi : lo) = mid;
  }
  return hi;
}

ClassCertificate decide_class(const MarkedGroup& g, const ClassFunction& f, const DecideOptions& options) {
  ClassCertificate cert;
  cert.function = f;
  json& p = cert.payload;
  if (g.is_finite()) {
    const auto all = g.ball(static_cast<int>(g.order()));
    long long sum = 0;
    ClassFunction masses;
    for (const auto& x : all) {
      sum += f.value(x);
      masses.add(x, f.value(x));
    }
    if (sum != 0) {
      cert.verdict = "nonzero-by-mean";
      const Rational mean = Rational(sum) / static_cast<long long>(all.size());
      p = {{"limit", rational_text(mean)},
           {"averages", json::array({{{"t", 0}, {"size", all.size()}, {"sum", sum}, {"average", rational_text(mean)}}})},
           {"note", "finite group: the class is the total sum"}};
    } else {
      cert.verdict = "zero-by-boundary";
      auto mb = bound_finite_mass(g, masses, 0);
      p = {{"radius", 0}, {"global", true}, {"bound", mb.bound}, {"chain", chain_json(g, mb.chain)}};
    }
  } else if (f == ClassFunction{}) {
    cert.verdict = "zero-by-boundary";
    p = {{"radius", 0}, {"global", true}, {"bound", 0}, {"chain", chain_json(g, GraphChain{})}};
  } else if (g.is_amenable()) {
    if (f.constant != 0) {
      cert.verdict = "nonzero-by-mean";
      FolnerScheme scheme(g, 1);
      json averages = json::array();
      for (int t = 1; t <= options.folner_steps; ++t) {
        long long sum = 0;
        const auto set = scheme.set(t);
        for (const auto& x : set) sum += f.value(x);
        const Rational avg = Rational(sum) / static_cast<long long>(set.size());
        averages.push_back({{"t", t},
                            {"size", set.size()},
                            {"sum", sum},
                            {"average", rational_text(avg)},
                            {"distance_bound", rational_text(Rational(total_mass(f)) / static_cast<long long>(set.size()))}});
      }
      p = {{"limit", std::to_string(f.constant)}, {"averages", averages}};
    } else {
      cert.verdict = "zero-by-boundary";
      int radius = options.boundary_radius;
      for (const auto& [x, v] : f.finite) radius = std::max(radius, g.length(x) + 1);
      auto mb = bound_finite_mass(g, f, radius);
      p = {{"radius", mb.radius}, {"global", mb.global}, {"bound", mb.bound}, {"chain", chain_json(g, mb.chain)}};
    }
  } else {
    long long capacity = options.capacity;
    if (capacity <= 0 && !options.radii.empty())
      capacity = minimal_capacity(g, f, *std::max_element(options.radii.begin(), options.radii.end()));
    std::vector<std::future<FlowResult>> jobs;
    for (int r : options.radii)
      jobs.push_back(std::async(std::launch::async, [&, r] { return flow_certificate(g, f, r, capacity); }));
    json runs = json::array();
    bool all = !options.radii.empty();
    for (auto& j : jobs) {
      FlowResult fr = j.get();
      all = all && fr.feasible;
      json row = {{"radius", fr.radius},       {"capacity", fr.capacity}, {"required", fr.required},
                  {"achieved", fr.achieved},   {"feasible", fr.feasible}, {"max_coefficient", fr.chain.sup_norm()}};
      if (fr.feasible) row["chain"] = chain_json(g, fr.chain);
      runs.push_back(row);
    }
    p = {{"capacity", capacity},
         {"runs", runs},
         {"note",
          "finite evidence: truncated chains with one capacity bound across the listed radii; consistent with, "
          "not a proof of, a bounded infinite chain"}};
    cert.verdict = all ? "zero-by-truncated-flow" : "inconclusive";
    if (!all) p["diagnostic"] = "flow infeasible at capacity " + std::to_string(capacity) + " for some radius";
  }
  json doc = certificate_to_json(g, cert);
  cert.verified = verify_certificate(doc, &cert.verifier_detail);
  return cert;
}

json certificate_to_json(const MarkedGroup& g, const ClassCertificate& cert) {
  return {{"verdict", cert.verdict},
          {"group", g.to_json()},
          {"function", class_function_to_json(g, cert.function)},
          {"payload", cert.payload},
          {"verifier_result", {{"verified", cert.verified}, {"detail", cert.verifier_detail}}}};
}

bool verify_certificate(const json& doc, std::string* detail) {
  std::string why;
  try {
    const MarkedGroup g = MarkedGroup::from_json(doc.at("group"));
    const ClassFunction f = class_function_from_json(g, doc.at("function"));
    const std::string verdict = doc.at("verdict").get<std::string>();
    const json& p = doc.at("payload");
    if (verdict == "nonzero-by-mean") {
      const Rational limit = parse_rational(p.at("limit").get<std::string>());
      if (limit == 0) why = "claimed limit is zero";
      if (g.is_finite()) {
        long long sum = 0;
        for (const auto& x : g.ball(static_cast<int>(g.order()))) sum += f.value(x);
        if (Rational(sum) / static_cast<long long>(g.order()) != limit) why = "mean over the group differs";
      } else {
        FolnerScheme scheme(g, 1);
        if (limit != f.constant) why = "limit differs from the constant part";
        for (const auto& row : p.at("averages")) {
          const int t = row.at("t").get<int>();
          const auto set = scheme.set(t);
          long long sum = 0;
          for (const auto& x : set) sum += f.value(x);
          const Rational avg = Rational(sum) / static_cast<long long>(set.size());
          if (avg != parse_rational(row.at("average").get<std::string>())) why = "average differs at t=" + std::to_string(t);
          Rational gap = avg - limit;
          if (gap < 0) gap = -gap;
          if (gap * static_cast<long long>(set.size()) > total_mass(f)) why = "average too far from limit at t=" + std::to_string(t);
        }
      }
    } else if (verdict == "zero-by-boundary") {
      const GraphChain b = chain_from(g, p.at("chain"));
      const long long bound = p.at("bound").get<long long>();
      if (b.sup_norm() > bound) why = "chain exceeds its stated bound";
      if (g.is_finite()) {
        const auto all = g.ball(static_cast<int>(g.order()));
        if (why.empty()) why = compare_boundary(g, b, f, &all);
      } else {
        if (bound > total_mass(f)) why = "bound exceeds the mass of the function";
        if (p.at("global").get<bool>()) {
          if (why.empty()) why = compare_boundary(g, b, f, nullptr);
        } else {
          const auto interior = g.ball(p.at("radius").get<int>() - 1);
          if (why.empty()) why = compare_boundary(g, b, f, &interior);
        }
      }
    } else if (verdict == "zero-by-truncated-flow") {
      if (g.is_amenable()) why = "flow certificates are only issued for nonamenable groups";
      const long long cap = p.at("capacity").get<long long>();
      for (const auto& run : p.at("runs")) {
        if (!why.empty()) break;
        const GraphChain b = chain_from(g, run.at("chain"));
        if (b.sup_norm() > cap) why = "chain exceeds the uniform capacity";
        const auto interior = g.ball(run.at("radius").get<int>() - 1);
        if (why.empty()) why = compare_boundary(g, b, f, &interior);
      }
    } else if (verdict != "inconclusive") {
      why = "unknown verdict " + verdict;
    }
  } catch (const Error& e) {
    why = e.what();
  } catch (const json::exception& e) {
    why = std::string("malformed certificate: ") + e.what();
  }
  if (detail) *detail = why.empty() ? "ok" : why;
  return why.empty();
}

}  // namespace ulef
