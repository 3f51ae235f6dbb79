#include <algorithm>
#include <numeric>

#include "ulef/commands.hpp"
#include "ulef/error.hpp"
#include "ulef/io.hpp"
#include "ulef/selftest.hpp"
#include "ulef/svg.hpp"
#include "ulef/ufh.hpp"

namespace ulef {

namespace {

DecideOptions decide_options(const RunConfig& cfg) {
  DecideOptions o;
  if (cfg.radius) {
    if (*cfg.radius < 1) throw InputError("--radius must be positive");
    o.radii.clear();
    for (int r = std::min(3, *cfg.radius); r <= *cfg.radius; ++r) o.radii.push_back(r);
    o.boundary_radius = std::max(o.boundary_radius, *cfg.radius);
  }
  if (cfg.capacity) o.capacity = *cfg.capacity;
  return o;
}

json certificate_or_fail(const MarkedGroup& g, const ClassCertificate& cert) {
  if (!cert.verified) throw InternalError("certificate failed independent verification: " + cert.verifier_detail);
  return certificate_to_json(g, cert);
}

// What the decided class says about fixed points (or zeros).
std::vector<std::string> conclusions(const MarkedGroup& g, const ClassCertificate& cert, const std::string& what) {
  std::vector<std::string> out;
  const std::string& v = cert.verdict;
  if (v == "nonzero-by-mean") {
    out.push_back("the class is nonzero in the coinvariants, detected by an invariant mean with limit " +
                  cert.payload.at("limit").get<std::string>());
    if (g.is_finite())
      out.push_back("the cover is compact, so this is the classical count: no homotopy removes the " + what);
    else
      out.push_back("no bounded homotopy through tame maps removes the " + what +
                    "; the nonzero average persists over every Folner set, so such maps have infinitely many " +
                    what);
  } else if (v == "zero-by-truncated-flow") {
    out.push_back("the deck group is nonamenable, so every class of the form c*1 + finite vanishes");
    out.push_back("the flow runs are finite evidence for a bounded primitive; the class gives no obstruction");
  } else if (v == "zero-by-boundary") {
    out.push_back("the class vanishes: a bounded 1-chain on the Cayley graph has it as boundary");
    out.push_back("the class gives no obstruction to removing the " + what + " by a bounded homotopy");
  } else {
    out.push_back("undecided within the given radii and capacity");
  }
  if (!g.is_amenable() && v != "zero-by-truncated-flow" && v != "zero-by-boundary")
    out.push_back("over a nonamenable deck group the class is expected to vanish");
  return out;
}

std::string coset_plot(const MarkedGroup& g, const ClassFunction& f, const std::string& title) {
  const auto ball = g.ball(g.is_finite() ? static_cast<int>(g.order()) : 3);
  std::vector<std::string> labels;
  std::vector<double> values;
  for (const auto& x : ball) {
    labels.push_back(g.format(x));
    values.push_back(static_cast<double>(f.value(x)));
  }
  return bar_chart(title, labels, values, "sum of indices");
}

std::string folner_plot(const ClassCertificate& cert) {
  Series s{"average over F_t", {}, {}};
  for (const auto& row : cert.payload.at("averages")) {
    s.x.push_back(row.at("t").get<double>());
    s.y.push_back(parse_rational(row.at("average").get<std::string>()).convert_to<double>());
  }
  return line_chart("Folner averages", {s}, "t", "average");
}

void class_plots(CommandOutput& out, const MarkedGroup& g, const ClassFunction& f, const ClassCertificate& cert,
                 const std::string& title) {
  out.plots["coset_sums.svg"] = coset_plot(g, f, title);
  if (cert.verdict == "nonzero-by-mean" && cert.payload.contains("averages") && !g.is_finite())
    out.plots["folner_averages.svg"] = folner_plot(cert);
}

json records(const MarkedGroup& g, const std::vector<FixedPointRecord>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(fixed_point_to_json(g, r));
  return out;
}

}  // namespace

CommandOutput cmd_validate(const json& doc, const RunConfig&) {
  const json spec = doc.is_object() && doc.contains("complex") ? doc.at("complex") : doc;
  const QuotientComplex q = resolve_quotient(spec);
  const ValidationReport rep = q.validate();
  CommandOutput out;
  out.report = {{"command", "validate"},
                {"valid", rep.valid()},
                {"issues", rep.to_json()},
                {"dimension", q.dimension()},
                {"group", q.group().to_json()},
                {"counts", json::array()}};
  for (int k = 0; k <= q.dimension(); ++k) out.report["counts"].push_back(q.count(k));
  if (rep.valid()) {
    out.report["euler_characteristic"] = q.euler_characteristic();
    out.report["orientable"] = static_cast<bool>(q.coherent_orientation());
  }
  out.exit_code = rep.valid() ? 0 : 1;
  return out;
}

CommandOutput cmd_map_analyze(const json& doc, const RunConfig& cfg) {
  const MapDocument md = parse_map_document(doc, cfg.subdivide, cfg.grid);
  CommandOutput out;
  json& r = out.report;
  r["command"] = "map-analyze";
  r["model"] = md.kind;
  const DecideOptions opts = decide_options(cfg);
  if (md.index_data) {
    const IndexData& d = *md.index_data;
    const ClassCertificate cert = decide_class(d.group, d.function, opts);
    r["group"] = d.group.to_json();
    r["note"] = d.note;
    r["lefschetz_class"] = class_function_to_json(d.group, d.function);
    r["certificate"] = certificate_or_fail(d.group, cert);
    r["conclusions"] = conclusions(d.group, cert, "fixed points");
    class_plots(out, d.group, d.function, cert, "Lefschetz class per coset");
    return out;
  }
  const SelfMapModel& m = *md.model;
  const MarkedGroup& g = m.group();
  const LefschetzResult lr = lefschetz_class(m);
  const ClassCertificate cert = decide_class(g, lr.function, opts);
  r["group"] = g.to_json();
  r["fixed_points"] = records(g, lr.points);
  r["tameness"] = tameness_to_json(lr.tameness);
  r["lefschetz_class"] = class_function_to_json(g, lr.function);
  r["certificate"] = certificate_or_fail(g, cert);
  r["conclusions"] = conclusions(g, cert, "fixed points");
  if (m.equivariant()) {
    try {
      const OracleComparison o = equivariant_oracle_check(m);
      r["oracle"] = {{"index_sum", o.index_sum}, {"classical", o.classical}, {"equal", o.equal}, {"method", o.method}};
      if (!o.equal) throw InternalError("index sum differs from the classical Lefschetz number");
    } catch (const UnsupportedError& e) {
      r["oracle"] = {{"skipped", e.what()}};
    }
  }
  r["diagnostics"] = lr.diagnostics;
  class_plots(out, g, lr.function, cert, "Lefschetz class per coset");
  return out;
}

CommandOutput cmd_field_analyze(const json& doc, const RunConfig& cfg) {
  const FieldDocument fd = parse_field_document(doc, cfg.subdivide, cfg.grid);
  CommandOutput out;
  json& r = out.report;
  r["command"] = "field-analyze";
  r["model"] = fd.kind;
  const DecideOptions opts = decide_options(cfg);
  PoincareHopfReport ph;
  const MarkedGroup* g = nullptr;
  if (fd.index_data) {
    g = &fd.index_data->group;
    r["note"] = fd.index_data->note;
    ph = poincare_hopf_check(*g, fd.index_data->function, *fd.euler_characteristic, opts);
  } else {
    const VectorFieldModel& v = *fd.model;
    g = &v.group();
    const IndexClassResult ic = index_class(v);
    r["zeros"] = records(*g, ic.zeros);
    r["tameness"] = tameness_to_json(ic.tameness);
    r["diagnostics"] = ic.diagnostics;
    ph = poincare_hopf_check(v, ic, opts);
  }
  r["group"] = g->to_json();
  r["index_class"] = class_function_to_json(*g, ph.index);
  r["euler_characteristic"] = ph.euler_characteristic;
  r["difference"] = class_function_to_json(*g, ph.difference);
  r["certificate"] = certificate_or_fail(*g, ph.certificate);
  r["verdict"] = ph.verdict;
  const bool flagged = ph.verdict.rfind("counterexample", 0) == 0;
  r["input_model_error"] = flagged;
  out.exit_code = flagged ? 1 : 0;
  class_plots(out, *g, ph.index, ph.certificate, "index class per coset");
  return out;
}

CommandOutput cmd_amenability(const json& doc, const RunConfig& cfg) {
  const MarkedGroup g = MarkedGroup::from_json(doc.is_object() && doc.contains("group") ? doc.at("group") : doc);
  const int rmax = cfg.radius.value_or(6);
  if (rmax < 1) throw InputError("--radius must be positive");
  CommandOutput out;
  json& r = out.report;
  r["command"] = "amenability";
  r["group"] = g.to_json();
  r["amenable"] = g.is_amenable();

  std::vector<int> radii(static_cast<std::size_t>(rmax));
  std::iota(radii.begin(), radii.end(), 1);
  json iso = json::array();
  Series iso_series{"boundary / ball", {}, {}};
  for (const auto& row : isoperimetric_probe(g, radii)) {
    iso.push_back({{"radius", row.radius}, {"ball", row.ball}, {"boundary", row.boundary}, {"ratio", to_string(row.ratio)}});
    iso_series.x.push_back(row.radius);
    iso_series.y.push_back(row.ratio.convert_to<double>());
  }
  r["isoperimetric"] = iso;
  out.plots["isoperimetric.svg"] = line_chart("isoperimetric ratio of balls", {iso_series}, "r", "ratio");

  if (g.is_amenable()) {
    const FolnerScheme scheme(g, 1);
    json rows = json::array();
    Series s{"|dF_t| / |F_t|", {}, {}};
    const int steps = g.is_finite() ? 1 : 8;
    for (int t = 1; t <= steps; ++t) {
      const std::size_t size = scheme.set_size(t), b = scheme.boundary_size(t);
      const Rational ratio(static_cast<long long>(b), static_cast<long long>(size));
      rows.push_back({{"t", t}, {"size", size}, {"boundary", b}, {"ratio", to_string(ratio)}});
      s.x.push_back(t);
      s.y.push_back(ratio.convert_to<double>());
    }
    r["folner"] = rows;
    out.plots["folner.svg"] = line_chart("Folner ratios", {s}, "t", "ratio");
  }
  if (!g.is_finite()) {
    // Flow table for the constant function 1 at one uniform capacity.
    ClassFunction one{1, {}};
    const long long cap = cfg.capacity.value_or(2);
    json rows = json::array();
    for (int rad = std::min(3, rmax); rad <= rmax; ++rad) {
      const FlowResult fr = flow_certificate(g, one, rad, cap);
      rows.push_back({{"radius", rad},
                      {"capacity", cap},
                      {"required", fr.required},
                      {"achieved", fr.achieved},
                      {"feasible", fr.feasible},
                      {"minimal_capacity", minimal_capacity(g, one, rad)}});
    }
    r["flow_for_constant_one"] = rows;
  }
  return out;
}

CommandOutput cmd_decide_class(const json& doc, const RunConfig& cfg) {
  if (!doc.is_object() || !doc.contains("group")) throw InputError("decide-class needs {\"group\": ..., \"constant\": ...}");
  const MarkedGroup g = MarkedGroup::from_json(doc.at("group"));
  const ClassFunction f = class_function_from_json(g, doc.contains("function") ? doc.at("function") : doc);
  const ClassCertificate cert = decide_class(g, f, decide_options(cfg));
  CommandOutput out;
  out.report = {{"command", "decide-class"}, {"certificate", certificate_or_fail(g, cert)}};
  class_plots(out, g, f, cert, "class function per element");
  return out;
}

CommandOutput cmd_selftest(const RunConfig& cfg) {
  SelftestOptions o;
  o.seed = cfg.seed;
  o.corrupt_orientation = cfg.corrupt_orientation;
  const auto results = run_selftest(o);
  CommandOutput out;
  out.report = selftest_to_json(o, results);
  out.report["command"] = "selftest";
  out.exit_code = out.report.at("all_passed").get<bool>() ? 0 : 1;
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    CommandOutput res;
    if (cfg.command == "selftest") {
      res = cmd_selftest(cfg);
    } else {
      if (cfg.inputs.size() != 1) throw InputError(cfg.command + " takes exactly one input document");
      const json doc = read_json(cfg.inputs.front());
      if (cfg.command == "validate") res = cmd_validate(doc, cfg);
      else if (cfg.command == "map-analyze") res = cmd_map_analyze(doc, cfg);
      else if (cfg.command == "field-analyze") res = cmd_field_analyze(doc, cfg);
      else if (cfg.command == "amenability") res = cmd_amenability(doc, cfg);
      else if (cfg.command == "decide-class") res = cmd_decide_class(doc, cfg);
      else throw InputError("unknown command '" + cfg.command + "'");
    }
    if (cfg.plots && !cfg.out) throw InputError("--plots needs --out");
    if (cfg.out) {
      write_text(*cfg.out / "report.json", dump(res.report));
      if (cfg.plots)
        for (const auto& [name, svg] : res.plots) write_text(*cfg.out / name, svg);
    } else {
      out << dump(res.report);
    }
    return res.exit_code;
  } catch (const Error& e) {
    static const char* const kinds[] = {"input", "validation", "unsupported", "resource", "internal"};
    err << dump({{"error", {{"kind", kinds[static_cast<int>(e.kind())]}, {"message", e.what()}}}});
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << dump({{"error", {{"kind", "input"}, {"message", std::string("malformed document: ") + e.what()}}}});
    return 1;
  }
}

}  // namespace ulef
