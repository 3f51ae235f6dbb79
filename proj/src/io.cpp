#include <fstream>
#include <sstream>

#include "ulef/error.hpp"
#include "ulef/io.hpp"

namespace ulef {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

namespace {

Rational rational_from_json(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_float()) return parse_rational(v.dump());
  throw InputError("expected a rational, got " + v.dump());
}

std::string fixture_name(const json& spec) {
  if (spec.is_string()) return spec.get<std::string>();
  if (spec.is_object() && spec.contains("fixture")) return spec.at("fixture").get<std::string>();
  return {};
}

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("missing \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed \"") + key + "\": " + e.what());
  }
}

std::optional<Torus> named_torus(const json& spec) {
  const std::string name = fixture_name(spec);
  if (name == "sine-torus") return sine_torus();
  if (name == "seven-vertex-torus") return seven_vertex_torus();
  if (name == "cyclic-torus") return cyclic_torus();
  if (name == "square-torus") {
    const int m = spec.is_object() ? spec.value("m", 3) : 3;
    RationalVector offset{0, 0};
    if (spec.is_object() && spec.contains("offset")) offset = rational_vector_from_json(spec.at("offset"));
    if (m < 3) throw InputError("square tori need m >= 3");
    return square_torus(m, offset);
  }
  return std::nullopt;
}

void common_options(const json& doc, SelfMapModel& m) {
  if (doc.contains("declared_bound")) m.declared_bound = rational_from_json(doc.at("declared_bound"));
  m.grid = doc.value("grid", m.grid);
  m.sample_grid = doc.value("sample_grid", m.sample_grid);
}

int subdivision(const json& doc, std::optional<int> override_t) {
  const int t = override_t ? *override_t : doc.value("subdivide", 0);
  if (t < 0 || t > 3) throw ResourceError("subdivision count must lie in [0, 3]");
  return t;
}

}  // namespace

RationalVector rational_vector_from_json(const json& doc) {
  if (!doc.is_array()) throw InputError("expected an array of rationals, got " + doc.dump());
  RationalVector v;
  for (const auto& x : doc) v.push_back(rational_from_json(x));
  return v;
}

QuotientComplex resolve_quotient(const json& spec) {
  const std::string name = fixture_name(spec);
  if (name.empty()) {
    if (!spec.is_object()) throw InputError("complex must be a fixture name or a complex document");
    return QuotientComplex::from_json(spec);
  }
  if (name == "tetrahedron") return tetrahedron_boundary();
  if (name == "octahedron") return octahedron().complex;
  if (name == "klein-bottle") return klein_bottle();
  if (name == "genus-2") return genus2_surface();
  if (auto t = named_torus(spec)) return t->complex();
  throw InputError("unknown fixture '" + name + "'");
}

Torus resolve_torus(const json& spec) {
  if (auto t = named_torus(spec)) return *t;
  throw InputError("analytic models need a named torus (sine-torus, square-torus, seven-vertex-torus, cyclic-torus)");
}

CoverPoint cover_point_from_json(const MarkedGroup& g, const json& doc) {
  if (!doc.is_array() || doc.empty()) throw InputError("a point is a non-empty list of [deck, vertex, weight]");
  std::vector<std::pair<Cell, Rational>> terms;
  for (const auto& t : doc) {
    if (!t.is_array() || t.size() != 3) throw InputError("point terms are [deck, vertex, weight]");
    terms.push_back({Cell{g.parse(t[0].get<std::string>()), 0, t[1].get<int>()}, rational_from_json(t[2])});
  }
  return normalize(std::move(terms));
}

json cover_point_to_json(const MarkedGroup& g, const CoverPoint& p) {
  json out = json::array();
  for (const auto& [c, w] : p.terms) out.push_back({g.format(c.deck), c.id, to_string(w)});
  return out;
}

MapDocument parse_map_document(const json& doc, std::optional<int> subdivide, std::optional<int> grid) {
  if (!doc.is_object()) throw InputError("a map document is a JSON object");
  MapDocument out;
  out.kind = field<std::string>(doc, "model");
  if (out.kind == "index-data") {
    out.index_data = ingest_index_data(doc);
    return out;
  }
  const int t = subdivision(doc, subdivide);
  SelfMapModel m;
  if (out.kind == "vertex-map") {
    m.map = vertex_map_model(resolve_quotient(doc.at("complex")), t, field<std::vector<int>>(doc, "vertex_map"));
  } else if (out.kind == "vertex-permutation") {
    m.map = induced_vertex_permutation(resolve_quotient(doc.at("complex")), t,
                                       field<std::vector<int>>(doc, "permutation"));
  } else if (out.kind == "pl") {
    QuotientComplex q = resolve_quotient(doc.at("complex"));
    const MarkedGroup& g = q.group();
    std::vector<CoverPoint> image;
    for (const auto& p : field<json>(doc, "image")) image.push_back(cover_point_from_json(g, p));
    std::map<std::pair<Element, int>, CoverPoint> overrides;
    for (const auto& o : doc.value("overrides", json::array()))
      overrides[{g.parse(field<std::string>(o, "deck")), field<int>(o, "vertex")}] =
          cover_point_from_json(g, o.at("image"));
    m.map = make_pl_map(std::move(q), t, std::move(image), std::move(overrides));
  } else if (out.kind == "torus-translation") {
    m.map = torus_translation(resolve_torus(doc.at("torus")), t, rational_vector_from_json(doc.at("shift")));
  } else if (out.kind == "analytic") {
    Torus torus = resolve_torus(doc.at("torus"));
    const int n = torus.dimension();
    m.map = AnalyticSelfMap{TorusChart(std::move(torus), t), AnalyticField::from_json(field<json>(doc, "displacement"), n)};
  } else {
    throw InputError("unknown map model '" + out.kind +
                     "' (vertex-map, vertex-permutation, pl, torus-translation, analytic, index-data)");
  }
  common_options(doc, m);
  if (grid) m.grid = *grid;
  out.model = std::move(m);
  return out;
}

FieldDocument parse_field_document(const json& doc, std::optional<int> subdivide, std::optional<int> grid) {
  if (!doc.is_object()) throw InputError("a field document is a JSON object");
  FieldDocument out;
  out.kind = field<std::string>(doc, "model");
  if (out.kind == "index-data") {
    out.index_data = ingest_index_data(doc);
    if (doc.contains("euler_characteristic")) out.euler_characteristic = field<int>(doc, "euler_characteristic");
    else if (doc.contains("complex")) out.euler_characteristic = resolve_quotient(doc.at("complex")).euler_characteristic();
    else throw InputError("index data for a field needs \"euler_characteristic\" or \"complex\"");
    return out;
  }
  VectorFieldModel v;
  if (out.kind == "analytic") {
    Torus torus = resolve_torus(doc.at("torus"));
    const int n = torus.dimension();
    v.field = TorusField{TorusChart(std::move(torus), subdivision(doc, subdivide)),
                         AnalyticField::from_json(field<json>(doc, "field"), n)};
  } else if (out.kind == "realized") {
    const json spec = doc.value("complex", json("tetrahedron"));
    QuotientComplex q = resolve_quotient(spec);
    std::vector<RationalVector> pos;
    if (doc.contains("positions")) {
      for (const auto& p : doc.at("positions")) pos.push_back(rational_vector_from_json(p));
    } else if (fixture_name(spec) == "tetrahedron") {
      pos = tetrahedron_positions();
    } else {
      throw InputError("realized fields need \"positions\" unless the complex is the tetrahedron");
    }
    if (doc.contains("direction")) {
      v.field = constant_direction_field(std::move(q), std::move(pos), rational_vector_from_json(doc.at("direction")));
    } else {
      std::vector<RationalVector> w;
      for (const auto& x : field<json>(doc, "vectors")) w.push_back(rational_vector_from_json(x));
      v.field = make_realized_field(std::move(q), std::move(pos), std::move(w));
    }
  } else {
    throw InputError("unknown field model '" + out.kind + "' (analytic, realized, index-data)");
  }
  if (doc.contains("declared_bound")) v.declared_bound = rational_from_json(doc.at("declared_bound"));
  v.grid = doc.value("grid", v.grid);
  v.sample_grid = doc.value("sample_grid", v.sample_grid);
  if (grid) v.grid = *grid;
  if (doc.value("negate", false)) v = negate(v);
  out.model = std::move(v);
  return out;
}

}  // namespace ulef
