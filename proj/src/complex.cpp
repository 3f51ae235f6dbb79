#include "ulef/complex.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "ulef/error.hpp"

namespace ulef {

namespace {

std::string simplex_key(const Simplex& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

Simplex parse_key(const std::string& key) {
  Simplex s;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      s.push_back(std::stoi(part, &used));
      if (used != part.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("malformed simplex key '" + key + "'");
    }
  }
  return s;
}

/// Sorts in place and returns the parity sign of the sorting permutation.
int sort_with_parity(Simplex& s) {
  int sign = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
      if (s[j] > s[j + 1]) {
        std::swap(s[j], s[j + 1]);
        sign = -sign;
      }
  return sign;
}

}  // namespace

std::size_t ValidationReport::count(const std::string& category) const {
  return std::count_if(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.category == category; });
}

json ValidationReport::to_json() const {
  json j;
  j["valid"] = valid();
  j["issues"] = json::array();
  for (const auto& i : issues) j["issues"].push_back({{"category", i.category}, {"detail", i.detail}});
  return j;
}

QuotientComplex::QuotientComplex(MarkedGroup group, int dimension, int num_vertices,
                                 std::vector<std::vector<Simplex>> simplices,
                                 std::map<Simplex, int> orientation,
                                 std::map<std::pair<int, int>, Element> labels,
                                 std::vector<std::pair<int, int>> tree)
    : group_(std::move(group)), dimension_(dimension), num_vertices_(num_vertices), tree_(std::move(tree)) {
  if (dimension < 0 || dimension > 4) throw InputError("dimension must be between 0 and 4");
  if (num_vertices <= 0) throw InputError("complex needs at least one vertex");
  if (static_cast<int>(simplices.size()) > dimension + 1) throw InputError("simplices above the stated dimension");
  simplices.resize(dimension + 1);
  cells_.assign(dimension + 1, {});
  // Vertices are implicit.
  std::set<Simplex> vertex_set;
  for (int v = 0; v < num_vertices; ++v) vertex_set.insert({v});
  for (const auto& s : simplices[0]) {
    if (s.size() != 1 || s[0] < 0 || s[0] >= num_vertices)
      structural_issues_.push_back("invalid vertex entry");
  }
  cells_[0].assign(vertex_set.begin(), vertex_set.end());
  std::map<Simplex, int> sorted_orientation;
  for (int k = 1; k <= dimension; ++k) {
    std::set<Simplex> seen;
    for (Simplex s : simplices[k]) {
      Simplex given = s;
      const int parity = sort_with_parity(s);
      if (static_cast<int>(s.size()) != k + 1) {
        structural_issues_.push_back("simplex " + simplex_key(given) + " listed with dimension " + std::to_string(k));
        continue;
      }
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        structural_issues_.push_back("simplex " + simplex_key(given) + " repeats a vertex");
        continue;
      }
      if (s.front() < 0 || s.back() >= num_vertices) {
        structural_issues_.push_back("simplex " + simplex_key(given) + " uses an undeclared vertex");
        continue;
      }
      if (!seen.insert(s).second) {
        structural_issues_.push_back("simplex " + simplex_key(s) + " listed twice");
        continue;
      }
      if (k == dimension) {
        auto it = orientation.find(given);
        if (it != orientation.end()) sorted_orientation[s] = it->second * parity;
      }
    }
    cells_[k].assign(seen.begin(), seen.end());
  }
  build_indices();
  if (!orientation.empty()) {
    orientation_.assign(count(dimension), 0);
    for (std::size_t t = 0; t < count(dimension); ++t) {
      auto it = sorted_orientation.find(cells_[dimension][t]);
      orientation_[t] = it == sorted_orientation.end() ? 0 : it->second;
    }
  }
  for (auto& [edge, g] : labels) {
    auto [u, v] = edge;
    if (u == v || u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) {
      structural_issues_.push_back("label on invalid edge " + std::to_string(u) + "," + std::to_string(v));
      continue;
    }
    if (u < v) labels_[{u, v}] = g;
    else labels_[{v, u}] = group_.inverse(g);
  }
  for (auto& e : tree_)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(tree_.begin(), tree_.end());
}

QuotientComplex QuotientComplex::from_top_simplices(MarkedGroup group, int num_vertices,
                                                    std::vector<Simplex> tops,
                                                    std::map<Simplex, int> orientation,
                                                    std::map<std::pair<int, int>, Element> labels,
                                                    std::vector<std::pair<int, int>> tree) {
  if (tops.empty()) throw InputError("no top simplices");
  const int n = static_cast<int>(tops.front().size()) - 1;
  std::vector<std::set<Simplex>> all(n + 1);
  for (const auto& t : tops) {
    Simplex s = t;
    std::sort(s.begin(), s.end());
    const int m = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << m); ++mask) {
      Simplex f;
      for (int i = 0; i < m; ++i)
        if (mask & (1 << i)) f.push_back(s[i]);
      all[f.size() - 1].insert(f);
    }
  }
  std::vector<std::vector<Simplex>> simplices(n + 1);
  for (int k = 0; k <= n; ++k) simplices[k].assign(all[k].begin(), all[k].end());
  simplices[n] = tops;
  return QuotientComplex(std::move(group), n, num_vertices, std::move(simplices), std::move(orientation),
                         std::move(labels), std::move(tree));
}

void QuotientComplex::build_indices() {
  const int n = dimension_;
  index_.assign(n + 1, {});
  faces_.assign(n + 1, {});
  cofaces_.assign(n + 1, {});
  for (int k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < cells_[k].size(); ++i) index_[k][cells_[k][i]] = static_cast<int>(i);
    cofaces_[k].assign(cells_[k].size(), {});
  }
  for (int k = 0; k <= n; ++k) {
    faces_[k].assign(cells_[k].size(), {});
    if (k == 0) continue;
    for (std::size_t id = 0; id < cells_[k].size(); ++id) {
      const Simplex& s = cells_[k][id];
      for (int i = 0; i <= k; ++i) {
        Simplex f = s;
        f.erase(f.begin() + i);
        auto it = index_[k - 1].find(f);
        const int fid = it == index_[k - 1].end() ? -1 : it->second;
        faces_[k][id].push_back(fid);
        if (fid >= 0) cofaces_[k - 1][fid].push_back({static_cast<int>(id), i});
      }
    }
  }
}

int QuotientComplex::index(const Simplex& s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dimension_) return -1;
  auto it = index_[k].find(s);
  return it == index_[k].end() ? -1 : it->second;
}

void QuotientComplex::set_orientation(std::vector<int> signs) {
  if (signs.size() != count(dimension_)) throw InputError("orientation size mismatch");
  orientation_ = std::move(signs);
}

Element QuotientComplex::label(int u, int v) const {
  if (u == v) return group_.identity();
  if (u < v) {
    auto it = labels_.find({u, v});
    return it == labels_.end() ? group_.identity() : it->second;
  }
  auto it = labels_.find({v, u});
  return it == labels_.end() ? group_.identity() : group_.inverse(it->second);
}

Element QuotientComplex::vertex_shift(int k, int id, int i) const {
  const Simplex& s = cells_.at(k).at(id);
  return label(s[0], s.at(i));
}

Element QuotientComplex::face_shift(int k, int id, int i) const {
  if (i != 0) return group_.identity();
  return vertex_shift(k, id, 1);
}

int QuotientComplex::euler_characteristic() const {
  int chi = 0;
  for (int k = 0; k <= dimension_; ++k) chi += (k % 2 ? -1 : 1) * static_cast<int>(count(k));
  return chi;
}

int QuotientComplex::max_vertex_degree() const {
  std::vector<int> degree(num_vertices_, 0);
  for (int k = 0; k <= dimension_; ++k)
    for (const auto& s : cells_[k])
      for (int v : s) ++degree[v];
  return *std::max_element(degree.begin(), degree.end());
}

std::optional<std::vector<int>> QuotientComplex::coherent_orientation() const {
  const int n = dimension_;
  if (n == 0) return std::vector<int>(count(0), 1);
  std::vector<int> sign(count(n), 0);
  for (std::size_t start = 0; start < count(n); ++start) {
    if (sign[start]) continue;
    sign[start] = 1;
    std::deque<int> queue{static_cast<int>(start)};
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      for (int i = 0; i <= n; ++i) {
        const int f = faces_[n][t][i];
        if (f < 0) continue;
        const int induced = sign[t] * (i % 2 ? -1 : 1);
        for (auto [other, j] : cofaces_[n - 1][f]) {
          if (other == t) continue;
          const int want = -induced * (j % 2 ? -1 : 1);
          if (!sign[other]) {
            sign[other] = want;
            queue.push_back(other);
          } else if (sign[other] != want) {
            return std::nullopt;
          }
        }
      }
    }
  }
  return sign;
}

ValidationReport QuotientComplex::validate() const {
  ValidationReport r;
  auto add = [&](const std::string& cat, const std::string& detail) { r.issues.push_back({cat, detail}); };
  for (const auto& s : structural_issues_) add("simplicial-complex condition", s);
  const int n = dimension_;
  for (int k = 1; k <= n; ++k)
    for (std::size_t id = 0; id < count(k); ++id)
      for (int i = 0; i <= k; ++i)
        if (faces_[k][id][i] < 0) {
          Simplex f = cells_[k][id];
          f.erase(f.begin() + i);
          add("simplicial-complex condition", "face " + simplex_key(f) + " of " + simplex_key(cells_[k][id]) + " is missing");
        }
  if (!r.valid()) return r;

  // Pure and pseudomanifold.
  for (int k = 0; k < n; ++k)
    for (std::size_t id = 0; id < count(k); ++id)
      if (cofaces_[k][id].empty())
        add("pseudomanifold", "simplex " + simplex_key(cells_[k][id]) + " is not a face of any top simplex");
  if (n >= 1) {
    for (std::size_t f = 0; f < count(n - 1); ++f)
      if (cofaces_[n - 1][f].size() != 2)
        add("pseudomanifold", "face " + simplex_key(cells_[n - 1][f]) + " lies in " +
                                  std::to_string(cofaces_[n - 1][f].size()) + " top simplices");
  }

  // Orientation.
  if (has_orientation()) {
    bool signs_ok = true;
    for (std::size_t t = 0; t < count(n); ++t)
      if (orientation_[t] != 1 && orientation_[t] != -1) {
        add("orientation", "top simplex " + simplex_key(cells_[n][t]) + " has no +-1 sign");
        signs_ok = false;
      }
    if (signs_ok && n >= 1) {
      for (std::size_t f = 0; f < count(n - 1); ++f) {
        const auto& cf = cofaces_[n - 1][f];
        if (cf.size() != 2) continue;
        const int a = orientation_[cf[0].first] * (cf[0].second % 2 ? -1 : 1);
        const int b = orientation_[cf[1].first] * (cf[1].second % 2 ? -1 : 1);
        if (a + b != 0)
          add("orientation", "face " + simplex_key(cells_[n - 1][f]) + " receives equal induced orientations");
      }
    }
  } else if (r.count("pseudomanifold") == 0 && !coherent_orientation()) {
    add("orientation", "no coherent orientation exists (non-orientable)");
  }

  // Labels and spanning tree.
  for (const auto& [edge, g] : labels_) {
    if (n < 1 || index({edge.first, edge.second}) < 0)
      add("labels", "label on non-edge " + std::to_string(edge.first) + "," + std::to_string(edge.second));
  }
  if (n >= 2) {
    for (const auto& s : cells_[2]) {
      Element lhs = group_.multiply(label(s[0], s[1]), label(s[1], s[2]));
      if (lhs != label(s[0], s[2]))
        add("cocycle", "labels around triangle " + simplex_key(s) + " do not multiply to the identity");
    }
  }
  {
    std::vector<int> parent(num_vertices_);
    for (int v = 0; v < num_vertices_; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    bool tree_ok = true;
    for (auto [u, v] : tree_) {
      if (n < 1 || index({u, v}) < 0) {
        add("spanning tree", "tree edge " + std::to_string(u) + "," + std::to_string(v) + " is not an edge");
        tree_ok = false;
        continue;
      }
      if (!group_.is_identity(label(u, v)))
        add("spanning tree", "tree edge " + std::to_string(u) + "," + std::to_string(v) + " has a non-identity label");
      const int a = find(u), b = find(v);
      if (a == b) {
        add("spanning tree", "tree edges contain a cycle through " + std::to_string(u) + "," + std::to_string(v));
        tree_ok = false;
      } else {
        parent[a] = b;
      }
    }
    if (tree_ok && static_cast<int>(tree_.size()) != num_vertices_ - 1)
      add("spanning tree", "tree does not span all vertices");
  }
  return r;
}

void QuotientComplex::require_valid() const {
  auto report = validate();
  if (report.valid()) return;
  std::string msg = "invalid quotient complex:";
  for (const auto& i : report.issues) msg += "\n  " + i.category + ": " + i.detail;
  if (report.count("orientation") && report.count("simplicial-complex condition") == 0 &&
      report.count("pseudomanifold") == 0)
    throw OrientationError(msg);
  throw ValidationError(msg);
}

json QuotientComplex::to_json() const {
  json j;
  j["dimension"] = dimension_;
  j["group"] = group_.to_json();
  j["vertices"] = num_vertices_;
  json simplices = json::array();
  for (int k = 0; k <= dimension_; ++k) simplices.push_back(cells_[k]);
  j["simplices"] = simplices;
  json orient = json::object();
  for (std::size_t t = 0; t < orientation_.size(); ++t) orient[simplex_key(cells_[dimension_][t])] = orientation_[t];
  if (has_orientation()) j["orientation"] = orient;
  json labels = json::object();
  for (const auto& [edge, g] : labels_)
    if (!group_.is_identity(g)) labels[simplex_key({edge.first, edge.second})] = group_.format(g);
  j["labels"] = labels;
  json tree = json::array();
  for (auto [u, v] : tree_) tree.push_back({u, v});
  j["tree"] = tree;
  return j;
}

QuotientComplex QuotientComplex::from_json(const json& doc) {
  try {
    MarkedGroup g = doc.contains("group") ? MarkedGroup::from_json(doc.at("group")) : MarkedGroup::trivial();
    const int n = doc.at("dimension").get<int>();
    int nv = 0;
    if (doc.at("vertices").is_number_integer()) nv = doc.at("vertices").get<int>();
    else nv = static_cast<int>(doc.at("vertices").size());
    auto simplices = doc.at("simplices").get<std::vector<std::vector<Simplex>>>();
    std::map<Simplex, int> orientation;
    if (doc.contains("orientation"))
      for (auto& [key, value] : doc.at("orientation").items()) orientation[parse_key(key)] = value.get<int>();
    std::map<std::pair<int, int>, Element> labels;
    if (doc.contains("labels"))
      for (auto& [key, value] : doc.at("labels").items()) {
        Simplex e = parse_key(key);
        if (e.size() != 2) throw InputError("label key '" + key + "' is not an edge");
        labels[{e[0], e[1]}] = g.parse(value.get<std::string>());
      }
    std::vector<std::pair<int, int>> tree;
    if (doc.contains("tree"))
      for (const auto& e : doc.at("tree")) tree.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return QuotientComplex(std::move(g), n, nv, std::move(simplices), std::move(orientation), std::move(labels),
                           std::move(tree));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed complex document: ") + e.what());
  }
}

std::size_t CellHash::operator()(const Cell& c) const noexcept {
  return ElementHash{}(c.deck) * 31 + static_cast<std::size_t>(c.dim) * 1000003u + static_cast<std::size_t>(c.id);
}

CoverPoint normalize(std::vector<std::pair<Cell, Rational>> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.id != b.first.id) return a.first.id < b.first.id;
    return a.first.deck < b.first.deck;
  });
  CoverPoint p;
  for (auto& [c, w] : terms) {
    if (!p.terms.empty() && p.terms.back().first == c) p.terms.back().second += w;
    else p.terms.push_back({c, w});
  }
  std::erase_if(p.terms, [](const auto& t) { return t.second == 0; });
  return p;
}

CoverPoint translate(const MarkedGroup& g, const Element& h, const CoverPoint& p) {
  std::vector<std::pair<Cell, Rational>> terms;
  for (const auto& [c, w] : p.terms) terms.push_back({Cell{g.multiply(h, c.deck), 0, c.id}, w});
  return normalize(std::move(terms));
}

PeriodicComplex::PeriodicComplex(QuotientComplex quotient) : quotient_(std::move(quotient)) {}

std::size_t PeriodicComplex::expand(int radius) {
  std::lock_guard lock(*mutex_);
  if (radius > radius_) {
    ball_ = group().ball(radius);
    ball_set_ = std::unordered_set<Element, ElementHash>(ball_.begin(), ball_.end());
    radius_ = radius;
  }
  std::size_t cells = 0;
  for (int k = 0; k <= quotient_.dimension(); ++k) cells += quotient_.count(k);
  return cells * ball_.size();
}

bool PeriodicComplex::materialized(const Element& deck) const {
  std::lock_guard lock(*mutex_);
  return ball_set_.count(deck) > 0;
}

std::vector<Cell> PeriodicComplex::cells(int k) const {
  std::vector<Cell> out;
  for (const auto& g : ball_)
    for (std::size_t id = 0; id < quotient_.count(k); ++id) out.push_back(Cell{g, k, static_cast<int>(id)});
  return out;
}

std::vector<Cell> PeriodicComplex::vertices(const Cell& c) const {
  std::vector<Cell> out;
  const Simplex& s = quotient_.cell(c.dim, c.id);
  for (int i = 0; i <= c.dim; ++i)
    out.push_back(Cell{group().multiply(c.deck, quotient_.vertex_shift(c.dim, c.id, i)), 0, s[i]});
  return out;
}

Cell PeriodicComplex::face(const Cell& c, int i) const {
  return Cell{group().multiply(c.deck, quotient_.face_shift(c.dim, c.id, i)), c.dim - 1,
              quotient_.face(c.dim, c.id, i)};
}

FundamentalDomain::FundamentalDomain(const QuotientComplex& q) {
  const int n = q.dimension();
  lift_.assign(n + 1, {});
  host_.assign(n + 1, {});
  for (int k = 0; k <= n; ++k) {
    lift_[k].assign(q.count(k), q.group().identity());
    host_[k].assign(q.count(k), -1);
  }
  for (std::size_t t = 0; t < q.count(n); ++t) host_[n][t] = static_cast<int>(t);
  // Tops are sorted lexicographically, so the first top containing a simplex
  // is the lexicographically least one.
  for (std::size_t t = 0; t < q.count(n); ++t) {
    const Simplex& top = q.cell(n, static_cast<int>(t));
    const int m = n + 1;
    for (int mask = 1; mask < (1 << m) - 1; ++mask) {
      Simplex f;
      for (int i = 0; i < m; ++i)
        if (mask & (1 << i)) f.push_back(top[i]);
      const int k = static_cast<int>(f.size()) - 1;
      const int id = q.index(f);
      if (id < 0 || host_[k][id] >= 0) continue;
      host_[k][id] = static_cast<int>(t);
      lift_[k][id] = q.label(top[0], f[0]);
    }
  }
}

Element FundamentalDomain::coset(const MarkedGroup& g, const Cell& c) const {
  return g.multiply(c.deck, g.inverse(lift_.at(c.dim).at(c.id)));
}

}  // namespace ulef
