#include "ulef/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "surface_table.hpp"
#include "ulef/error.hpp"

namespace ulef {

struct FiniteData {
  std::vector<std::vector<int>> table;
  std::vector<int> generators;
  std::vector<int> inverse;
  int identity = 0;
  std::vector<Word> words;           // shortlex-least geodesic per element
  std::vector<int> bfs_order;        // elements sorted by (length, word)
};

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::FreeAbelian: return "free-abelian";
    case GroupKind::Free: return "free";
    case GroupKind::Surface: return "surface";
    case GroupKind::Finite: return "finite";
  }
  return "?";
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& l : out) l = inverse_letter(l);
  return out;
}

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (int x : e.data) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 0x100000001b3ull;
  return h;
}

namespace {

std::vector<std::string> letter_names(int count) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) {
    if (count <= 25) names.push_back(std::string(1, static_cast<char>('a' + (i >= 4 ? i + 1 : i))));
    else names.push_back("x" + std::to_string(i + 1));
  }
  return names;
}

Word free_reduce(const Word& w) {
  Word out;
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse_letter(l)) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

bool shortlex(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

MarkedGroup MarkedGroup::free_abelian(int rank) {
  if (rank < 0) throw InputError("free-abelian rank must be nonnegative");
  MarkedGroup g;
  g.kind_ = GroupKind::FreeAbelian;
  g.parameter_ = rank;
  g.names_ = letter_names(rank);
  return g;
}

MarkedGroup MarkedGroup::free_group(int rank) {
  if (rank < 0) throw InputError("free-group rank must be nonnegative");
  MarkedGroup g;
  g.kind_ = GroupKind::Free;
  g.parameter_ = rank;
  g.names_ = letter_names(rank);
  return g;
}

MarkedGroup MarkedGroup::surface(int genus) {
  if (genus < 2) throw InputError("surface-group genus must be at least 2");
  MarkedGroup g;
  g.kind_ = GroupKind::Surface;
  g.parameter_ = genus;
  g.budget_ = 6;
  for (int i = 1; i <= genus; ++i) {
    g.names_.push_back("a" + std::to_string(i));
    g.names_.push_back("b" + std::to_string(i));
  }
  g.surface_ = std::make_shared<SurfaceTable>(genus, g.budget_);
  return g;
}

MarkedGroup MarkedGroup::finite(std::vector<std::vector<int>> table, std::vector<int> generators,
                                std::vector<std::string> names) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InputError("finite group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw InputError("finite group table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw InputError("finite group table entry out of range");
  }
  auto data = std::make_shared<FiniteData>();
  data->identity = -1;
  for (int e = 0; e < n && data->identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) data->identity = e;
  }
  if (data->identity < 0) throw InputError("finite group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InputError("finite group table is not associative");
  data->inverse.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == data->identity && table[b][a] == data->identity) data->inverse[a] = b;
  for (int a = 0; a < n; ++a)
    if (data->inverse[a] < 0) throw InputError("finite group table has an element without inverse");
  for (int s : generators)
    if (s < 0 || s >= n) throw InputError("finite group generator out of range");
  data->table = std::move(table);
  data->generators = generators;

  // Breadth-first search in letter order visits words in shortlex order.
  data->words.assign(n, {});
  std::vector<bool> seen(n, false);
  std::deque<int> queue{data->identity};
  seen[data->identity] = true;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    data->bfs_order.push_back(x);
    for (Letter l = 0; l < 2 * static_cast<int>(generators.size()); ++l) {
      int s = generators[l / 2];
      if (l % 2) s = data->inverse[s];
      int y = data->table[x][s];
      if (!seen[y]) {
        seen[y] = true;
        data->words[y] = data->words[x];
        data->words[y].push_back(l);
        queue.push_back(y);
      }
    }
  }
  if (static_cast<int>(data->bfs_order.size()) != n)
    throw InputError("finite group generators do not generate the group");

  MarkedGroup g;
  g.kind_ = GroupKind::Finite;
  g.parameter_ = n;
  g.budget_ = n;
  if (names.empty()) {
    for (std::size_t i = 0; i < generators.size(); ++i) names.push_back("g" + std::to_string(i + 1));
  }
  if (names.size() != generators.size()) throw InputError("finite group generator names mismatch");
  g.names_ = std::move(names);
  g.finite_ = std::move(data);
  return g;
}

MarkedGroup MarkedGroup::cyclic(int order) {
  if (order < 1) throw InputError("cyclic group order must be positive");
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) table[a][b] = (a + b) % order;
  return finite(std::move(table), order == 1 ? std::vector<int>{} : std::vector<int>{1}, {});
}

MarkedGroup MarkedGroup::trivial() { return cyclic(1); }

void MarkedGroup::set_budget(int radius) {
  budget_ = radius;
  if (surface_) surface_->set_budget(radius);
}

bool MarkedGroup::is_finite() const {
  return kind_ == GroupKind::Finite || parameter_ == 0;
}

bool MarkedGroup::is_amenable() const {
  switch (kind_) {
    case GroupKind::FreeAbelian:
    case GroupKind::Finite: return true;
    case GroupKind::Free: return parameter_ <= 1;
    case GroupKind::Surface: return false;
  }
  return false;
}

std::size_t MarkedGroup::order() const {
  if (kind_ == GroupKind::Finite) return finite_->table.size();
  if (parameter_ == 0) return 1;
  throw UnsupportedError("order of an infinite group");
}

void MarkedGroup::check_letter(Letter l) const {
  if (l < 0 || l >= 2 * num_generators())
    throw InputError("letter " + std::to_string(l) + " is not a declared generator or inverse");
}

void MarkedGroup::check_radius(int radius) const {
  if (radius < 0) throw InputError("negative radius");
  if (kind_ != GroupKind::Finite && radius > budget_) {
    throw ResourceError("ball radius " + std::to_string(radius) + " exceeds group budget " +
                        std::to_string(budget_) + " (raise group.budget in the group document)");
  }
}

Element MarkedGroup::identity() const {
  switch (kind_) {
    case GroupKind::FreeAbelian: return Element{std::vector<int>(parameter_, 0)};
    case GroupKind::Finite: return Element{{finite_->identity}};
    default: return Element{};
  }
}

Element MarkedGroup::generator(int index) const { return letter(2 * index); }

Element MarkedGroup::letter(Letter l) const { return evaluate(Word{l}); }

Element MarkedGroup::evaluate(const Word& w) const {
  for (Letter l : w) check_letter(l);
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Element e = identity();
      for (Letter l : w) e.data[l / 2] += (l % 2 == 0) ? 1 : -1;
      return e;
    }
    case GroupKind::Free: return Element{free_reduce(w)};
    case GroupKind::Surface: return Element{surface_->word(surface_->find(w))};
    case GroupKind::Finite: {
      int x = finite_->identity;
      for (Letter l : w) {
        int s = finite_->generators[l / 2];
        if (l % 2) s = finite_->inverse[s];
        x = finite_->table[x][s];
      }
      return Element{{x}};
    }
  }
  throw InternalError("unknown group kind");
}

Word MarkedGroup::to_word(const Element& g) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Word w;
      for (int i = 0; i < parameter_; ++i) {
        const int e = g.data.at(i);
        for (int k = 0; k < std::abs(e); ++k) w.push_back(e > 0 ? 2 * i : 2 * i + 1);
      }
      return w;
    }
    case GroupKind::Free:
    case GroupKind::Surface: return g.data;
    case GroupKind::Finite: return finite_->words.at(g.data.at(0));
  }
  throw InternalError("unknown group kind");
}

Word MarkedGroup::normal_form(const Word& w) const { return to_word(evaluate(w)); }

Element MarkedGroup::multiply(const Element& a, const Element& b) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Element e = a;
      for (int i = 0; i < parameter_; ++i) e.data[i] += b.data[i];
      return e;
    }
    case GroupKind::Finite: return Element{{finite_->table[a.data[0]][b.data[0]]}};
    default: {
      Word w = a.data;
      w.insert(w.end(), b.data.begin(), b.data.end());
      return evaluate(w);
    }
  }
}

Element MarkedGroup::inverse(const Element& a) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Element e = a;
      for (int& x : e.data) x = -x;
      return e;
    }
    case GroupKind::Finite: return Element{{finite_->inverse[a.data[0]]}};
    default: return evaluate(inverse_word(a.data));
  }
}

int MarkedGroup::length(const Element& g) const { return static_cast<int>(to_word(g).size()); }

int MarkedGroup::distance(const Element& g, const Element& h) const {
  return length(multiply(inverse(g), h));
}

bool MarkedGroup::shortlex_less(const Element& a, const Element& b) const {
  return shortlex(to_word(a), to_word(b));
}

std::vector<Element> MarkedGroup::ball(int radius) const {
  check_radius(radius);
  std::vector<Element> out;
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      std::vector<int> v(parameter_, -radius);
      if (parameter_ == 0) return {identity()};
      while (true) {
        int l1 = 0;
        for (int x : v) l1 += std::abs(x);
        if (l1 <= radius) out.push_back(Element{v});
        int i = 0;
        while (i < parameter_ && v[i] == radius) v[i++] = -radius;
        if (i == parameter_) break;
        ++v[i];
      }
      std::vector<std::pair<Word, Element>> keyed;
      for (auto& e : out) keyed.emplace_back(to_word(e), e);
      std::sort(keyed.begin(), keyed.end(),
                [](const auto& x, const auto& y) { return shortlex(x.first, y.first); });
      out.clear();
      for (auto& [w, e] : keyed) out.push_back(std::move(e));
      return out;
    }
    case GroupKind::Free: {
      out.push_back(identity());
      std::size_t begin = 0;
      for (int k = 0; k < radius; ++k) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
          for (Letter l = 0; l < 2 * parameter_; ++l) {
            const Word& w = out[i].data;
            if (!w.empty() && w.back() == inverse_letter(l)) continue;
            Word next = w;
            next.push_back(l);
            out.push_back(Element{std::move(next)});
          }
        }
        begin = end;
      }
      return out;
    }
    case GroupKind::Surface: {
      surface_->set_budget(budget_);
      const int n = surface_->ball_size(radius);
      for (int i = 0; i < n; ++i) out.push_back(Element{surface_->word(i)});
      return out;
    }
    case GroupKind::Finite: {
      for (int x : finite_->bfs_order)
        if (static_cast<int>(finite_->words[x].size()) <= radius) out.push_back(Element{{x}});
      return out;
    }
  }
  return out;
}

std::vector<Element> MarkedGroup::neighbors(const Element& g) const {
  std::vector<Element> out;
  for (Letter l = 0; l < 2 * num_generators(); ++l) out.push_back(multiply(g, letter(l)));
  return out;
}

std::vector<Element> MarkedGroup::neighbors_in_ball(const Element& g, int radius) const {
  std::vector<Element> out;
  for (Letter l = 0; l < 2 * num_generators(); ++l)
    if (auto h = neighbor_in_ball(g, l, radius)) out.push_back(std::move(*h));
  return out;
}

std::optional<Element> MarkedGroup::neighbor_in_ball(const Element& g, Letter l, int radius) const {
  check_radius(radius);
  check_letter(l);
  if (kind_ == GroupKind::Surface) {
    surface_->set_budget(budget_);
    const int t = surface_->neighbor(surface_->find(g.data), l, radius);
    if (t < 0) return std::nullopt;
    return Element{surface_->word(t)};
  }
  Element h = multiply(g, letter(l));
  if (length(h) > radius) return std::nullopt;
  return h;
}

Word MarkedGroup::parse_word(std::string_view text) const {
  std::string buffer(text);
  for (char& c : buffer)
    if (c == '*' || c == ',') c = ' ';
  std::istringstream in(buffer);
  std::string token;
  Word w;
  while (in >> token) {
    if (token == "e" || token == "1") continue;
    std::string name = token;
    long exponent = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      const std::string ex = token.substr(caret + 1);
      char* endp = nullptr;
      exponent = std::strtol(ex.c_str(), &endp, 10);
      if (ex.empty() || *endp != '\0') throw InputError("malformed exponent in word token '" + token + "'");
    }
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InputError("unknown generator symbol '" + name + "'");
    const int gen = static_cast<int>(it - names_.begin());
    for (long k = 0; k < std::labs(exponent); ++k) w.push_back(exponent > 0 ? 2 * gen : 2 * gen + 1);
  }
  return w;
}

std::string MarkedGroup::format_word(const Word& w) const {
  if (w.empty()) return "e";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long exponent = static_cast<long>(j - i) * ((w[i] % 2 == 0) ? 1 : -1);
    if (!out.empty()) out += ' ';
    out += names_.at(w[i] / 2);
    if (exponent != 1) out += "^" + std::to_string(exponent);
    i = j;
  }
  return out;
}

json MarkedGroup::to_json() const {
  json j;
  j["kind"] = to_string(kind_);
  switch (kind_) {
    case GroupKind::FreeAbelian:
    case GroupKind::Free: j["rank"] = parameter_; break;
    case GroupKind::Surface: j["genus"] = parameter_; break;
    case GroupKind::Finite:
      j["table"] = finite_->table;
      j["generators"] = finite_->generators;
      j["names"] = names_;
      break;
  }
  if (kind_ != GroupKind::Finite) j["budget"] = budget_;
  return j;
}

MarkedGroup MarkedGroup::from_json(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) throw InputError("group document needs a 'kind' field");
  const std::string kind = spec.at("kind").get<std::string>();
  MarkedGroup g;
  try {
    if (kind == "free-abelian") g = free_abelian(spec.at("rank").get<int>());
    else if (kind == "free") g = free_group(spec.at("rank").get<int>());
    else if (kind == "surface") g = surface(spec.at("genus").get<int>());
    else if (kind == "cyclic") g = cyclic(spec.at("order").get<int>());
    else if (kind == "trivial") g = trivial();
    else if (kind == "finite") {
      if (spec.contains("order") && !spec.contains("table")) g = cyclic(spec.at("order").get<int>());
      else
        g = finite(spec.at("table").get<std::vector<std::vector<int>>>(),
                   spec.at("generators").get<std::vector<int>>(),
                   spec.value("names", std::vector<std::string>{}));
    } else {
      throw InputError("unsupported group kind '" + kind + "' (free-abelian, free, surface, finite)");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed group document: ") + e.what());
  }
  if (spec.contains("budget") && g.kind_ != GroupKind::Finite) g.set_budget(spec.at("budget").get<int>());
  if (spec.contains("names") && g.kind_ != GroupKind::Finite) {
    auto names = spec.at("names").get<std::vector<std::string>>();
    if (names.size() != g.names_.size()) throw InputError("group names have the wrong length");
    g.names_ = std::move(names);
  }
  for (const auto& name : g.names_)
    if (name.empty() || name == "e" || name.find_first_of(" ^*,") != std::string::npos)
      throw InputError("invalid generator name '" + name + "'");
  return g;
}

FolnerScheme::FolnerScheme(MarkedGroup group, int neighborhood_radius)
    : group_(std::move(group)), radius_(neighborhood_radius) {
  const bool boxes = group_.kind() == GroupKind::FreeAbelian ||
                     (group_.kind() == GroupKind::Free && group_.parameter() <= 1);
  if (!boxes && group_.kind() != GroupKind::Finite) {
    throw UnsupportedError("no Følner scheme for " + to_string(group_.kind()) +
                           " groups; they are nonamenable, use flow certificates instead");
  }
  if (radius_ < 1) throw InputError("Følner neighbourhood radius must be positive");
}

std::vector<Element> FolnerScheme::set(int t) const {
  if (group_.kind() == GroupKind::Finite) return group_.ball(static_cast<int>(group_.order()));
  if (t < 0) throw InputError("negative Følner index");
  const int k = group_.parameter();
  std::vector<Element> out;
  if (group_.kind() == GroupKind::Free) {
    // rank <= 1: the interval [-t, t] as reduced words
    if (k == 0) return {group_.identity()};
    for (int x = -t; x <= t; ++x) out.push_back(Element{Word(std::abs(x), x > 0 ? 0 : 1)});
    return out;
  }
  if (k == 0) return {group_.identity()};
  std::vector<int> v(k, -t);
  while (true) {
    out.push_back(Element{v});
    int i = 0;
    while (i < k && v[i] == t) v[i++] = -t;
    if (i == k) break;
    ++v[i];
  }
  return out;
}

std::size_t FolnerScheme::set_size(int t) const {
  if (group_.kind() == GroupKind::Finite) return group_.order();
  std::size_t n = 1;
  for (int i = 0; i < group_.parameter(); ++i) n *= static_cast<std::size_t>(2 * t + 1);
  return n;
}

std::size_t FolnerScheme::boundary_size(int t) const {
  if (group_.kind() == GroupKind::Finite) return 0;
  // Box [-t,t]^k in a word metric given by the L1 norm: x is within distance r
  // of the complement iff some coordinate satisfies |x_i| > t - r.
  const int k = group_.parameter();
  if (k == 0) return 0;
  const std::size_t side = static_cast<std::size_t>(2 * t + 1);
  const int inner_half = t - radius_;
  std::size_t inner_side = inner_half >= 0 ? static_cast<std::size_t>(2 * inner_half + 1) : 0;
  std::size_t all = 1, inner = 1;
  for (int i = 0; i < k; ++i) {
    all *= side;
    inner *= inner_side;
  }
  return all - inner;
}

}  // namespace ulef
