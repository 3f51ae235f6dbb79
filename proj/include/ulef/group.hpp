#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ulef {

using json = nlohmann::json;

enum class GroupKind { FreeAbelian, Free, Surface, Finite };

std::string to_string(GroupKind kind);

/// Generator i is encoded as letter 2i, its formal inverse as 2i + 1.
using Letter = int;
using Word = std::vector<Letter>;

inline Letter inverse_letter(Letter l) { return l ^ 1; }
Word inverse_word(const Word& w);

/// A deck-group element in the canonical encoding of its group kind:
/// free abelian -> exponent vector, free -> freely reduced word,
/// surface -> shortlex-least geodesic word, finite -> {table index}.
struct Element {
  std::vector<int> data;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

class SurfaceTable;
struct FiniteData;

/// A deck group with an exact word problem over one of four families.
///
/// Instances are cheap to copy: the finite multiplication table and the
/// surface-group normal-form table are shared. The surface table grows
/// lazily (behind a mutex) up to the configured budget; all queries are
/// safe to issue from several threads.
class MarkedGroup {
 public:
  static MarkedGroup free_abelian(int rank);
  static MarkedGroup free_group(int rank);
  static MarkedGroup surface(int genus);
  /// `table[i][j]` is the index of i*j; `generators` are element indices.
  static MarkedGroup finite(std::vector<std::vector<int>> table, std::vector<int> generators,
                            std::vector<std::string> names = {});
  static MarkedGroup cyclic(int order);
  static MarkedGroup trivial();

  static MarkedGroup from_json(const json& spec);
  json to_json() const;

  GroupKind kind() const { return kind_; }
  /// Rank (free, free abelian), genus (surface) or order (finite).
  int parameter() const { return parameter_; }
  int num_generators() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& generator_names() const { return names_; }
  bool is_finite() const;
  bool is_amenable() const;
  std::size_t order() const;

  int budget() const { return budget_; }
  void set_budget(int radius);

  Element identity() const;
  Element generator(int index) const;
  Element letter(Letter l) const;
  Element evaluate(const Word& w) const;
  Word normal_form(const Word& w) const;
  Word to_word(const Element& g) const;

  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  bool is_identity(const Element& a) const { return a == identity(); }

  /// Word length with respect to the marked generators.
  int length(const Element& g) const;
  /// d(g, h) = |g^-1 h|.
  int distance(const Element& g, const Element& h) const;

  /// Exact word-metric ball, ordered by length then shortlex normal form.
  std::vector<Element> ball(int radius) const;
  /// Neighbours g*s for every letter s, in letter order (duplicates kept).
  std::vector<Element> neighbors(const Element& g) const;
  /// Neighbours restricted to ball(radius) without growing any table past
  /// `radius`. Entries outside the ball are omitted.
  std::vector<Element> neighbors_in_ball(const Element& g, int radius) const;
  /// g * l if it lies in ball(radius), computed without growing past it.
  std::optional<Element> neighbor_in_ball(const Element& g, Letter l, int radius) const;

  Word parse_word(std::string_view text) const;
  Element parse(std::string_view text) const { return evaluate(parse_word(text)); }
  std::string format(const Element& g) const { return format_word(to_word(g)); }
  std::string format_word(const Word& w) const;

  /// Shortlex comparison of canonical words, used for deterministic output.
  bool shortlex_less(const Element& a, const Element& b) const;

 private:
  MarkedGroup() = default;
  void check_letter(Letter l) const;
  void check_radius(int radius) const;

  GroupKind kind_ = GroupKind::FreeAbelian;
  int parameter_ = 0;
  int budget_ = 8;
  std::vector<std::string> names_;
  std::shared_ptr<const FiniteData> finite_;
  std::shared_ptr<SurfaceTable> surface_;
};

/// Følner family for amenable kinds: boxes [-t, t]^k for free abelian
/// groups (and the rank-one free group), the whole group for finite groups.
class FolnerScheme {
 public:
  FolnerScheme(MarkedGroup group, int neighborhood_radius = 1);

  const MarkedGroup& group() const { return group_; }
  int radius() const { return radius_; }

  std::vector<Element> set(int t) const;
  std::size_t set_size(int t) const;
  /// Inner r-boundary: elements of F_t within distance r of G \ F_t.
  std::size_t boundary_size(int t) const;

 private:
  MarkedGroup group_;
  int radius_;
};

}  // namespace ulef
