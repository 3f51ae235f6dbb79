#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ulef/group.hpp"
#include "ulef/rational.hpp"

namespace ulef {

/// Vertex ids in ascending order; orientation signs refer to this order.
using Simplex = std::vector<int>;

struct ValidationIssue {
  std::string category;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
  std::size_t count(const std::string& category) const;
  json to_json() const;
};

/// Finite quotient datum of a Galois covering: an ordered simplicial complex
/// with deck-group labels on edges. The lift of simplex [v0..vk] at deck g
/// has vertices (g * label(v0, vi), vi).
class QuotientComplex {
 public:
  QuotientComplex() = default;
  /// `simplices[k]` lists k-simplices. Vertex lists are sorted on entry and
  /// the orientation of a top simplex is multiplied by the sorting parity.
  /// `orientation` maps top simplices (as given) to +-1 and may be empty.
  QuotientComplex(MarkedGroup group, int dimension, int num_vertices,
                  std::vector<std::vector<Simplex>> simplices,
                  std::map<Simplex, int> orientation,
                  std::map<std::pair<int, int>, Element> labels,
                  std::vector<std::pair<int, int>> tree);

  /// Closure of the given top simplices; convenient for fixtures.
  static QuotientComplex from_top_simplices(MarkedGroup group, int num_vertices,
                                            std::vector<Simplex> tops,
                                            std::map<Simplex, int> orientation,
                                            std::map<std::pair<int, int>, Element> labels,
                                            std::vector<std::pair<int, int>> tree);

  static QuotientComplex from_json(const json& doc);
  json to_json() const;

  const MarkedGroup& group() const { return group_; }
  int dimension() const { return dimension_; }
  int num_vertices() const { return num_vertices_; }
  std::size_t count(int k) const { return cells_.at(k).size(); }
  const std::vector<Simplex>& cells(int k) const { return cells_.at(k); }
  const Simplex& cell(int k, int id) const { return cells_.at(k).at(id); }
  /// Index of a sorted simplex, -1 if absent.
  int index(const Simplex& s) const;

  bool has_orientation() const { return !orientation_.empty(); }
  int orientation(int top) const { return orientation_.at(top); }
  const std::vector<int>& orientations() const { return orientation_; }
  void set_orientation(std::vector<int> signs);
  /// Coherent signs with the first top simplex positive, if any exist.
  std::optional<std::vector<int>> coherent_orientation() const;

  /// label(u, v) for an edge in either direction; identity when unlabeled.
  Element label(int u, int v) const;
  const std::map<std::pair<int, int>, Element>& labels() const { return labels_; }
  const std::vector<std::pair<int, int>>& tree() const { return tree_; }

  /// Deck shift of vertex i of simplex (k, id) relative to its base vertex.
  Element vertex_shift(int k, int id, int i) const;
  /// Face obtained by deleting vertex i, and the deck shift of that face's
  /// lift relative to the lift of the simplex.
  int face(int k, int id, int i) const { return faces_.at(k).at(id).at(i); }
  Element face_shift(int k, int id, int i) const;
  /// (coface id, position of the deleted vertex) for every (k+1)-coface.
  const std::vector<std::pair<int, int>>& cofaces(int k, int id) const { return cofaces_.at(k).at(id); }

  int euler_characteristic() const;
  /// Maximum number of simplices containing one vertex.
  int max_vertex_degree() const;

  ValidationReport validate() const;
  /// Throws ValidationError listing the issues unless validate() is clean.
  void require_valid() const;

 private:
  void build_indices();

  MarkedGroup group_ = MarkedGroup::trivial();
  int dimension_ = 0;
  int num_vertices_ = 0;
  std::vector<std::vector<Simplex>> cells_;
  std::vector<std::map<Simplex, int>> index_;
  std::vector<std::vector<std::vector<int>>> faces_;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cofaces_;
  std::vector<int> orientation_;
  std::map<std::pair<int, int>, Element> labels_;
  std::vector<std::pair<int, int>> tree_;
  std::vector<std::string> structural_issues_;
};

/// A cell of the cover: the lift of quotient simplex (dim, id) at `deck`.
struct Cell {
  Element deck;
  int dim = 0;
  int id = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept;
};

/// A point of the cover as a convex combination of cover vertices.
/// Entries are sorted by (vertex, deck) and weights are positive.
struct CoverPoint {
  std::vector<std::pair<Cell, Rational>> terms;  // cells of dimension 0
  friend bool operator==(const CoverPoint&, const CoverPoint&) = default;
};

CoverPoint normalize(std::vector<std::pair<Cell, Rational>> terms);
/// Left translation by a deck element.
CoverPoint translate(const MarkedGroup& g, const Element& h, const CoverPoint& p);

/// The lifted triangulation of the cover, expanded lazily around the
/// identity translate.
class PeriodicComplex {
 public:
  explicit PeriodicComplex(QuotientComplex quotient);

  const QuotientComplex& quotient() const { return quotient_; }
  const MarkedGroup& group() const { return quotient_.group(); }

  /// Materializes every cell whose deck coordinate lies in ball(radius).
  /// Idempotent and monotone; returns the number of materialized cells.
  std::size_t expand(int radius);
  int radius() const { return radius_; }
  const std::vector<Element>& translates() const { return ball_; }
  bool materialized(const Element& deck) const;
  bool materialized(const Cell& c) const { return materialized(c.deck); }
  std::vector<Cell> cells(int k) const;

  std::vector<Cell> vertices(const Cell& c) const;
  Cell face(const Cell& c, int i) const;

 private:
  QuotientComplex quotient_;
  int radius_ = -1;
  std::vector<Element> ball_;
  std::unordered_set<Element, ElementHash> ball_set_;
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

/// Lifts of every quotient simplex forming a strict fundamental domain K:
/// top simplices at the identity, lower simplices inside the closure of the
/// lexicographically least top simplex containing them.
class FundamentalDomain {
 public:
  explicit FundamentalDomain(const QuotientComplex& q);

  const Element& lift(int k, int id) const { return lift_.at(k).at(id); }
  /// The g with c in g K.
  Element coset(const MarkedGroup& g, const Cell& c) const;
  /// Top simplex whose closure hosts the chosen lift of (k, id).
  int host(int k, int id) const { return host_.at(k).at(id); }

 private:
  std::vector<std::vector<Element>> lift_;
  std::vector<std::vector<int>> host_;
};

/// Iterated barycentric subdivision, with every new vertex located in the
/// cover of the original complex.
struct Subdivision {
  QuotientComplex complex;
  int times = 0;
  /// Position of the lift at the identity of each vertex, in the cover of the
  /// original complex.
  std::vector<CoverPoint> vertex_position;
  /// Original top simplex whose identity lift contains each top simplex.
  std::vector<int> top_carrier;
};

/// New vertex ids run through barycenters of top simplices first and the
/// original vertices last, so every top simplex has the barycenter of its
/// carrier as base vertex and lifts of tops stay inside lifts of tops.
Subdivision barycentric_subdivide(const QuotientComplex& q, int times);

/// Barycentric coordinates of the vertices of simplex (k, id) of the
/// subdivision in the original simplex `carrier` (returned), or nullopt if
/// the simplex is not contained in a single original k-simplex.
std::optional<std::pair<int, RationalMatrix>> carrier_coordinates(const QuotientComplex& original,
                                                                 const Subdivision& sd, int k, int id);

/// Position of vertex i of simplex (k, id) of the subdivision, relative to
/// the lift of that simplex at the identity.
CoverPoint simplex_vertex_position(const Subdivision& sd, int k, int id, int i);

/// Sends each vertex of the subdivision to the least vertex of its carrier
/// simplex: a simplicial approximation of the identity.
std::vector<int> carrier_vertex_map(const Subdivision& sd);

}  // namespace ulef
