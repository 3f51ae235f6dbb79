#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ulef/analytic.hpp"
#include "ulef/chain.hpp"
#include "ulef/complex.hpp"
#include "ulef/fixtures.hpp"

namespace ulef {

/// PL self-map of the cover: affine on each top simplex of Sd^t(q), sending
/// domain vertices to points of the cover of q. Equivariant except at the
/// overridden vertex lifts.
struct PLSelfMap {
  QuotientComplex quotient;
  Subdivision domain;
  /// Image of the identity lift of each domain vertex.
  std::vector<CoverPoint> image;
  /// (deck, domain vertex) -> image of that lift.
  std::map<std::pair<Element, int>, CoverPoint> overrides;

  /// Vertex map of the simplicial map this one was refined from; lets the
  /// classical trace formula check the equivariant part.
  struct Simplicial {
    Subdivision domain;
    std::vector<int> vertex_map;
  };
  std::optional<Simplicial> simplicial;

  CoverPoint image_at(const Element& deck, int vertex) const;
};

/// f(x) = x + u(x) on a Euclidean torus cover with unit periods.
struct AnalyticSelfMap {
  TorusChart chart;
  AnalyticField displacement;
};

struct SelfMapModel {
  std::variant<PLSelfMap, AnalyticSelfMap> map;
  std::optional<Rational> declared_bound;
  int grid = 32;         // Newton starts per unit length (analytic)
  int sample_grid = 64;  // tameness samples per unit length (analytic)

  bool analytic() const { return map.index() == 1; }
  const PLSelfMap& pl() const { return std::get<PLSelfMap>(map); }
  const AnalyticSelfMap& smooth() const { return std::get<AnalyticSelfMap>(map); }
  /// The triangulation the map is stated over, before subdivision.
  const QuotientComplex& quotient() const;
  const MarkedGroup& group() const { return quotient().group(); }
  int dimension() const { return quotient().dimension(); }
  bool equivariant() const;
};

/// Checks that every domain top simplex lands in one closed top simplex of
/// the target, throws ValidationError otherwise.
PLSelfMap make_pl_map(QuotientComplex q, int t, std::vector<CoverPoint> image,
                      std::map<std::pair<Element, int>, CoverPoint> overrides = {});
/// Simplicial map given by a vertex map with all images at the identity lift.
PLSelfMap vertex_map_model(QuotientComplex q, int t, const std::vector<int>& vertex_map);
/// The PL map on Sd^t(q) that agrees with a vertex permutation of q, for a
/// trivial deck group.
PLSelfMap induced_vertex_permutation(QuotientComplex q, int t, const std::vector<int>& permutation);
/// x -> x + shift on a Euclidean torus; the shift must keep every domain
/// simplex inside one closed target simplex.
PLSelfMap torus_translation(const Torus& torus, int t, const RationalVector& shift);

struct FixedPointRecord {
  /// Top simplex of the domain triangulation: Sd^t(q) for PL maps, the
  /// chart triangulation for analytic maps. Unset when the point lies on a face.
  std::optional<Cell> host;
  Element coset;
  CoverPoint point;          // PL maps: exact position in the cover of q
  RationalVector position;   // analytic maps: Euclidean cover coordinates
  bool exact = false;        // position is an exact rational point
  std::vector<double> barycentric;
  double clearance = 0;      // distance to the boundary of the host
  double enclosure = 0;      // validated enclosure half-width, 0 when exact
  std::string validation;    // exact, krawczyk, degree, none
  int piece = -1;            // analytic: override index or -1
  std::optional<int> index;
  std::optional<Rational> isolation;
};

/// Fixed points in the translates ball(radius), sorted by (coset, host).
/// Throws TamenessError for non-isolated fixed points and, for PL maps, for
/// fixed points on a face of the domain triangulation.
std::vector<FixedPointRecord> find_fixed_points(const SelfMapModel& m, int radius);

/// Degree of x - f(x) at the point. `radius` shrinks the analytic enclosure
/// (0 keeps the validated one); PL indices are exact.
int local_index(const SelfMapModel& m, const FixedPointRecord& p, double radius = 0);

struct TamenessReport {
  std::string verdict;  // strongly tame, tame, not tame
  /// Half the least distance between fixed points, and the least sampled
  /// displacement outside the delta balls.
  Rational delta, epsilon;
  /// delta shrunk so each ball sits inside its host simplex, with the
  /// matching epsilon.
  Rational strong_delta, strong_epsilon;
  bool fixed_point_free = false;
  double max_displacement = 0;
  std::optional<double> certified_bound;
  std::string metric;
  std::vector<std::string> witnesses;
};

TamenessReport tameness_check(const SelfMapModel& m);

struct LefschetzResult {
  ClassFunction function;
  /// Fixed points in the identity translate plus those in override cosets.
  std::vector<FixedPointRecord> points;
  TamenessReport tameness;
  std::vector<std::string> diagnostics;
};

/// g -> sum of indices over fixed points in gK: the periodic part gives the
/// constant, overrides the finite part. Throws TamenessError unless strongly tame.
LefschetzResult lefschetz_class(const SelfMapModel& m);

struct IndexData {
  MarkedGroup group;
  ClassFunction function;
  std::string note;
};
/// {"group": {...}, "constant": c, "finite": [[word, value], ...]}, optionally
/// "domain_indices": [i, ...] for the fixed points of one fundamental domain.
IndexData ingest_index_data(const json& doc);

struct OracleComparison {
  long long index_sum = 0;  // constant part of the Lefschetz class
  long long classical = 0;  // trace formula on the quotient
  bool equal = false;
  std::string method;
};
/// Throws ValidationError for maps with overrides.
OracleComparison equivariant_oracle_check(const SelfMapModel& m);

/// The same map over one more barycentric subdivision.
SelfMapModel refine(const SelfMapModel& m);
/// Analytic maps: displacement multiplied by s.
SelfMapModel scale_displacement(const SelfMapModel& m, const Rational& s);

/// Chordal distance between cover points: |w_x - w_y| / sqrt(2) on
/// vertex weights, so every simplex is a regular unit simplex.
double cover_distance(const CoverPoint& a, const CoverPoint& b);

// Torus pipeline shared by analytic maps and vector fields. `orientation`
// multiplies each degree as in torus_zeros; `what` names u in messages.
TorusZeroSet analytic_zero_set(const TorusChart& chart, const AnalyticField& f, int grid, int orientation,
                               const std::string& what);
FixedPointRecord torus_record(const TorusZero& z);
std::vector<FixedPointRecord> torus_records(const TorusChart& chart, const AnalyticField& f, const TorusZeroSet& zs,
                                            int radius);
/// Degree of u at the zero, before orientation.
int torus_degree(const AnalyticField& f, const FixedPointRecord& p, double radius);
TamenessReport torus_tameness(const TorusChart& chart, const AnalyticField& f, int grid, int sample_grid,
                              int orientation, const std::optional<Rational>& bound, const std::string& what);
/// Constant part from the periodic zeros, finite part from override boxes.
ClassFunction torus_class(const AnalyticField& f, const TorusZeroSet& zs, std::vector<FixedPointRecord>* points);
void sort_records(const MarkedGroup& g, std::vector<FixedPointRecord>& v);

json fixed_point_to_json(const MarkedGroup& g, const FixedPointRecord& p);
json tameness_to_json(const TamenessReport& r);

}  // namespace ulef
