#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ulef/fixpoint.hpp"
#include "ulef/ufh.hpp"

namespace ulef {

/// Periodic analytic field u on the Euclidean cover of a torus.
struct TorusField {
  TorusChart chart;
  AnalyticField field;
};

/// PL field on a complex realized in R^(n+1) with trivial deck group. Each
/// face F carries v_F(x) = W(x) - <W(x), nu_F> x, where W interpolates the
/// ambient vertex vectors and <nu_F, x> = 1 on F. Radial projection sends
/// every v_F to the tangential part of W, so the field is continuous on the
/// sphere and its zeros are the points where W is parallel to x.
struct RealizedField {
  QuotientComplex complex;
  std::vector<RationalVector> position;
  std::vector<RationalVector> vectors;
};

struct VectorFieldModel {
  std::variant<RealizedField, TorusField> field;
  std::optional<Rational> declared_bound;
  int grid = 32;
  int sample_grid = 64;

  bool analytic() const { return field.index() == 1; }
  const TorusField& torus() const { return std::get<TorusField>(field); }
  const RealizedField& realized() const { return std::get<RealizedField>(field); }
  const QuotientComplex& quotient() const;
  const MarkedGroup& group() const { return quotient().group(); }
};

/// Checks the realization: trivial group, one vector per vertex, faces not
/// through the origin.
RealizedField make_realized_field(QuotientComplex q, std::vector<RationalVector> position,
                                  std::vector<RationalVector> vectors);
/// The constant ambient field `direction` on a realized sphere: a source at
/// the point of the ray -direction and a sink on the ray +direction.
RealizedField constant_direction_field(QuotientComplex q, std::vector<RationalVector> position,
                                       const RationalVector& direction);
/// The boundary of the tetrahedron on the vertices (1,1,1), (1,-1,-1),
/// (-1,1,-1), (-1,-1,1).
std::vector<RationalVector> tetrahedron_positions();

using ZeroRecord = FixedPointRecord;

/// Zeros in the translates ball(radius), sorted by (coset, host).
std::vector<ZeroRecord> find_zeros(const VectorFieldModel& v, int radius);
/// Degree of v / |v| around the zero.
int field_index(const VectorFieldModel& v, const ZeroRecord& z, double radius = 0);
/// |v| in place of the displacement.
TamenessReport field_tameness(const VectorFieldModel& v);

struct IndexClassResult {
  ClassFunction function;
  std::vector<ZeroRecord> zeros;  // identity translate plus override cosets
  TamenessReport tameness;
  std::vector<std::string> diagnostics;
};
/// g -> sum of indices over zeros in gK. Throws TamenessError when the field
/// is not tame or a zero has no host simplex.
IndexClassResult index_class(const VectorFieldModel& v);

struct PoincareHopfReport {
  int euler_characteristic = 0;
  ClassFunction index;
  ClassFunction difference;  // index - chi * 1
  ClassCertificate certificate;
  std::string verdict;
};
PoincareHopfReport poincare_hopf_check(const MarkedGroup& g, const ClassFunction& index, int euler_characteristic,
                                       const DecideOptions& options = {});
PoincareHopfReport poincare_hopf_check(const VectorFieldModel& v, const IndexClassResult& r,
                                       const DecideOptions& options = {});

VectorFieldModel negate(const VectorFieldModel& v);

}  // namespace ulef
