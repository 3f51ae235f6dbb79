#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ulef/complex.hpp"
#include "ulef/expr.hpp"
#include "ulef/fixtures.hpp"

namespace ulef {

/// Components of a map R^n -> R^n with their partial derivatives.
struct FieldPiece {
  std::vector<Expr> u;
  std::vector<std::vector<Expr>> jacobian;  // jacobian[i][j] = du_i / dx_j
  std::vector<std::string> text;

  std::vector<double> value(const std::vector<double>& x) const;
  std::vector<std::vector<double>> derivative(const std::vector<double>& x) const;
  IntervalVector value(const IntervalVector& x) const;
  std::vector<IntervalVector> derivative(const IntervalVector& x) const;
};

/// Replaces the periodic piece on a closed box of the cover (one translate).
struct FieldOverride {
  RationalVector lo, hi;
  FieldPiece piece;
  bool contains(const std::vector<double>& x, double slack = 0) const;
};

/// Z^n-periodic closed-form map on R^n plus finitely many box overrides.
/// Declared derivatives are checked against symbolic differentiation.
class AnalyticField {
 public:
  AnalyticField(int n, const std::vector<std::string>& components,
                const std::vector<std::vector<std::string>>& declared_jacobian = {});

  /// {"components": [...], "jacobian": [[...]], "overrides": [{"box": [[lo, hi], ...],
  /// "components": [...], "jacobian": [[...]]}]}
  static AnalyticField from_json(const json& doc, int n);
  json to_json() const;

  int dimension() const { return n_; }
  const FieldPiece& base() const { return base_; }
  const std::vector<FieldOverride>& overrides() const { return overrides_; }
  void add_override(RationalVector lo, RationalVector hi, const std::vector<std::string>& components,
                    const std::vector<std::vector<std::string>>& declared_jacobian = {});

  /// The piece in force at x: the first override whose closed box holds x.
  const FieldPiece& piece_at(const std::vector<double>& x) const;
  /// s * field, with derivatives scaled alike.
  AnalyticField scaled(const Rational& s) const;

 private:
  FieldPiece make_piece(const std::vector<std::string>& components,
                        const std::vector<std::vector<std::string>>& declared) const;

  int n_ = 0;
  FieldPiece base_;
  std::vector<FieldOverride> overrides_;
};

/// A zero of one piece, located by Newton and validated where possible.
struct AnalyticZero {
  std::vector<double> point;
  /// Small-denominator rational inside the validated enclosure, if any.
  std::optional<RationalVector> exact;
  double radius = 0;             // enclosure half-width
  std::string validation;        // krawczyk, degree, none
  int piece = -1;                // -1 periodic piece, else override index
};

struct ZeroSearch {
  std::vector<AnalyticZero> zeros;
  /// Starts that came close to zero without converging, per grid cell.
  std::vector<std::string> diagnostics;
};

/// Zeros of the periodic piece in [0, 1)^n from grid^n Newton starts.
ZeroSearch periodic_zeros(const AnalyticField& f, int grid, double tolerance = 1e-9);
/// Zeros of an override inside its box, with the same start density.
ZeroSearch override_zeros(const AnalyticField& f, int index, int grid, double tolerance = 1e-9);

/// Sign of det Du over the box c +- r, if the interval determinant
/// excludes zero (n <= 3).
std::optional<int> jacobian_sign(const FieldPiece& p, const std::vector<double>& c, double r);
/// Degree of u / |u| on the boundary of the cube c +- h (n <= 2). Throws
/// ValidationError when u cannot be shown nonzero on the boundary.
int boundary_degree(const FieldPiece& p, const std::vector<double>& c, double h);

/// Largest rational lower bound with denominator 10^9 below a nonnegative double.
Rational rational_below(double x);
/// Exact square root when `r` is a perfect square, otherwise a rational lower bound.
Rational sqrt_below(const Rational& r);

/// A Euclidean torus model with cover positions, optionally barycentrically
/// subdivided, used to host analytic zeros in top simplices.
class TorusChart {
 public:
  TorusChart(Torus torus, int subdivide);

  const Torus& torus() const { return torus_; }
  const QuotientComplex& complex() const { return sd_.complex; }
  int subdivisions() const { return sd_.times; }
  int dimension() const { return torus_.dimension(); }
  /// Periods must be the unit vectors for the periodic expressions to descend.
  void require_unit_periods() const;

  struct Host {
    Cell cell;                    // top simplex of complex()
    std::vector<double> barycentric;
    double clearance = 0;         // distance to the simplex boundary
  };
  /// Top simplex containing x; nullopt when x lies on a lower-dimensional face.
  std::optional<Host> host(const RationalVector& x) const;
  std::optional<Host> host(const std::vector<double>& x) const;
  std::vector<double> translation(const Element& deck) const;
  /// Euclidean vertices of a top cell.
  std::vector<std::vector<double>> vertices(const Cell& top) const;

 private:
  Torus torus_;
  Subdivision sd_;
  std::vector<std::vector<int>> by_carrier_;  // subdivided tops per original top
};

/// A zero of the field in absolute cover coordinates with its host and coset.
struct TorusZero {
  AnalyticZero zero;
  RationalVector location;       // exact when zero.exact, else the double point
  std::optional<TorusChart::Host> host;
  Element coset;                 // deck of the host top, meaningful when host
  int index = 0;
};

/// Zeros of a periodic-plus-override field. `periodic` lists the zeros of the
/// periodic piece in [0, 1)^n; each translate z + k counts unless it falls in
/// an override box, in which case it appears in `removed`. `added` holds the
/// zeros of the override pieces.
struct TorusZeroSet {
  std::vector<TorusZero> periodic;
  std::vector<TorusZero> removed;
  std::vector<TorusZero> added;
  std::vector<std::string> diagnostics;
};

/// `orientation` multiplies every degree: +1 for fields, (-1)^n for the
/// displacement of f(x) = x + u(x).
TorusZeroSet torus_zeros(const TorusChart& chart, const AnalyticField& f, int grid, int orientation);
/// Degree of the piece at the zero, on the box of half-width `radius`.
int zero_degree(const FieldPiece& p, const AnalyticZero& z, double radius);
/// The zero translated by an integer vector, re-hosted in the chart.
TorusZero translate_zero(const TorusChart& chart, const TorusZero& z, const std::vector<long long>& k);
/// Translates k of the periodic zero z (absolute coordinates) that lie in an override box.
std::vector<std::vector<long long>> override_translates(const AnalyticField& f, const TorusZero& z);

struct TorusSampling {
  double delta = 0;           // half the least distance between zeros
  double strong_delta = 0;    // additionally inside every host, minus enclosures
  double epsilon = 0;         // least sampled |u| outside the delta balls
  double strong_epsilon = 0;  // least sampled |u| outside the strong_delta balls
  double max_norm = 0;        // largest sampled |u|
  double certified_norm = 0;  // interval upper bound of |u| over the grid cells
  int grid = 0;               // resolution actually used
  std::vector<std::string> witnesses;
};
/// Deterministic grid sampling of |u| per unit cube and per override box,
/// refined once when the minimum is within 10% of zero relative to the maximum.
TorusSampling sample_torus(const TorusChart& chart, const AnalyticField& f, const TorusZeroSet& zeros, int grid);

/// Distance from the barycentric point to each facet of the simplex with the
/// given vertices, minimized over facets.
double simplex_clearance(const std::vector<std::vector<double>>& vertices, const std::vector<double>& barycentric);

}  // namespace ulef
