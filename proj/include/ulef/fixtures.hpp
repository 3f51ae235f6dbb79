#pragma once

#include <vector>

#include "ulef/complex.hpp"

namespace ulef {

/// Boundary of the tetrahedron (S^2), trivial deck group, outward orientation.
QuotientComplex tetrahedron_boundary();

/// Octahedron S^2 with vertices +-e_i (ids 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z).
struct Octahedron {
  QuotientComplex complex;
  std::vector<std::vector<int>> coordinates;  // integer position of each vertex
};
Octahedron octahedron();

/// 3x3 square grid with a twisted identification; no orientation supplied.
QuotientComplex klein_bottle();

/// Genus-2 surface triangulated from the octagon a1 b1 A1 B1 a2 b2 A2 B2
/// (sides cut in three, a ring of 12 inner vertices and a center), labelled
/// by the surface group so that the cover is the universal cover.
QuotientComplex genus2_surface();

/// Kuhn triangulation of Z^n modulo a full-rank lattice, realized in R^n with
/// grid point p at (p + offset) / scale. The deck group is Z^n acting through
/// the lattice basis, or its image in `group` under `basis_images`.
struct TorusSpec {
  int dimension = 2;
  std::vector<std::vector<int>> basis;  // columns span the lattice (grid units)
  int scale = 1;
  RationalVector offset;
  /// Deck group; empty optional means Z^n with the identity homomorphism.
  std::optional<MarkedGroup> group;
  std::vector<Element> basis_images;
};

class Torus {
 public:
  explicit Torus(TorusSpec spec);

  const QuotientComplex& complex() const { return complex_; }
  int dimension() const { return spec_.dimension; }
  int scale() const { return spec_.scale; }
  const RationalVector& offset() const { return spec_.offset; }

  /// True when the deck group is Z^n acting by lattice translations, so cover
  /// points have Euclidean positions.
  bool euclidean() const { return !spec_.group; }
  /// Euclidean position of a cover vertex (Z^n deck group only).
  RationalVector position(const Cell& vertex) const;
  RationalVector position(const CoverPoint& p) const;
  /// The cover point at Euclidean position x (Z^n deck group only).
  CoverPoint locate(const RationalVector& x) const;
  /// Translation in R^n by a deck element (Z^n deck group only).
  RationalVector translation(const Element& deck) const;

 private:
  std::vector<int> canonical(std::vector<int> p) const;
  std::pair<int, std::vector<int>> reduce(const std::vector<int>& p) const;

  TorusSpec spec_;
  QuotientComplex complex_;
  std::vector<std::vector<int>> hnf_;  // lower-triangular lattice basis (columns)
  RationalMatrix basis_inverse_;
  std::vector<std::vector<int>> rep_;
  std::map<std::vector<int>, int> class_of_;
};

/// m x m square torus over Z^2 (m >= 3) with the given offset.
Torus square_torus(int m, RationalVector offset = {Rational(0), Rational(0)});
/// The 7-vertex torus as the quotient of the Kuhn triangulation of Z^2 by
/// the kernel of (a, b) -> a + 2b mod 7, deck group Z^2.
Torus seven_vertex_torus();
/// 3 x 3 torus with the cyclic 3-fold cover that unwraps the second
/// direction three times (deck group Z/3).
Torus cyclic_torus();
/// The torus used for the sine displacement and sine field models:
/// 3 x 3 grid over Z^2, offset (1/7, 3/7) so the four half-period points lie
/// in the interior of top simplices before and after one barycentric subdivision.
Torus sine_torus();

}  // namespace ulef
