#pragma once

#include <map>
#include <vector>

#include "ulef/complex.hpp"

namespace ulef {

/// Integer k-chain on the cover: a deck-invariant part given per quotient
/// simplex plus a finitely supported correction. Cochains use the same shape.
struct PeriodicChain {
  int degree = 0;
  std::vector<long long> equivariant;
  std::map<Cell, long long> exceptional;

  static PeriodicChain zero(const QuotientComplex& q, int degree);
  long long value(const Cell& c) const;
  bool finite() const;
  void add(const Cell& c, long long v);
  friend bool operator==(const PeriodicChain&, const PeriodicChain&) = default;
};
using PeriodicCochain = PeriodicChain;

PeriodicChain operator+(const PeriodicChain& a, const PeriodicChain& b);
PeriodicChain operator*(long long s, const PeriodicChain& a);

/// Bounded function on G: constant + finitely supported part.
struct ClassFunction {
  long long constant = 0;
  std::map<Element, long long> finite;

  long long value(const Element& g) const;
  long long sup_norm() const;
  void add(const Element& g, long long v);
  friend bool operator==(const ClassFunction&, const ClassFunction&) = default;
};

/// Operations below throw ResourceError when a cell they produce lies outside
/// the materialized region of `pc`.
PeriodicChain boundary(const PeriodicComplex& pc, const PeriodicChain& c);
/// (du)(s) = u(ds).
PeriodicCochain coboundary(const PeriodicComplex& pc, const PeriodicCochain& u);
/// (-1)^(p+1) du, the sign convention under which the cap product satisfies
/// d(u cap c) = (du) cap c + (-1)^p u cap dc.
PeriodicCochain signed_coboundary(const PeriodicComplex& pc, const PeriodicCochain& u);
/// Sum of the oriented top simplices. Throws OrientationError when the
/// quotient carries no coherent orientation.
PeriodicChain fundamental_cycle(const PeriodicComplex& pc);
/// u cap s = (-1)^(p(q-p)) u(s|[q-p..q]) s|[0..q-p] on ordered simplices.
PeriodicChain cap(const PeriodicComplex& pc, const PeriodicCochain& u, const PeriodicChain& c);
/// Kronecker pairing; the chain must be finitely supported.
long long pairing(const PeriodicCochain& u, const PeriodicChain& c);
/// g -> sum of coefficients of the 0-chain over vertices in g K.
ClassFunction project_to_group(const PeriodicComplex& pc, const PeriodicChain& c, const FundamentalDomain& fd);

json chain_to_json(const MarkedGroup& g, const PeriodicChain& c);
PeriodicChain chain_from_json(const QuotientComplex& q, const json& doc);

/// Rational simplicial homology of the quotient complex (labels ignored).
struct Homology {
  std::vector<int> betti;
  /// boundary[k] is the matrix of d_k : C_k -> C_{k-1} (rows: (k-1)-simplices).
  std::vector<RationalMatrix> boundary;
  /// Cycle representatives of a basis of H_k, as coefficient vectors.
  std::vector<std::vector<RationalVector>> basis;
};
Homology quotient_homology(const QuotientComplex& q);

/// Lefschetz number of a simplicial map from the t-fold barycentric
/// subdivision of q to q, given on vertices. Homology traces are checked
/// against the chain-level trace.
long long lefschetz_number_quotient(const QuotientComplex& q, const Subdivision& sd,
                                    const std::vector<int>& vertex_map);

}  // namespace ulef
