#pragma once

#include <map>
#include <string>
#include <vector>

#include "ulef/chain.hpp"
#include "ulef/group.hpp"
#include "ulef/rational.hpp"

namespace ulef {

/// Integer 1-chain on the Cayley graph. Key (x, i) is the edge x -> x * s_i.
struct GraphChain {
  std::map<std::pair<Element, int>, long long> edges;

  /// Adds v along the step x -> y = x * l.
  void add(const Element& x, Letter l, const Element& y, long long v);
  long long sup_norm() const;
  /// Vertex masses of the boundary (head minus tail).
  std::map<Element, long long> boundary(const MarkedGroup& g) const;
};

json class_function_to_json(const MarkedGroup& g, const ClassFunction& f);
ClassFunction class_function_from_json(const MarkedGroup& g, const json& doc);
/// (h . f)(x) = f(h^-1 x).
ClassFunction translate(const MarkedGroup& g, const Element& h, const ClassFunction& f);
long long total_mass(const ClassFunction& f);  // sum of |finite part|

struct FolnerResult {
  int t = 0;
  std::size_t size = 0;
  std::size_t boundary = 0;
  Rational ratio;
};
/// Smallest scheme index t <= max_t with boundary/size < delta.
FolnerResult folner_search(const MarkedGroup& g, const Rational& delta, int r = 1, int max_t = 256);

struct ProbeRow {
  int radius = 0;
  std::size_t ball = 0;
  std::size_t boundary = 0;  // ball elements with a neighbour outside
  Rational ratio;
};
std::vector<ProbeRow> isoperimetric_probe(const MarkedGroup& g, const std::vector<int>& radii);

struct MassBound {
  GraphChain chain;
  long long bound = 0;
  /// Radius of the region; db = c holds on ball(radius - 1), or everywhere
  /// when `global`.
  int radius = 0;
  bool global = false;
};
/// Telescoping chain for a finitely supported function: zero total mass is
/// routed to a hub along geodesics, otherwise each mass runs out along a
/// geodesic ray truncated at the sphere of the given radius.
MassBound bound_finite_mass(const MarkedGroup& g, const ClassFunction& c, int radius);

struct FlowResult {
  int radius = 0;
  long long capacity = 0;
  bool feasible = false;
  long long required = 0;
  long long achieved = 0;
  GraphChain chain;
};
/// Integral flow on ball(radius) with edge capacity `capacity` whose
/// boundary equals c on ball(radius - 1); the sphere absorbs the excess.
FlowResult flow_certificate(const MarkedGroup& g, const ClassFunction& c, int radius, long long capacity);
/// Least feasible capacity at this radius.
long long minimal_capacity(const MarkedGroup& g, const ClassFunction& c, int radius);

struct DecideOptions {
  std::vector<int> radii{3, 4, 5, 6};
  /// Uniform edge bound for flow certificates; 0 picks the least capacity
  /// feasible at the largest radius.
  long long capacity = 0;
  int folner_steps = 8;
  int boundary_radius = 6;
};

struct ClassCertificate {
  std::string verdict;  // nonzero-by-mean, zero-by-boundary, zero-by-truncated-flow, inconclusive
  ClassFunction function;
  json payload;
  bool verified = false;
  std::string verifier_detail;
};

ClassCertificate decide_class(const MarkedGroup& g, const ClassFunction& f, const DecideOptions& options = {});
json certificate_to_json(const MarkedGroup& g, const ClassCertificate& cert);
/// Re-checks a certificate document from scratch. On failure `detail` says why.
bool verify_certificate(const json& doc, std::string* detail = nullptr);

}  // namespace ulef
