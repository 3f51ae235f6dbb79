#pragma once

#include <vector>

namespace ulef {

/// Exact integral max-flow by shortest augmenting paths in phases (Dinic).
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  /// Returns the arc index; arc ^ 1 is its residual partner.
  int add_arc(int from, int to, long long capacity);
  long long run(int source, int sink);
  long long flow(int arc) const { return initial_[arc] - capacity_[arc]; }

 private:
  bool levels(int source, int sink);
  long long push(int v, int sink, long long limit);

  int nodes_;
  std::vector<int> head_, to_, next_;
  std::vector<long long> capacity_, initial_;
  std::vector<int> level_, cursor_;
};

}  // namespace ulef
