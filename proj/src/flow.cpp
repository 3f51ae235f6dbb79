#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "maxflow.hpp"

namespace ulef {

MaxFlow::MaxFlow(int nodes) : nodes_(nodes), head_(nodes, -1) {}

int MaxFlow::add_arc(int from, int to, long long capacity) {
  const int arc = static_cast<int>(to_.size());
  for (auto [a, b, c] : {std::tuple{from, to, capacity}, std::tuple{to, from, 0LL}}) {
    to_.push_back(b);
    next_.push_back(head_[a]);
    head_[a] = static_cast<int>(to_.size()) - 1;
    capacity_.push_back(c);
    initial_.push_back(c);
  }
  return arc;
}

bool MaxFlow::levels(int source, int sink) {
  level_.assign(nodes_, -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int a = head_[v]; a >= 0; a = next_[a])
      if (capacity_[a] > 0 && level_[to_[a]] < 0) {
        level_[to_[a]] = level_[v] + 1;
        queue.push(to_[a]);
      }
  }
  return level_[sink] >= 0;
}

long long MaxFlow::push(int v, int sink, long long limit) {
  if (v == sink) return limit;
  for (int& a = cursor_[v]; a >= 0; a = next_[a]) {
    const int w = to_[a];
    if (capacity_[a] <= 0 || level_[w] != level_[v] + 1) continue;
    const long long got = push(w, sink, std::min(limit, capacity_[a]));
    if (got > 0) {
      capacity_[a] -= got;
      capacity_[a ^ 1] += got;
      return got;
    }
  }
  return 0;
}

long long MaxFlow::run(int source, int sink) {
  long long total = 0;
  while (levels(source, sink)) {
    cursor_ = head_;
    while (long long got = push(source, sink, std::numeric_limits<long long>::max())) total += got;
  }
  return total;
}

}  // namespace ulef
