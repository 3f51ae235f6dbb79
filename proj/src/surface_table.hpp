#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "ulef/group.hpp"

namespace ulef {

/// Normal forms for the genus-g surface group
/// < a1, b1, ..., ag, bg | [a1,b1]...[ag,bg] >.
///
/// Generator 2i is a_{i+1}, generator 2i+1 is b_{i+1}. Triviality is decided
/// by Dehn's algorithm. Elements are numbered by a breadth-first enumeration
/// of the Cayley graph which visits words in shortlex order, so the stored
/// word of every element is its shortlex-least geodesic representative.
/// Candidates for equality are bucketed by homomorphic images: a
/// Heisenberg-type nilpotent quotient and three maps onto the free group
/// <x, y> (a1,a2 -> x,y; b1,b2 -> x,y; a1,b1,a2,b2 -> x,y,y,x).
class SurfaceTable {
 public:
  SurfaceTable(int genus, int budget);

  int genus() const { return genus_; }
  int letters() const { return 4 * genus_; }

  Word dehn_reduce(Word w) const;
  bool is_trivial(const Word& w) const { return dehn_reduce(w).empty(); }

  /// Index of the element represented by w; grows the table as needed.
  int find(const Word& w);
  Word word(int index);
  /// Number of elements of length <= radius (grows the table).
  int ball_size(int radius);
  /// Product of element `index` with letter l, or -1 if it lies outside the
  /// currently built radius bound `radius`.
  int neighbor(int index, Letter l, int radius);
  int length(int index);

  void set_budget(int budget);

 private:
  /// Heisenberg coordinates followed by the reduced free-group images,
  /// separated by a sentinel.
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  Key key_of(const Word& w) const;
  Key key_times_letter(const Key& k, Letter l) const;
  int lookup(const Word& reduced, const Key& key) const;
  void grow_to(int radius);

  int genus_;
  int budget_;
  std::vector<Word> relator_cycles_;
  std::mutex mutex_;
  std::vector<Word> words_;
  std::vector<Key> keys_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> layer_start_;  // layer_start_[k] = first index of length k
  std::unordered_multimap<Key, int, KeyHash> buckets_;
};

}  // namespace ulef
