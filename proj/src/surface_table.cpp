#include "surface_table.hpp"

#include <algorithm>
#include <string>

#include "ulef/error.hpp"

namespace ulef {

namespace {

void free_reduce(Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse_letter(l)) out.pop_back();
    else out.push_back(l);
  }
  w.swap(out);
}

}  // namespace

SurfaceTable::SurfaceTable(int genus, int budget) : genus_(genus), budget_(budget) {
  Word relator;
  for (int i = 0; i < genus; ++i) {
    Letter a = 2 * (2 * i), b = 2 * (2 * i + 1);
    relator.insert(relator.end(), {a, b, inverse_letter(a), inverse_letter(b)});
  }
  Word inverse = inverse_word(relator);
  const std::size_t n = relator.size();
  for (const Word* r : {&relator, &inverse}) {
    for (std::size_t s = 0; s < n; ++s) {
      Word c(n);
      for (std::size_t k = 0; k < n; ++k) c[k] = (*r)[(s + k) % n];
      relator_cycles_.push_back(c);
    }
  }
  words_.push_back({});
  keys_.push_back(key_of({}));
  adjacency_.push_back(std::vector<int>(letters(), -1));
  layer_start_ = {0, 1};
  buckets_.emplace(keys_[0], 0);
}

void SurfaceTable::set_budget(int budget) {
  std::lock_guard lock(mutex_);
  budget_ = budget;
}

Word SurfaceTable::dehn_reduce(Word w) const {
  free_reduce(w);
  const std::size_t n = 4 * genus_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (const Word& c : relator_cycles_) {
        std::size_t m = 0;
        while (m < n && i + m < w.size() && w[i + m] == c[m]) ++m;
        if (2 * m > n) {
          Word replacement;
          for (std::size_t k = n; k-- > m;) replacement.push_back(inverse_letter(c[k]));
          w.erase(w.begin() + i, w.begin() + i + m);
          w.insert(w.begin() + i, replacement.begin(), replacement.end());
          free_reduce(w);
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

std::size_t SurfaceTable::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto x : k) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
  return h;
}

// Layout: [v (2g entries), z, sentinel, image 1, sentinel, image 2, sentinel,
// image 3]. (v, z)(w, z') = (v + w, z + z' + omega(v, w)) with
// omega(v, w) = sum_i s_i v[a_i] w[b_i], s_i = 1 except s_g = -(g - 1).
namespace {

constexpr std::int64_t kSentinel = -1;

// Letter of <x, y> (0 = x, 1 = x^-1, 2 = y, 3 = y^-1) or -1 for the identity.
int free_image(int map, Letter l, int genus) {
  const int gen = l / 2;
  const bool inv = l % 2;
  const int handle = gen / 2;
  const bool is_b = gen % 2;
  const int last = genus - 1;
  int target = -1;
  switch (map) {
    case 0:  // a1 -> x, a_g -> y, everything else trivial
      if (!is_b && handle == 0) target = 0;
      else if (!is_b && handle == last) target = 2;
      break;
    case 1:  // b1 -> x, b_g -> y
      if (is_b && handle == 0) target = 0;
      else if (is_b && handle == last) target = 2;
      break;
    default:  // a1 -> x, b1 -> y, a_g -> y, b_g -> x
      if (handle == 0) target = is_b ? 2 : 0;
      else if (handle == last) target = is_b ? 0 : 2;
      break;
  }
  if (target < 0) return -1;
  return target + (inv ? 1 : 0);
}

}  // namespace

SurfaceTable::Key SurfaceTable::key_times_letter(const Key& k, Letter l) const {
  const int n = 2 * genus_;
  Key out(k.begin(), k.begin() + n + 1);
  const int gen = l / 2;
  const int sgn = (l % 2 == 0) ? 1 : -1;
  if (gen % 2 == 1) {
    const int i = gen / 2;
    const std::int64_t s = (i == genus_ - 1) ? -(genus_ - 1) : 1;
    out[n] += s * k[2 * i] * sgn;
  }
  out[gen] += sgn;
  std::size_t pos = n + 1;
  for (int map = 0; map < 3; ++map) {
    // k[pos] is the sentinel opening this image.
    std::size_t end = pos + 1;
    while (end < k.size() && k[end] != kSentinel) ++end;
    out.push_back(kSentinel);
    out.insert(out.end(), k.begin() + pos + 1, k.begin() + end);
    const int img = free_image(map, l, genus_);
    if (img >= 0) {
      if (out.back() != kSentinel && out.back() == (img ^ 1)) out.pop_back();
      else out.push_back(img);
    }
    pos = end;
  }
  return out;
}

SurfaceTable::Key SurfaceTable::key_of(const Word& w) const {
  Key k(2 * genus_ + 1, 0);
  for (int map = 0; map < 3; ++map) k.push_back(kSentinel);
  for (Letter l : w) k = key_times_letter(k, l);
  return k;
}

int SurfaceTable::lookup(const Word& reduced, const Key& key) const {
  auto [lo, hi] = buckets_.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    Word probe = reduced;
    const Word inv = inverse_word(words_[it->second]);
    probe.insert(probe.end(), inv.begin(), inv.end());
    if (is_trivial(probe)) return it->second;
  }
  return -1;
}

void SurfaceTable::grow_to(int radius) {
  while (static_cast<int>(layer_start_.size()) - 2 < radius) {
    const int layer = static_cast<int>(layer_start_.size()) - 2;
    if (layer + 1 > budget_) {
      throw ResourceError("surface-group ball radius " + std::to_string(layer + 1) +
                          " exceeds group budget " + std::to_string(budget_) +
                          " (raise group.budget in the group document)");
    }
    const int begin = layer_start_[layer];
    const int end = layer_start_[layer + 1];
    for (int u = begin; u < end; ++u) {
      for (Letter l = 0; l < letters(); ++l) {
        if (adjacency_[u][l] >= 0) continue;
        Word w = words_[u];
        w.push_back(l);
        Key key = key_times_letter(keys_[u], l);
        int found = lookup(w, key);
        if (found < 0) {
          found = static_cast<int>(words_.size());
          words_.push_back(std::move(w));
          keys_.push_back(key);
          adjacency_.push_back(std::vector<int>(letters(), -1));
          buckets_.emplace(std::move(key), found);
        }
        adjacency_[u][l] = found;
        adjacency_[found][inverse_letter(l)] = u;
      }
    }
    layer_start_.push_back(static_cast<int>(words_.size()));
  }
}

int SurfaceTable::find(const Word& w) {
  Word reduced = dehn_reduce(w);
  if (reduced.empty()) return 0;
  std::lock_guard lock(mutex_);
  const Key key = key_of(reduced);
  int found = lookup(reduced, key);
  if (found >= 0) return found;
  // Dehn-reduced words need not be geodesic, so only grow within the budget.
  const int built = static_cast<int>(layer_start_.size()) - 2;
  const int want = std::min(static_cast<int>(reduced.size()), budget_);
  if (built < want) {
    grow_to(want);
    found = lookup(reduced, key);
    if (found >= 0) return found;
  }
  if (static_cast<int>(reduced.size()) > budget_) {
    grow_to(budget_);
    throw ResourceError("surface-group element is longer than the group budget " + std::to_string(budget_) +
                        " (raise group.budget in the group document)");
  }
  throw InternalError("surface-group element missing from its length ball");
}

Word SurfaceTable::word(int index) {
  std::lock_guard lock(mutex_);
  return words_.at(index);
}

int SurfaceTable::ball_size(int radius) {
  std::lock_guard lock(mutex_);
  grow_to(radius);
  return layer_start_[radius + 1];
}

int SurfaceTable::neighbor(int index, Letter l, int radius) {
  std::lock_guard lock(mutex_);
  grow_to(radius);
  if (index >= layer_start_[radius + 1]) return -1;
  // Adjacency of the outermost layer is only complete one layer further.
  int target = adjacency_[index][l];
  if (target < 0) {
    Word w = words_[index];
    w.push_back(l);
    target = lookup(dehn_reduce(w), key_times_letter(keys_[index], l));
  }
  if (target < 0 || target >= layer_start_[radius + 1]) return -1;
  return target;
}

int SurfaceTable::length(int index) {
  std::lock_guard lock(mutex_);
  int k = 0;
  while (layer_start_[k + 1] <= index) ++k;
  return k;
}

}  // namespace ulef
