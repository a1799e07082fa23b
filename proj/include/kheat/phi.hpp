#pragma once

// The reduction-counting invariant phi of pointed graphs:
//   phi = 0 when the graph is not strongly connected,
//   phi = l! for the bare distinguished vertex carrying l loops,
//   phi is unchanged by smoothing a degree-(1,1) ordinary vertex,
//   otherwise phi = sum over individual edges e of phi(G - e).

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "kheat/arith.hpp"
#include "kheat/digraph.hpp"

namespace kheat {

/// Environment variable naming the default on-disk phi cache.
inline constexpr const char* kPhiCacheEnv = "KHEAT_PHI_CACHE";

/// Canonical key -> phi. Concurrent readers, serialized writers; a key is
/// written at most once and re-inserting an equal value is a no-op.
class PhiCache {
 public:
  PhiCache() = default;
  PhiCache(const PhiCache&) = delete;
  PhiCache& operator=(const PhiCache&) = delete;

  std::optional<Integer> find(const std::string& key) const;
  /// Throws std::logic_error if the key already holds a different value.
  void insert(const std::string& key, const Integer& value);
  std::size_t size() const;
  void clear();

  /// Reads "key<TAB>value" records. Returns the number of records loaded.
  std::size_t load(const std::filesystem::path& path);
  /// Appends every entry inserted since construction / the last load or
  /// append, using a single write on a file opened in append mode.
  std::size_t append_new(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Integer> values_;
  std::vector<std::string> unsaved_;
};

Integer phi(const PointedGraph& g, PhiCache& cache);
/// phi with a private, throw-away cache.
Integer phi(const PointedGraph& g);
/// Straight recursion with no memoization; for small graphs and tests.
Integer phi_uncached(const PointedGraph& g);

/// Counts sequences that remove one redundant edge at a time (parallel copies
/// are distinct choices), eagerly smoothing degree-(1,1) ordinary vertices,
/// until the bare distinguished vertex remains. Works on labelled graphs; with
/// memoize the count is cached per exact adjacency matrix, never per
/// isomorphism class. Throws std::logic_error if a reduction path does not
/// remove exactly weight(g) edges.
Integer count_strong_reductions(const PointedGraph& g, bool memoize = true);

struct LoopSplit {
  int loops = 0;
  Integer binomial;       // C(weight(g), loops)
  Integer factor;         // binomial * loops!
  PointedGraph stripped;  // g without its loops at the point
};

/// For strongly connected g: phi(g) = factor * phi(stripped). Since
/// |Aut g| = loops! |Aut stripped|, phi/|Aut| scales by binomial alone.
LoopSplit phi_loop_split(const PointedGraph& g);

}  // namespace kheat
