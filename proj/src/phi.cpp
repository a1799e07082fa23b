#include "kheat/phi.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace kheat {

std::optional<Integer> PhiCache::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

void PhiCache::insert(const std::string& key, const Integer& value) {
  std::unique_lock lock(mutex_);
  auto [it, fresh] = values_.emplace(key, value);
  if (fresh) {
    unsaved_.push_back(key);
  } else if (it->second != value) {
    throw std::logic_error("phi cache conflict for key " + key);
  }
}

std::size_t PhiCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

void PhiCache::clear() {
  std::unique_lock lock(mutex_);
  values_.clear();
  unsaved_.clear();
}

std::size_t PhiCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::size_t loaded = 0;
  std::string line;
  std::unique_lock lock(mutex_);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("malformed phi cache record: " + line);
    Integer value;
    if (value.set_str(line.substr(tab + 1), 10) != 0 || value < 0)
      throw std::runtime_error("malformed phi value in cache: " + line);
    auto key = line.substr(0, tab);
    auto [it, fresh] = values_.emplace(key, value);
    if (!fresh && it->second != value) throw std::runtime_error("conflicting phi cache record: " + line);
    ++loaded;
  }
  unsaved_.clear();
  return loaded;
}

std::size_t PhiCache::append_new(const std::filesystem::path& path) {
  std::string buffer;
  std::size_t count = 0;
  {
    std::unique_lock lock(mutex_);
    for (const auto& key : unsaved_) {
      buffer += key;
      buffer += '\t';
      buffer += values_.at(key).get_str();
      buffer += '\n';
      ++count;
    }
    unsaved_.clear();
  }
  if (buffer.empty()) return 0;
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("cannot open phi cache " + path.string());
  const auto written = ::write(fd, buffer.data(), buffer.size());
  ::close(fd);
  if (written != static_cast<ssize_t>(buffer.size()))
    throw std::runtime_error("short write to phi cache " + path.string());
  return count;
}

namespace {

Integer phi_rec(const PointedGraph& g, PhiCache* cache) {
  if (!is_strongly_connected(g)) return 0;
  const PointedGraph h = smooth_all(g);
  const int n = h.vertex_count();
  if (n == 1) return factorial(h(0, 0));
  std::string key;
  if (cache) {
    key = canonical_form(h).key;
    if (auto hit = cache->find(key)) return *hit;
  }
  Integer total = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (const int m = h(u, v); m > 0) {
        const Integer sub = phi_rec(delete_edge(h, u, v), cache);
        if (sub != 0) total += m * sub;
      }
  if (cache) cache->insert(key, total);
  return total;
}

class ReductionCounter {
 public:
  explicit ReductionCounter(bool memoize) : memoize_(memoize) {}

  Integer count(const PointedGraph& g) {
    const int n = g.vertex_count();
    if (n == 1 && g.edge_count() == 0) return 1;
    const int w = g.weight();
    if (w <= 0) throw std::logic_error("reduction reached weight 0 before the bare point");
    if (memoize_) {
      if (auto it = memo_.find(g.graph().adjacency()); it != memo_.end()) return it->second;
    }
    Integer total = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        const int m = g(u, v);
        if (m == 0 || !is_redundant(g, u, v)) continue;
        const PointedGraph removed = delete_edge(g, u, v);
        const PointedGraph next = smooth_all(removed);
        if (removed.weight() != w - 1 || next.weight() != w - 1)
          throw std::logic_error("strong reduction step changed the weight by other than one");
        total += m * count(next);
      }
    if (memoize_) memo_.emplace(g.graph().adjacency(), total);
    return total;
  }

 private:
  bool memoize_;
  std::map<std::vector<int>, Integer> memo_;
};

}  // namespace

Integer phi(const PointedGraph& g, PhiCache& cache) { return phi_rec(g, &cache); }

Integer phi(const PointedGraph& g) {
  PhiCache local;
  return phi_rec(g, &local);
}

Integer phi_uncached(const PointedGraph& g) { return phi_rec(g, nullptr); }

Integer count_strong_reductions(const PointedGraph& g, bool memoize) {
  if (!is_strongly_connected(g)) return 0;
  ReductionCounter counter(memoize);
  return counter.count(smooth_all(g));
}

LoopSplit phi_loop_split(const PointedGraph& g) {
  LoopSplit split;
  split.loops = g(0, 0);
  split.binomial = binomial(g.weight(), split.loops);
  split.factor = split.binomial * factorial(split.loops);
  split.stripped = g;
  if (split.loops) split.stripped.remove_edges(0, 0, split.loops);
  return split;
}

}  // namespace kheat
