#pragma once

#include <utility>
#include <vector>

namespace sepsim {

// Union-find with union by size and path halving.
class DisjointSets {
public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)),
                                 size_(static_cast<std::size_t>(n), 1) {
    for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
  }

  int find(int i) {
    while (parent_[static_cast<std::size_t>(i)] != i) {
      parent_[static_cast<std::size_t>(i)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(i)])];
      i = parent_[static_cast<std::size_t>(i)];
    }
    return i;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)])
      std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  }

  int component_size(int i) { return size_[static_cast<std::size_t>(find(i))]; }

private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// Undirected graph on the window sites; for Harris windows it records
// which edges rang in (r t0, (r+1) t0].
struct WindowGraph {
  int site_count = 0;
  std::vector<std::pair<int, int>> edges;  // canonical x < y, sorted
  int window_index = 0;
  double window_width = 0.0;
};

struct ComponentPartition {
  std::vector<int> component_of;  // site -> component id (ids are 0..count-1)
  std::vector<int> sizes;
  int count = 0;

  // Site lists per component, each sorted.
  std::vector<std::vector<int>> members() const;
};

ComponentPartition components(const WindowGraph& graph);

}  // namespace sepsim
