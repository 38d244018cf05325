#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace spinmarket {

enum class GraphKind { fcc, custom };

/// Immutable agent interaction network stored as compressed adjacency lists.
///
/// Adjacency is symmetric, has no self-loops and no duplicate entries. Each
/// site's neighbor list is sorted ascending. Once built a graph is never
/// modified, so it can be shared freely between worker threads.
class NeighborGraph {
 public:
  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const int> neighbors(std::size_t site) const noexcept {
    return {targets_.data() + offsets_[site], targets_.data() + offsets_[site + 1]};
  }
  std::size_t degree(std::size_t site) const noexcept {
    return offsets_[site + 1] - offsets_[site];
  }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  std::size_t max_degree() const noexcept;
  GraphKind kind() const noexcept { return kind_; }
  /// Conventional-cell count per direction; 0 for custom graphs.
  int linear_size() const noexcept { return linear_size_; }

  /// One `site,neighbor` row per directed pair, header included.
  void write_adjacency_csv(std::ostream& out) const;

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;

 private:
  friend NeighborGraph build_fcc(int);
  friend NeighborGraph build_custom(std::span<const std::pair<int, int>>, int);
  NeighborGraph(std::vector<std::vector<int>> lists, GraphKind kind, int linear_size);

  std::vector<std::size_t> offsets_{0};
  std::vector<int> targets_;
  GraphKind kind_ = GraphKind::custom;
  int linear_size_ = 0;
};

/// Face-centered cubic lattice of L^3 conventional cells with periodic
/// boundaries. Site index = basis + 4 * (x + L*y + L*L*z), basis order
/// (0,0,0), (1/2,1/2,0), (1/2,0,1/2), (0,1/2,1/2). Requires L >= 2.
NeighborGraph build_fcc(int L);

/// Graph holding exactly the given undirected edges. Duplicates collapse.
/// Throws on self-loops or out-of-range indices.
NeighborGraph build_custom(std::span<const std::pair<int, int>> edges, int n_sites);

}  // namespace spinmarket
