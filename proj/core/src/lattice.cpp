#include "spinmarket/lattice.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>

#include "spinmarket/error.hpp"

namespace spinmarket {

namespace {

// Half-cell integer coordinates of the four FCC basis sites.
constexpr std::array<std::array<int, 3>, 4> kBasis{{{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};

// Nearest-neighbor displacements in half-cell units: permutations of (+-1, +-1, 0).
constexpr std::array<std::array<int, 3>, 12> kFccShell{{
    {1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0},
    {1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
    {0, 1, 1}, {0, 1, -1}, {0, -1, 1}, {0, -1, -1},
}};

int wrap(int v, int period) { return ((v % period) + period) % period; }

}  // namespace

NeighborGraph::NeighborGraph(std::vector<std::vector<int>> lists, GraphKind kind, int linear_size)
    : kind_(kind), linear_size_(linear_size) {
  offsets_.reserve(lists.size() + 1);
  for (auto& nbrs : lists) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    targets_.insert(targets_.end(), nbrs.begin(), nbrs.end());
    offsets_.push_back(targets_.size());
  }
}

std::size_t NeighborGraph::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 0; i < size(); ++i) best = std::max(best, degree(i));
  return best;
}

void NeighborGraph::write_adjacency_csv(std::ostream& out) const {
  out << "site,neighbor\n";
  for (std::size_t i = 0; i < size(); ++i)
    for (int j : neighbors(i)) out << i << ',' << j << '\n';
}

NeighborGraph build_fcc(int L) {
  if (L < 2)
    throw Error("build_fcc: linear size L must be >= 2 (got " + std::to_string(L) + ")");
  const int period = 2 * L;
  const auto index_of = [&](int X, int Y, int Z) {
    X = wrap(X, period);
    Y = wrap(Y, period);
    Z = wrap(Z, period);
    int basis = 0;
    for (int b = 0; b < 4; ++b)
      if (kBasis[b][0] == X % 2 && kBasis[b][1] == Y % 2 && kBasis[b][2] == Z % 2) basis = b;
    return basis + 4 * (X / 2 + L * (Y / 2) + L * L * (Z / 2));
  };

  std::vector<std::vector<int>> lists(static_cast<std::size_t>(4) * L * L * L);
  for (int z = 0; z < L; ++z)
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x)
        for (int b = 0; b < 4; ++b) {
          const int site = b + 4 * (x + L * y + L * L * z);
          const int X = 2 * x + kBasis[b][0];
          const int Y = 2 * y + kBasis[b][1];
          const int Z = 2 * z + kBasis[b][2];
          auto& nbrs = lists[site];
          nbrs.reserve(kFccShell.size());
          for (const auto& d : kFccShell) nbrs.push_back(index_of(X + d[0], Y + d[1], Z + d[2]));
        }
  return NeighborGraph(std::move(lists), GraphKind::fcc, L);
}

NeighborGraph build_custom(std::span<const std::pair<int, int>> edges, int n_sites) {
  if (n_sites < 0) throw Error("build_custom: negative site count");
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(n_sites));
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_sites || j >= n_sites)
      throw Error("build_custom: edge (" + std::to_string(i) + "," + std::to_string(j) +
                  ") out of range for " + std::to_string(n_sites) + " sites");
    if (i == j) throw Error("build_custom: self-loop at site " + std::to_string(i));
    lists[i].push_back(j);
    lists[j].push_back(i);
  }
  return NeighborGraph(std::move(lists), GraphKind::custom, 0);
}

}  // namespace spinmarket
