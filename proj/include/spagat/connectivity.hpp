#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spagat/csv.hpp"
#include "spagat/geometry.hpp"
#include "spagat/types.hpp"

namespace spagat {

// Symmetric boolean region adjacency with a false diagonal.
class ConnectivityMatrix {
 public:
  ConnectivityMatrix() = default;
  explicit ConnectivityMatrix(std::size_t n) : n_(n), v_(n * n, 0) {}

  std::size_t size() const { return n_; }

  bool connected(std::size_t a, std::size_t b) const { return v_[a * n_ + b] != 0; }

  void link(std::size_t a, std::size_t b) {
    if (a == b) return;  // diagonal stays false
    v_[a * n_ + b] = 1;
    v_[b * n_ + a] = 1;
  }

  std::vector<std::size_t> neighbors(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < n_; ++b)
      if (connected(a, b)) out.push_back(b);
    return out;
  }

  bool operator==(const ConnectivityMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> v_;
};

// Vertices within this tolerance count as the same point when deciding
// whether two borders touch.
inline constexpr double kBorderTouchEps = 1e-9;

// Adjacency is the OR of three rules: borders touch within eps, island to its
// nearest non-island region (minimum vertex-to-vertex distance), and explicit
// transmission/pipeline link pairs.
inline ConnectivityMatrix build_connectivity(const GeometrySet& geom,
                                             const std::vector<std::pair<std::size_t, std::size_t>>& links,
                                             double eps = kBorderTouchEps) {
  const std::size_t n = geom.size();
  ConnectivityMatrix c(n);

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (detail::boundary_distance(geom.regions[a], geom.regions[b]) <= eps) c.link(a, b);

  for (std::size_t a = 0; a < n; ++a) {
    if (!geom.regions[a].island) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t nearest = n;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || geom.regions[b].island) continue;
      const double dist = detail::vertex_distance(geom.regions[a], geom.regions[b]);
      if (dist < best) {
        best = dist;
        nearest = b;
      }
    }
    if (nearest == n)
      throw InputError("island region index " + std::to_string(a) +
                       " has no mainland candidates");
    c.link(a, nearest);
  }

  for (const auto& [a, b] : links) {
    if (a >= n || b >= n)
      throw InputError("link references region index outside the region set");
    c.link(a, b);
  }
  return c;
}

// Explicit adjacency pairs may replace geometry entirely.
inline ConnectivityMatrix connectivity_from_pairs(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  ConnectivityMatrix c(n);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n)
      throw InputError("adjacency pair references region index outside the region set");
    c.link(a, b);
  }
  return c;
}

// adjacency.csv / links.csv: `region_a,region_b`, one pair per line, no header.
inline std::vector<std::pair<std::size_t, std::size_t>> load_region_pairs(
    const std::string& path, const RegionSet& regions) {
  auto rows = detail::read_csv(path);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& row : rows) {
    if (row.size() != 2)
      throw InputError("bad pair row in " + path + " (expected 'region_a,region_b')");
    pairs.emplace_back(regions.index(row[0]), regions.index(row[1]));
  }
  return pairs;
}

// Connected components of the subgraph induced by `members`. Each component
// is sorted ascending; components are ordered by their smallest member.
inline std::vector<std::vector<std::size_t>> components(const std::vector<std::size_t>& members,
                                                        const ConnectivityMatrix& c) {
  std::vector<std::size_t> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint8_t> in_members(c.size(), 0);
  for (std::size_t m : sorted) {
    if (m >= c.size()) throw InputError("members contain region index outside the region set");
    in_members[m] = 1;
  }

  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::uint8_t> visited(c.size(), 0);
  for (std::size_t start : sorted) {
    if (visited[start]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack{start};
    visited[start] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (std::size_t v = 0; v < c.size(); ++v) {
        if (!in_members[v] || visited[v] || !c.connected(u, v)) continue;
        visited[v] = 1;
        stack.push_back(v);
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace spagat
