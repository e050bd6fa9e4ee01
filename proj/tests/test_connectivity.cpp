#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <vector>

#include "spagat/connectivity.hpp"
#include "spagat/generate.hpp"
#include "test_support.hpp"

using namespace spagat;

namespace {

GeometrySet squares(const std::vector<std::pair<double, double>>& origins) {
  GeometrySet geom;
  for (const auto& [x, y] : origins) {
    RegionGeometry rg;
    Ring ring;
    ring.pts = {{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}};
    rg.rings.push_back(ring);
    geom.regions.push_back(rg);
  }
  return geom;
}

// independent reachability count: plain queue-based BFS over an explicit
// adjacency list, no shared code with components()
std::size_t bfs_reachable(const ConnectivityMatrix& c, std::size_t start) {
  std::vector<bool> seen(c.size(), false);
  std::queue<std::size_t> q;
  q.push(start);
  seen[start] = true;
  std::size_t count = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    ++count;
    for (std::size_t v = 0; v < c.size(); ++v)
      if (!seen[v] && c.connected(u, v)) {
        seen[v] = true;
        q.push(v);
      }
  }
  return count;
}

}  // namespace

TEST_CASE("borders touching at an edge connect regions", "[connectivity]") {
  auto geom = squares({{0, 0}, {1, 0}});
  auto c = build_connectivity(geom, {});
  CHECK(c.connected(0, 1));
  CHECK_FALSE(c.connected(0, 0));
}

TEST_CASE("borders touching at a single corner connect regions", "[connectivity]") {
  auto geom = squares({{0, 0}, {1, 1}});
  auto c = build_connectivity(geom, {});
  CHECK(c.connected(0, 1));
}

TEST_CASE("vertex resting on the interior of an edge counts as touching", "[connectivity]") {
  GeometrySet geom;
  RegionGeometry big;
  Ring r1;
  r1.pts = {{0, 0}, {1, 0}, {1, 2}, {0, 2}};
  big.rings.push_back(r1);
  RegionGeometry small;
  Ring r2;
  r2.pts = {{1, 0.5}, {2, 0.5}, {2, 1.5}, {1, 1.5}};
  small.rings.push_back(r2);
  geom.regions = {big, small};
  auto c = build_connectivity(geom, {});
  CHECK(c.connected(0, 1));
}

TEST_CASE("island links only to its nearest mainland region", "[connectivity]") {
  // mainland 0 at distance 10, mainland 1 at distance 12
  auto geom = squares({{0, 0}, {24, 0}, {11, 0}});
  geom.regions[2].island = true;
  auto c = build_connectivity(geom, {});
  CHECK(c.connected(2, 0));
  CHECK_FALSE(c.connected(2, 1));
  CHECK_FALSE(c.connected(0, 1));
}

TEST_CASE("island with no mainland candidates is an error", "[connectivity]") {
  auto geom = squares({{0, 0}, {5, 0}});
  geom.regions[0].island = true;
  geom.regions[1].island = true;
  REQUIRE_THROWS_AS(build_connectivity(geom, {}), InputError);
}

TEST_CASE("explicit links connect disjoint regions", "[connectivity]") {
  auto geom = squares({{0, 0}, {10, 0}});
  auto c = build_connectivity(geom, {{0, 1}});
  CHECK(c.connected(0, 1));
  auto without = build_connectivity(geom, {});
  CHECK_FALSE(without.connected(0, 1));
}

TEST_CASE("link outside the region set is an error", "[connectivity]") {
  auto geom = squares({{0, 0}, {1, 0}});
  REQUIRE_THROWS_AS(build_connectivity(geom, {{0, 5}}), InputError);
}

TEST_CASE("components splits a path when the middle is absent", "[connectivity]") {
  auto c = testsup::path_graph(3);
  auto comps = components({0, 2}, c);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<std::size_t>{0});
  CHECK(comps[1] == std::vector<std::size_t>{2});

  auto whole = components({0, 1, 2}, c);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0] == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("generated 96-region grid is one component", "[connectivity]") {
  GenConfig cfg;
  cfg.n_regions = 96;
  cfg.time_steps = 4;
  cfg.n_plants = 1;
  cfg.seed = 5;
  auto inst = generate_instance(cfg);
  auto c = build_connectivity(inst.geometry, {});
  std::vector<std::size_t> all(96);
  for (std::size_t i = 0; i < 96; ++i) all[i] = i;
  auto comps = components(all, c);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].size() == 96);
  CHECK(bfs_reachable(c, 0) == 96);  // independent oracle
}

TEST_CASE("connectivity matrix is symmetric with a false diagonal", "[connectivity]") {
  Rng rng(77);
  auto c = testsup::random_connected_graph(12, rng);
  for (std::size_t a = 0; a < 12; ++a) {
    CHECK_FALSE(c.connected(a, a));
    for (std::size_t b = 0; b < 12; ++b) CHECK(c.connected(a, b) == c.connected(b, a));
  }
}

TEST_CASE("adding a link never disconnects anything", "[connectivity]") {
  auto geom = squares({{0, 0}, {1, 0}, {2, 0}, {10, 0}});
  auto base = build_connectivity(geom, {});
  auto with_link = build_connectivity(geom, {{2, 3}});
  std::vector<std::size_t> all{0, 1, 2, 3};
  CHECK(components(all, base).size() == 2);
  CHECK(components(all, with_link).size() == 1);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      if (base.connected(a, b)) CHECK(with_link.connected(a, b));
}

TEST_CASE("components partition their input", "[connectivity]") {
  Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 6 + rng.below(6);
    ConnectivityMatrix c(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (rng.uniform() < 0.2) c.link(a, b);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < 0.7) members.push_back(i);
    auto comps = components(members, c);
    std::vector<std::size_t> flattened;
    for (const auto& comp : comps)
      flattened.insert(flattened.end(), comp.begin(), comp.end());
    std::sort(flattened.begin(), flattened.end());
    std::vector<std::size_t> sorted_members = members;
    std::sort(sorted_members.begin(), sorted_members.end());
    CHECK(flattened == sorted_members);  // union equals members, no duplicates
    // pairwise non-adjacent
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (std::size_t j = i + 1; j < comps.size(); ++j)
        for (std::size_t u : comps[i])
          for (std::size_t v : comps[j]) CHECK_FALSE(c.connected(u, v));
  }
}

TEST_CASE("adjacency csv replaces geometry", "[connectivity]") {
  testsup::TempDir tmp("adjacency_csv");
  testsup::write_text(tmp.sub("adjacency.csv"), "a,b\nb,c\n");
  RegionSet regions(std::vector<std::string>{"a", "b", "c"});
  auto pairs = load_region_pairs(tmp.sub("adjacency.csv"), regions);
  auto c = connectivity_from_pairs(3, pairs);
  CHECK(c.connected(0, 1));
  CHECK(c.connected(1, 2));
  CHECK_FALSE(c.connected(0, 2));
}
