#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "spagat/distance.hpp"
#include "test_support.hpp"

using namespace spagat;
using testsup::DatasetBuilder;

namespace {

// Independent oracle: recomputes the pairwise distance straight from the
// definition with long-double accumulation and reversed iteration order. No
// shared code with the implementation path.
long double oracle_distance(const NormalizedDataset& nd, std::size_t a, std::size_t b) {
  const Dataset& d = nd.data;
  long double total = 0.0L;
  for (std::size_t si = d.specs.size(); si-- > 0;) {
    const auto& spec = d.specs[si];
    const long double w = spec.grouping_weight;
    if (w == 0.0L) continue;
    const Matrix& table = d.tables[si];
    switch (spec.dimension) {
      case Dimension::regional_1d: {
        const long double diff = static_cast<long double>(table(a, 0)) - table(b, 0);
        total += w * diff * diff;
        break;
      }
      case Dimension::regional_2d_time: {
        for (std::size_t t = d.horizon.steps; t-- > 0;) {
          const long double diff = static_cast<long double>(table(a, t)) - table(b, t);
          total += w * diff * diff;
        }
        break;
      }
      case Dimension::connection_2d: {
        const long double s =
            (static_cast<long double>(table(a, b)) + static_cast<long double>(table(b, a))) / 2.0L;
        total += w * (1.0L - s) * (1.0L - s);
        break;
      }
    }
  }
  return total;
}

NormalizedDataset random_normalized(std::size_t n, std::size_t T, Rng& rng) {
  DatasetBuilder builder(testsup::region_ids(n), T);
  std::vector<double> v1(n), v2(n);
  for (auto& v : v1) v = rng.uniform();
  for (auto& v : v2) v = rng.uniform();
  builder.attr_1d("C1", "Investment per capacity", AggRule::mean, v1);
  builder.attr_1d("C2", "Interest rate", AggRule::mean, v2);
  std::vector<std::vector<double>> rows1(n, std::vector<double>(T)), rows2 = rows1;
  for (auto& row : rows1)
    for (auto& v : row) v = rng.uniform();
  for (auto& row : rows2)
    for (auto& v : row) v = rng.uniform();
  builder.attr_2d("C1", "Fixed operation rate", AggRule::sum, rows1);
  builder.attr_2d("C2", "Maximum operation rate", AggRule::mean, rows2);
  std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && rng.uniform() < 0.6) cells.emplace_back(a, b, rng.uniform());
  builder.attr_conn("Cable", "Maximum capacity", AggRule::sum, cells);
  return NormalizedDataset{builder.build()};
}

}  // namespace

TEST_CASE("regional 1-d distance", "[distance]") {
  NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2))
                           .attr_1d("X", "Fixed capacity", AggRule::sum, {0.2, 0.5})
                           .build()};
  CHECK(regional_1d_distance(nd, 0, 0) == 0.0);
  CHECK_THAT(regional_1d_distance(nd, 0, 1), Catch::Matchers::WithinRel(0.09, 1e-12));
}

TEST_CASE("regional 1-d distance sums over attributes", "[distance]") {
  Rng rng(9);
  std::vector<double> a{rng.uniform(), rng.uniform(), rng.uniform()};
  std::vector<double> b{rng.uniform(), rng.uniform(), rng.uniform()};
  NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2))
                           .attr_1d("X", "A1", AggRule::mean, {a[0], b[0]})
                           .attr_1d("X", "A2", AggRule::mean, {a[1], b[1]})
                           .attr_1d("X", "A3", AggRule::mean, {a[2], b[2]})
                           .build()};
  long double expected = 0.0L;
  for (int i = 0; i < 3; ++i)
    expected += (static_cast<long double>(a[i]) - b[i]) * (static_cast<long double>(a[i]) - b[i]);
  CHECK_THAT(regional_1d_distance(nd, 0, 1),
             Catch::Matchers::WithinRel(static_cast<double>(expected), 1e-12));
}

TEST_CASE("regional 2-d distance", "[distance]") {
  SECTION("identical series give zero") {
    NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2), 3)
                             .attr_2d("X", "Rate", AggRule::mean, {{0.1, 0.5, 0.9}, {0.1, 0.5, 0.9}})
                             .build()};
    CHECK(regional_2d_distance(nd, 0, 1) == 0.0);
  }
  SECTION("opposed unit series give 2") {
    NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2), 2)
                             .attr_2d("X", "Rate", AggRule::mean, {{0.0, 1.0}, {1.0, 0.0}})
                             .build()};
    CHECK(regional_2d_distance(nd, 0, 1) == 2.0);
  }
  SECTION("long random series matches the oracle to 1e-12") {
    Rng rng(31);
    const std::size_t T = 8760;
    std::vector<std::vector<double>> rows(2, std::vector<double>(T));
    for (auto& row : rows)
      for (auto& v : row) v = rng.uniform();
    NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2), T)
                             .attr_2d("X", "Rate", AggRule::mean, rows)
                             .build()};
    const long double expected = oracle_distance(nd, 0, 1);
    CHECK_THAT(regional_2d_distance(nd, 0, 1),
               Catch::Matchers::WithinRel(static_cast<double>(expected), 1e-12));
  }
}

TEST_CASE("connection distance turns link strength into distance", "[distance]") {
  SECTION("strongest link contributes zero, absent link contributes one") {
    NormalizedDataset strong{DatasetBuilder(testsup::region_ids(2))
                                 .attr_conn("Cable", "Capacity", AggRule::sum,
                                            {{0, 1, 1.0}, {1, 0, 1.0}})
                                 .build()};
    CHECK(connection_2d_distance(strong, 0, 1) == 0.0);
    NormalizedDataset none{DatasetBuilder(testsup::region_ids(2))
                               .attr_conn("Cable", "Capacity", AggRule::sum, {})
                               .build()};
    CHECK(connection_2d_distance(none, 0, 1) == 1.0);
  }
  SECTION("two attributes with values 0.25 and 0.5 give 0.8125") {
    NormalizedDataset nd{DatasetBuilder(testsup::region_ids(2))
                             .attr_conn("Cable", "Capacity", AggRule::sum,
                                        {{0, 1, 0.25}, {1, 0, 0.25}})
                             .attr_conn("Pipe", "Capacity", AggRule::sum,
                                        {{0, 1, 0.5}, {1, 0, 0.5}})
                             .build()};
    CHECK(connection_2d_distance(nd, 0, 1) == 0.8125);  // 0.5625 + 0.25, exact in binary
  }
}

TEST_CASE("pairwise distances decompose exactly into the three parts", "[distance]") {
  Rng rng(41);
  NormalizedDataset nd = random_normalized(7, 20, rng);
  DistanceMatrix D = pairwise_distances(nd);
  for (std::size_t a = 0; a < 7; ++a) {
    CHECK(D(a, a) == 0.0);
    for (std::size_t b = a + 1; b < 7; ++b) {
      const double parts = regional_1d_distance(nd, a, b) + regional_2d_distance(nd, a, b) +
                           connection_2d_distance(nd, a, b);
      CHECK(D(a, b) == parts);
      CHECK(D(a, b) == D(b, a));
      CHECK(D(a, b) >= 0.0);
    }
  }
}

TEST_CASE("pairwise distances match the oracle on random datasets", "[distance]") {
  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 4 + rng.below(5);
    NormalizedDataset nd = random_normalized(n, 10 + rng.below(30), rng);
    DistanceMatrix D = pairwise_distances(nd);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const long double expected = oracle_distance(nd, a, b);
        CHECK_THAT(D(a, b), Catch::Matchers::WithinRel(static_cast<double>(expected), 1e-12));
      }
  }
}

TEST_CASE("identical regions with zero connections differ only by the link term", "[distance]") {
  NormalizedDataset nd{DatasetBuilder(testsup::region_ids(3), 2)
                           .attr_1d("X", "Capacity", AggRule::sum, {0.5, 0.5, 0.5})
                           .attr_2d("X", "Rate", AggRule::mean,
                                    {{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}})
                           .attr_conn("Cable", "Capacity", AggRule::sum, {})
                           .build()};
  DistanceMatrix D = pairwise_distances(nd);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(D(a, b) == (a == b ? 0.0 : 1.0));
}

TEST_CASE("raw-data affine scaling leaves distances unchanged", "[distance]") {
  // integer data, power-of-two alpha: exact arithmetic end to end
  auto make = [](double alpha, double beta) {
    return DatasetBuilder(testsup::region_ids(3), 2)
        .attr_1d("X", "Fixed capacity", AggRule::sum,
                 {2 * alpha + beta, 9 * alpha + beta, 5 * alpha + beta})
        .attr_2d("X", "Fixed operation rate", AggRule::sum,
                 {{1 * alpha + beta, 6 * alpha + beta},
                  {8 * alpha + beta, 2 * alpha + beta},
                  {4 * alpha + beta, 7 * alpha + beta}})
        .build();
  };
  DistanceMatrix base = pairwise_distances(normalize(make(1.0, 0.0)));
  DistanceMatrix scaled = pairwise_distances(normalize(make(8.0, 5.0)));
  CHECK(base == scaled);
}

TEST_CASE("grouping weight zero equals deleting the attribute", "[distance]") {
  Rng rng(67);
  std::vector<std::vector<double>> rows(3, std::vector<double>(4));
  for (auto& row : rows)
    for (auto& v : row) v = rng.uniform();
  auto with_weightless = DatasetBuilder(testsup::region_ids(3), 4)
                             .attr_1d("X", "A", AggRule::mean, {0.1, 0.9, 0.4})
                             .attr_2d("X", "B", AggRule::mean, rows, "", 0.0)
                             .build();
  auto without = DatasetBuilder(testsup::region_ids(3), 4)
                     .attr_1d("X", "A", AggRule::mean, {0.1, 0.9, 0.4})
                     .build();
  CHECK(pairwise_distances(NormalizedDataset{with_weightless}) ==
        pairwise_distances(NormalizedDataset{without}));
}

TEST_CASE("attribute weights scale their distance contribution", "[distance]") {
  NormalizedDataset weighted{DatasetBuilder(testsup::region_ids(2))
                                 .attr_1d("X", "A", AggRule::mean, {0.0, 1.0}, ValueKind::real, 3.0)
                                 .build()};
  CHECK(regional_1d_distance(weighted, 0, 1) == 3.0);
}
