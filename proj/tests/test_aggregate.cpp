#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>
#include <vector>

#include "spagat/aggregate.hpp"
#include "spagat/generate.hpp"
#include "spagat/pipeline.hpp"
#include "test_support.hpp"

using namespace spagat;
using testsup::DatasetBuilder;

namespace {

Grouping make_grouping(std::vector<std::size_t> assignment) {
  Grouping g;
  g.assignment = std::move(assignment);
  std::set<std::size_t> meds(g.assignment.begin(), g.assignment.end());
  g.medoids.assign(meds.begin(), meds.end());
  return g;
}

AggregationPlan manifest_plan(const Dataset& d) {
  AggregationPlan plan;
  for (const auto& spec : d.specs) {
    plan.rules.push_back(spec.rule);
    plan.weight_attributes.push_back(spec.weight_attribute);
  }
  return plan;
}

}  // namespace

TEST_CASE("default plan maps the builtin rule table", "[aggregate]") {
  // all twenty known attribute names, dimensioned plausibly
  DatasetBuilder builder(testsup::region_ids(2), 2);
  builder.attr_1d("Wind turbine", "Maximum capacity", AggRule::mean, {1, 2});
  builder.attr_2d("Wind turbine", "Maximum operation rate", AggRule::mean, {{0, 0}, {0, 0}});
  builder.attr_2d("Electricity demand", "Fixed operation rate", AggRule::mean, {{0, 0}, {0, 0}});
  builder.attr_1d("Wind turbine", "Fixed capacity", AggRule::mean, {1, 2});
  builder.attr_1d("Wind turbine", "Locational eligibility", AggRule::mean, {1, 0},
                  ValueKind::boolean);
  builder.attr_1d("Wind turbine", "Investment per capacity", AggRule::sum, {1, 2});
  builder.attr_1d("Wind turbine", "Investment if built", AggRule::mean, {1, 0},
                  ValueKind::boolean);
  builder.attr_1d("Wind turbine", "Opex per operation", AggRule::sum, {1, 2});
  builder.attr_1d("Wind turbine", "Opex per capacity", AggRule::sum, {1, 2});
  builder.attr_1d("Wind turbine", "Opex if built", AggRule::mean, {1, 0}, ValueKind::boolean);
  builder.attr_1d("Wind turbine", "Interest rate", AggRule::sum, {1, 2});
  builder.attr_1d("Wind turbine", "Economic lifetime", AggRule::sum, {1, 2});
  builder.attr_conn("AC cable", "Losses", AggRule::sum, {});
  builder.attr_conn("AC cable", "Distances", AggRule::sum, {});
  builder.attr_1d("Source", "Commodity cost", AggRule::sum, {1, 2});
  builder.attr_1d("Source", "Commodity revenue", AggRule::sum, {1, 2});
  builder.attr_1d("Battery", "Opex per charge operation", AggRule::sum, {1, 2});
  builder.attr_1d("Battery", "Opex per discharge operation", AggRule::sum, {1, 2});
  builder.attr_1d("Wind turbine", "Technical lifetime", AggRule::mean, {1, 2});
  builder.attr_conn("AC cable", "Reactances", AggRule::mean, {});
  Dataset d = builder.build();
  AggregationPlan plan = default_plan(d);

  const std::map<std::string, AggRule> expected = {
      {"Maximum operation rate", AggRule::weighted_mean},
      {"Fixed operation rate", AggRule::sum},
      {"Maximum capacity", AggRule::sum},
      {"Fixed capacity", AggRule::sum},
      {"Locational eligibility", AggRule::bool_or},
      {"Investment per capacity", AggRule::mean},
      {"Investment if built", AggRule::bool_or},
      {"Opex per operation", AggRule::mean},
      {"Opex per capacity", AggRule::mean},
      {"Opex if built", AggRule::bool_or},
      {"Interest rate", AggRule::mean},
      {"Economic lifetime", AggRule::mean},
      {"Losses", AggRule::mean},
      {"Distances", AggRule::mean},
      {"Commodity cost", AggRule::mean},
      {"Commodity revenue", AggRule::mean},
      {"Opex per charge operation", AggRule::mean},
      {"Opex per discharge operation", AggRule::mean},
      {"Technical lifetime", AggRule::sum},
      {"Reactances", AggRule::sum},
  };
  REQUIRE(expected.size() == 20);
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    INFO(d.specs[si].key());
    CHECK(plan.rules[si] == expected.at(d.specs[si].name));
  }
  // the weighted mean weighs by the component's maximum capacity
  const std::size_t rate_idx = d.attr_index("Wind turbine", "Maximum operation rate");
  CHECK(plan.weight_attributes[rate_idx] == "Maximum capacity");
}

TEST_CASE("unmatched attributes keep the manifest rule", "[aggregate]") {
  Dataset d = DatasetBuilder(testsup::region_ids(2))
                  .attr_1d("X", "Some custom attribute", AggRule::sum, {1, 2})
                  .build();
  AggregationPlan plan = default_plan(d);
  CHECK(plan.rules[0] == AggRule::sum);
}

TEST_CASE("weighted mean over a group", "[aggregate]") {
  // series [0.2,0.4] and [0.6,0.8] with capacities 1 and 3
  Dataset d = DatasetBuilder(testsup::region_ids(2), 2)
                  .attr_1d("Wind turbine", "Maximum capacity", AggRule::sum, {1, 3})
                  .attr_2d("Wind turbine", "Maximum operation rate", AggRule::weighted_mean,
                           {{0.2, 0.4}, {0.6, 0.8}}, "Maximum capacity")
                  .build();
  Grouping g = make_grouping({0, 0});
  Dataset out = aggregate_dataset(d, g, manifest_plan(d));
  REQUIRE(out.regions.size() == 1);
  const auto& rate = out.tables[d.attr_index("Wind turbine", "Maximum operation rate")];
  CHECK_THAT(rate(0, 0), Catch::Matchers::WithinRel(0.5, 1e-12));
  CHECK_THAT(rate(0, 1), Catch::Matchers::WithinRel(0.7, 1e-12));
  const auto& cap = out.tables[d.attr_index("Wind turbine", "Maximum capacity")];
  CHECK(cap(0, 0) == 4.0);
}

TEST_CASE("sum rule adds member values", "[aggregate]") {
  Dataset d = DatasetBuilder(testsup::region_ids(2))
                  .attr_1d("X", "Fixed capacity", AggRule::sum, {2, 5})
                  .build();
  Dataset out = aggregate_dataset(d, make_grouping({0, 0}), manifest_plan(d));
  CHECK(out.tables[0](0, 0) == 7.0);
}

TEST_CASE("bool_or is true iff any member is true", "[aggregate]") {
  Dataset d = DatasetBuilder(testsup::region_ids(4))
                  .attr_1d("X", "Locational eligibility", AggRule::bool_or, {0, 1, 0, 0},
                           ValueKind::boolean)
                  .build();
  Dataset out = aggregate_dataset(d, make_grouping({0, 0, 2, 2}), manifest_plan(d));
  CHECK(out.tables[0](0, 0) == 1.0);  // group {0,1} has a true member
  CHECK(out.tables[0](1, 0) == 0.0);  // group {2,3} has none
}

TEST_CASE("super-region names join sorted member ids", "[aggregate]") {
  Dataset d = DatasetBuilder({"north", "east", "south"})
                  .attr_1d("X", "Fixed capacity", AggRule::sum, {1, 2, 3})
                  .build();
  Dataset out = aggregate_dataset(d, make_grouping({0, 0, 2}), manifest_plan(d));
  CHECK(out.regions.id(0) == "east_north");
  CHECK(out.regions.id(1) == "south");
}

TEST_CASE("connection rules reduce over cross-group member pairs", "[aggregate]") {
  // regions 0,1 form group A; regions 2,3 form group B
  Dataset d = DatasetBuilder(testsup::region_ids(4))
                  .attr_conn("Cable", "Maximum capacity", AggRule::sum,
                             {{0, 1, 9.0}, {1, 0, 9.0},     // intra A, must vanish
                              {0, 2, 2.0}, {2, 0, 2.0},     // A-B
                              {1, 3, 4.0}, {3, 1, 4.0}})    // A-B
                  .attr_conn("Cable", "Losses", AggRule::mean,
                             {{0, 2, 0.02}, {2, 0, 0.02}, {1, 3, 0.06}, {3, 1, 0.06}})
                  .attr_conn("Cable", "Link exists", AggRule::bool_or,
                             {{0, 2, 1.0}, {2, 0, 1.0}})
                  .build();
  Dataset out = aggregate_dataset(d, make_grouping({0, 0, 2, 2}), manifest_plan(d));
  const auto& cap = out.tables[0];
  CHECK(cap(0, 0) == 0.0);  // copper plate: intra-group links dropped
  CHECK(cap(0, 1) == 6.0);  // 2 + 4 over the 4 cross pairs (two are zero)
  CHECK(cap(1, 0) == 6.0);
  const auto& losses = out.tables[1];
  CHECK_THAT(losses(0, 1), Catch::Matchers::WithinRel(0.04, 1e-12));  // mean over actual links
  const auto& exists = out.tables[2];
  CHECK(exists(0, 1) == 1.0);
}

TEST_CASE("sum-rule totals are conserved", "[aggregate]") {
  GenConfig cfg;
  cfg.n_regions = 12;
  cfg.time_steps = 16;
  cfg.n_plants = 2;
  cfg.seed = 31;
  Dataset d = generate_instance(cfg).dataset;
  Grouping g = make_grouping({0, 0, 0, 3, 3, 3, 6, 6, 6, 9, 9, 9});
  Dataset out = aggregate_dataset(d, g, default_plan(d));
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    if (d.specs[si].rule != AggRule::sum) continue;
    if (d.specs[si].dimension == Dimension::connection_2d) continue;
    // independent column-sum check with long double accumulation
    long double before = 0.0L, after = 0.0L;
    for (double v : d.tables[si].values()) before += v;
    for (double v : out.tables[si].values()) after += v;
    INFO(d.specs[si].key());
    CHECK_THAT(static_cast<double>(after),
               Catch::Matchers::WithinRel(static_cast<double>(before), 1e-9));
  }
}

TEST_CASE("identity grouping reproduces the dataset exactly", "[aggregate]") {
  GenConfig cfg;
  cfg.n_regions = 6;
  cfg.time_steps = 8;
  cfg.n_plants = 2;
  cfg.seed = 37;
  Dataset d = generate_instance(cfg).dataset;
  std::vector<std::size_t> identity(6);
  for (std::size_t i = 0; i < 6; ++i) identity[i] = i;
  Dataset out = aggregate_dataset(d, make_grouping(identity), default_plan(d));
  CHECK(out == d);
}

TEST_CASE("mean results stay within the member range", "[aggregate]") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 6;
    std::vector<std::vector<double>> rows(n, std::vector<double>(5));
    for (auto& row : rows)
      for (auto& v : row) v = rng.uniform(0.0, 100.0);
    std::vector<double> weights(n);
    for (auto& w : weights) w = rng.uniform(0.5, 4.0);
    Dataset d = DatasetBuilder(testsup::region_ids(n), 5)
                    .attr_1d("X", "Maximum capacity", AggRule::sum, weights)
                    .attr_2d("X", "Maximum operation rate", AggRule::weighted_mean, rows,
                             "Maximum capacity")
                    .attr_2d("X", "Opex per operation", AggRule::mean, rows)
                    .build();
    Grouping g = make_grouping({0, 0, 0, 3, 3, 3});
    Dataset out = aggregate_dataset(d, g, manifest_plan(d));
    for (std::size_t si : {d.attr_index("X", "Maximum operation rate"),
                           d.attr_index("X", "Opex per operation")}) {
      for (std::size_t gi = 0; gi < 2; ++gi) {
        for (std::size_t t = 0; t < 5; ++t) {
          double lo = 1e300, hi = -1e300;
          for (std::size_t i = gi * 3; i < gi * 3 + 3; ++i) {
            lo = std::min(lo, d.tables[si](i, t));
            hi = std::max(hi, d.tables[si](i, t));
          }
          CHECK(out.tables[si](gi, t) >= lo - 1e-12 * (1.0 + std::abs(lo)));
          CHECK(out.tables[si](gi, t) <= hi + 1e-12 * (1.0 + std::abs(hi)));
        }
      }
    }
  }
}

TEST_CASE("weighted series production is conserved", "[aggregate]") {
  Rng rng(43);
  const std::size_t n = 6, T = 7;
  std::vector<std::vector<double>> rows(n, std::vector<double>(T));
  for (auto& row : rows)
    for (auto& v : row) v = rng.uniform();
  std::vector<double> weights(n);
  for (auto& w : weights) w = rng.uniform(1.0, 10.0);
  Dataset d = DatasetBuilder(testsup::region_ids(n), T)
                  .attr_1d("X", "Maximum capacity", AggRule::sum, weights)
                  .attr_2d("X", "Maximum operation rate", AggRule::weighted_mean, rows,
                           "Maximum capacity")
                  .build();
  Grouping g = make_grouping({0, 0, 0, 0, 4, 4});
  Dataset out = aggregate_dataset(d, g, manifest_plan(d));
  const auto& out_cap = out.tables[0];
  const auto& out_rate = out.tables[1];
  for (std::size_t gi = 0; gi < 2; ++gi) {
    for (std::size_t t = 0; t < T; ++t) {
      long double production = 0.0L;
      for (std::size_t i = 0; i < n; ++i)
        if (g.assignment[i] == (gi == 0 ? 0u : 4u))
          production += static_cast<long double>(weights[i]) * rows[i][t];
      CHECK_THAT(out_cap(gi, 0) * out_rate(gi, t),
                 Catch::Matchers::WithinRel(static_cast<double>(production), 1e-9));
    }
  }
}

TEST_CASE("all-zero weights fall back to the unweighted mean with a warning", "[aggregate]") {
  Dataset d = DatasetBuilder(testsup::region_ids(2), 2)
                  .attr_1d("X", "Maximum capacity", AggRule::sum, {0, 0})
                  .attr_2d("X", "Maximum operation rate", AggRule::weighted_mean,
                           {{0.2, 0.4}, {0.6, 0.8}}, "Maximum capacity")
                  .build();
  std::vector<std::string> warnings;
  Dataset out = aggregate_dataset(d, make_grouping({0, 0}), manifest_plan(d), &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK_THAT(out.tables[1](0, 0), Catch::Matchers::WithinRel(0.4, 1e-12));
  CHECK_THAT(out.tables[1](0, 1), Catch::Matchers::WithinRel(0.6, 1e-12));
}

TEST_CASE("grouping that does not match the dataset is rejected", "[aggregate]") {
  Dataset d = DatasetBuilder(testsup::region_ids(3))
                  .attr_1d("X", "Fixed capacity", AggRule::sum, {1, 2, 3})
                  .build();
  REQUIRE_THROWS_AS(aggregate_dataset(d, make_grouping({0, 0}), manifest_plan(d)), InputError);
  REQUIRE_THROWS_AS(aggregate_dataset(d, make_grouping({0, 0, 9}), manifest_plan(d)), InputError);
}

TEST_CASE("merged fleets keep unique plant ids", "[aggregate]") {
  GenConfig cfg;
  cfg.n_regions = 4;
  cfg.time_steps = 6;
  cfg.n_plants = 2;
  cfg.seed = 47;
  Dataset d = generate_instance(cfg).dataset;
  Dataset out = aggregate_dataset(d, make_grouping({0, 0, 2, 2}), default_plan(d));
  REQUIRE(out.fleets.size() == 2);
  for (const auto& per_region : out.fleets) {
    for (const auto& fleet : per_region) {
      std::set<std::string> ids;
      for (const auto& p : fleet.plants) CHECK(ids.insert(p.id).second);
      CHECK(fleet.plants.size() == 4);  // two regions of two plants each
    }
  }
}
