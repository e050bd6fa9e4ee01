#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spagat/dataset.hpp"
#include "spagat/hess.hpp"
#include "spagat/types.hpp"

namespace spagat {

// Resolved aggregation rule per attribute, parallel to Dataset::specs.
struct AggregationPlan {
  std::vector<AggRule> rules;
  std::vector<std::string> weight_attributes;  // empty unless weighted_mean
};

namespace detail {

inline std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Built-in rule table keyed by lowercased attribute name. weighted_mean rows
// weigh by the component's "Maximum capacity".
inline const std::map<std::string, AggRule>& builtin_rule_table() {
  static const std::map<std::string, AggRule> table = {
      {"maximum operation rate", AggRule::weighted_mean},
      {"fixed operation rate", AggRule::sum},
      {"maximum capacity", AggRule::sum},
      {"fixed capacity", AggRule::sum},
      {"locational eligibility", AggRule::bool_or},
      {"investment per capacity", AggRule::mean},
      {"investment if built", AggRule::bool_or},
      {"opex per operation", AggRule::mean},
      {"opex per capacity", AggRule::mean},
      {"opex if built", AggRule::bool_or},
      {"interest rate", AggRule::mean},
      {"economic lifetime", AggRule::mean},
      {"losses", AggRule::mean},
      {"distances", AggRule::mean},
      {"commodity cost", AggRule::mean},
      {"commodity revenue", AggRule::mean},
      {"opex per charge operation", AggRule::mean},
      {"opex per discharge operation", AggRule::mean},
      {"technical lifetime", AggRule::sum},
      {"reactances", AggRule::sum},
  };
  return table;
}

inline const std::string kCapacityWeightName = "Maximum capacity";

}  // namespace detail

// Attributes whose names match the built-in rule table receive that rule;
// everything else keeps the rule declared in the manifest. A table-matched
// weighted mean needs the component's "Maximum capacity" attribute and falls
// back to the declared rule when the component has none.
inline AggregationPlan default_plan(const Dataset& d) {
  AggregationPlan plan;
  const auto& table = detail::builtin_rule_table();
  for (const auto& spec : d.specs) {
    auto it = table.find(detail::lower(spec.name));
    if (it == table.end()) {
      plan.rules.push_back(spec.rule);
      plan.weight_attributes.push_back(spec.weight_attribute);
      continue;
    }
    if (it->second == AggRule::weighted_mean) {
      if (spec.dimension != Dimension::connection_2d &&
          d.has_attr(spec.component, detail::kCapacityWeightName) &&
          spec.name != detail::kCapacityWeightName) {
        plan.rules.push_back(AggRule::weighted_mean);
        plan.weight_attributes.push_back(detail::kCapacityWeightName);
      } else {
        plan.rules.push_back(spec.rule);
        plan.weight_attributes.push_back(spec.weight_attribute);
      }
      continue;
    }
    plan.rules.push_back(it->second);
    plan.weight_attributes.push_back("");
  }
  return plan;
}

namespace detail {

struct GroupLayout {
  std::vector<std::vector<std::size_t>> members;  // per super-region, ascending
  std::vector<std::string> names;                 // sorted member ids joined by "_"
};

inline GroupLayout group_layout(const Dataset& d, const Grouping& g) {
  const std::size_t n = d.regions.size();
  if (g.assignment.size() != n)
    throw InputError("grouping does not match the dataset region set");
  for (std::size_t i = 0; i < n; ++i)
    if (g.assignment[i] >= n) throw InputError("grouping references unknown region");
  GroupLayout layout;
  for (const auto& group : g.groups()) {
    layout.members.push_back(group.members);
    std::vector<std::string> ids;
    for (std::size_t i : group.members) ids.push_back(d.regions.id(i));
    std::sort(ids.begin(), ids.end());
    std::string name = ids.front();
    for (std::size_t p = 1; p < ids.size(); ++p) name += "_" + ids[p];
    layout.names.push_back(std::move(name));
  }
  return layout;
}

}  // namespace detail

// Reduces the dataset to one super-region per group. Regional rules apply
// over group members (per time step for 2-d tables); connection rules apply
// over all cross-group member pairs; intra-group connections are dropped
// (each group becomes a single copper-plate node). Fleets concatenate.
inline Dataset aggregate_dataset(const Dataset& d, const Grouping& g, const AggregationPlan& plan,
                                 std::vector<std::string>* warnings = nullptr) {
  if (plan.rules.size() != d.specs.size())
    throw InputError("aggregation plan does not match the dataset attributes");
  auto layout = detail::group_layout(d, g);
  const std::size_t k = layout.members.size();

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
    log_info("aggregate: " + msg);
  };

  Dataset out;
  out.regions = RegionSet(layout.names);
  out.horizon = d.horizon;
  out.specs = d.specs;
  out.technologies = d.technologies;
  out.fleet_dirs = d.fleet_dirs;

  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    const auto& table = d.tables[si];
    const AggRule rule = plan.rules[si];
    const std::string& weight_name = plan.weight_attributes[si];

    if (spec.dimension == Dimension::connection_2d) {
      if (rule == AggRule::weighted_mean)
        throw InputError("weighted_mean is not defined for connection attribute " + spec.key());
      Matrix result(k, k, 0.0);
      for (std::size_t gi = 0; gi < k; ++gi) {
        for (std::size_t gj = 0; gj < k; ++gj) {
          if (gi == gj) continue;  // copper plate: intra-group links vanish
          KahanSum sum;
          std::size_t nonzero = 0;
          bool any_true = false;
          for (std::size_t u : layout.members[gi]) {
            for (std::size_t v : layout.members[gj]) {
              const double raw = table(u, v);
              if (raw != 0.0) {
                ++nonzero;
                any_true = true;
              }
              if (rule == AggRule::sum) sum.add(raw);
              if (rule == AggRule::mean && raw != 0.0) sum.add(raw);
            }
          }
          switch (rule) {
            case AggRule::sum: result(gi, gj) = sum.value(); break;
            case AggRule::mean:
              // physical pair quantities (losses, distances) average over
              // actual links; zero cells mean "no link", not "zero loss"
              result(gi, gj) = nonzero ? sum.value() / static_cast<double>(nonzero) : 0.0;
              break;
            case AggRule::bool_or: result(gi, gj) = any_true ? 1.0 : 0.0; break;
            case AggRule::weighted_mean: break;  // rejected above
          }
        }
      }
      out.tables.push_back(std::move(result));
      continue;
    }

    const std::size_t cols = spec.dimension == Dimension::regional_1d ? 1 : d.horizon.steps;
    Matrix result(k, cols, 0.0);
    const Matrix* weights = nullptr;
    if (rule == AggRule::weighted_mean)
      weights = &d.tables[d.attr_index(spec.component, weight_name)];

    for (std::size_t gi = 0; gi < k; ++gi) {
      const auto& members = layout.members[gi];
      if (members.size() == 1) {
        // passthrough keeps identity groupings bit-exact (w*v/w may round)
        for (std::size_t t = 0; t < cols; ++t) result(gi, t) = table(members[0], t);
        continue;
      }
      double weight_total = 0.0;
      bool zero_weights = false;
      if (rule == AggRule::weighted_mean) {
        KahanSum wsum;
        for (std::size_t i : members) wsum.add((*weights)(i, 0));
        weight_total = wsum.value();
        if (weight_total == 0.0) {
          zero_weights = true;
          warn("all-zero weights for " + spec.key() + " in group '" + layout.names[gi] +
               "': falling back to unweighted mean");
        }
      }
      for (std::size_t t = 0; t < cols; ++t) {
        KahanSum sum;
        bool any_true = false;
        for (std::size_t i : members) {
          const double v = table(i, t);
          switch (rule) {
            case AggRule::sum:
            case AggRule::mean: sum.add(v); break;
            case AggRule::weighted_mean:
              sum.add(zero_weights ? v : (*weights)(i, 0) * v);
              break;
            case AggRule::bool_or:
              if (v != 0.0) any_true = true;
              break;
          }
        }
        switch (rule) {
          case AggRule::sum: result(gi, t) = sum.value(); break;
          case AggRule::mean: result(gi, t) = sum.value() / static_cast<double>(members.size()); break;
          case AggRule::weighted_mean:
            result(gi, t) = zero_weights ? sum.value() / static_cast<double>(members.size())
                                         : sum.value() / weight_total;
            break;
          case AggRule::bool_or: result(gi, t) = any_true ? 1.0 : 0.0; break;
        }
      }
    }
    out.tables.push_back(std::move(result));
  }

  // fleets: concatenate member fleets in region order; plant ids gain a
  // region prefix in merged groups so they stay unique
  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    std::vector<TechFleet> merged(k);
    for (std::size_t gi = 0; gi < k; ++gi) {
      const bool multi = layout.members[gi].size() > 1;
      for (std::size_t i : layout.members[gi]) {
        for (const auto& plant : d.fleets[ti][i].plants) {
          Plant p = plant;
          if (multi) p.id = d.regions.id(i) + ":" + p.id;
          merged[gi].plants.push_back(std::move(p));
        }
      }
    }
    out.fleets.push_back(std::move(merged));
  }
  return out;
}

}  // namespace spagat
