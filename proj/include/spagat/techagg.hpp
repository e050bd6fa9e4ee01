#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spagat/dataset.hpp"
#include "spagat/types.hpp"

namespace spagat {

// Representative (capacity, CF series) pair standing in for a set of plants.
struct TechCluster {
  double capacity = 0.0;               // sum of member capacities
  std::vector<double> cf;              // capacity-weighted mean of member series
  std::vector<std::string> member_plant_ids;
  double mean_cf = 0.0;
};

namespace detail {

inline double squared_series_distance(const std::vector<double>& a, const std::vector<double>& b) {
  KahanSum sum;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = a[t] - b[t];
    sum.add(diff * diff);
  }
  return sum.value();
}

}  // namespace detail

// Agglomerative clustering of the fleet's CF time series down to n_ts
// clusters: Ward linkage on Euclidean distance, merges tie-broken by smallest
// plant index. Per cluster, capacity is the member sum and the CF series the
// capacity-weighted member mean. Output is ordered by descending mean CF.
inline std::vector<TechCluster> cluster_fleet(const TechFleet& fleet, std::size_t n_ts) {
  if (n_ts < 1) throw InputError("n_ts must be >= 1");
  if (fleet.empty()) throw InputError("cannot cluster an empty fleet");
  const std::size_t m = fleet.plants.size();
  const std::size_t T = fleet.plants.front().cf.size();
  for (const auto& p : fleet.plants) {
    if (p.cf.size() != T) throw InputError("plant cf series lengths differ within the fleet");
    if (!(p.capacity > 0.0)) throw InputError("plant capacity must be > 0");
  }

  // each active cluster tracks its members (ascending plant index)
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < m; ++i) clusters.push_back({i});

  if (n_ts < m) {
    // Lance-Williams update on squared Euclidean distances (Ward linkage)
    std::vector<std::vector<double>> d2(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        d2[i][j] = d2[j][i] =
            detail::squared_series_distance(fleet.plants[i].cf, fleet.plants[j].cf);

    std::vector<bool> active(m, true);
    std::vector<double> size(m, 1.0);
    std::size_t active_count = m;
    while (active_count > n_ts) {
      std::size_t best_i = m, best_j = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (!active[i]) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
          if (!active[j]) continue;
          if (d2[i][j] < best) {
            best = d2[i][j];
            best_i = i;
            best_j = j;
          }
        }
      }
      // merge j into i (i < j, so the representative keeps the smallest index)
      for (std::size_t l = 0; l < m; ++l) {
        if (!active[l] || l == best_i || l == best_j) continue;
        const double total = size[best_i] + size[best_j] + size[l];
        d2[best_i][l] = d2[l][best_i] =
            ((size[best_i] + size[l]) * d2[best_i][l] + (size[best_j] + size[l]) * d2[best_j][l] -
             size[l] * d2[best_i][best_j]) /
            total;
      }
      size[best_i] += size[best_j];
      active[best_j] = false;
      auto& dst = clusters[best_i];
      dst.insert(dst.end(), clusters[best_j].begin(), clusters[best_j].end());
      std::sort(dst.begin(), dst.end());
      clusters[best_j].clear();
      --active_count;
    }
    std::vector<std::vector<std::size_t>> kept;
    for (auto& cl : clusters)
      if (!cl.empty()) kept.push_back(std::move(cl));
    clusters = std::move(kept);
  }

  std::vector<TechCluster> out;
  for (const auto& members : clusters) {
    TechCluster tc;
    KahanSum cap;
    for (std::size_t i : members) cap.add(fleet.plants[i].capacity);
    tc.capacity = cap.value();
    tc.cf.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      KahanSum weighted;
      for (std::size_t i : members) weighted.add(fleet.plants[i].capacity * fleet.plants[i].cf[t]);
      tc.cf[t] = weighted.value() / tc.capacity;
    }
    for (std::size_t i : members) tc.member_plant_ids.push_back(fleet.plants[i].id);
    KahanSum mean;
    for (double v : tc.cf) mean.add(v);
    tc.mean_cf = mean.value() / static_cast<double>(T);
    out.push_back(std::move(tc));
  }

  // descending mean CF; ties keep the cluster with the smaller first plant
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out[a].mean_cf > out[b].mean_cf;
  });
  std::vector<TechCluster> sorted;
  for (std::size_t i : order) sorted.push_back(std::move(out[i]));
  return sorted;
}

// Result of converting fleets into representative component instances.
struct TechAggResult {
  Dataset dataset;
  std::vector<std::string> converted;                       // tech names
  std::vector<std::vector<std::vector<TechCluster>>> reps;  // tech -> region -> clusters
};

// Replaces each (region, technology) fleet with its representative set: the
// rank-r representative of technology X becomes component instance "X_r<r>"
// carrying a 1-d maximum-capacity attribute and a 2-d max-operation-rate
// attribute (the CF series). Any existing attributes of the replaced
// component are dropped; regions with fewer representatives than the maximum
// hold zero capacity for the surplus ranks.
inline TechAggResult run_tech_aggregation(const Dataset& d, std::size_t n_ts,
                                          const std::vector<std::string>* only_techs = nullptr) {
  if (n_ts < 1) throw InputError("n_ts must be >= 1");
  const std::size_t n = d.regions.size();

  std::vector<std::size_t> selected;
  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    if (only_techs && std::find(only_techs->begin(), only_techs->end(), d.technologies[ti]) ==
                          only_techs->end())
      continue;
    selected.push_back(ti);
  }
  if (only_techs) {
    for (const auto& name : *only_techs)
      if (std::find(d.technologies.begin(), d.technologies.end(), name) == d.technologies.end())
        throw InputError("unknown technology: " + name);
  }

  TechAggResult result;
  Dataset& out = result.dataset;
  out.regions = d.regions;
  out.horizon = d.horizon;

  // keep attributes except those owned by a converted technology component
  std::vector<std::string> converted_names;
  for (std::size_t ti : selected) converted_names.push_back(d.technologies[ti]);
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    if (std::find(converted_names.begin(), converted_names.end(), d.specs[si].component) !=
        converted_names.end())
      continue;
    out.specs.push_back(d.specs[si]);
    out.tables.push_back(d.tables[si]);
  }

  for (std::size_t ti : selected) {
    const std::string& tech = d.technologies[ti];
    std::vector<std::vector<TechCluster>> per_region(n);
    std::size_t max_ranks = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d.fleets[ti][i].empty()) continue;
      per_region[i] = cluster_fleet(d.fleets[ti][i], n_ts);
      max_ranks = std::max(max_ranks, per_region[i].size());
    }
    for (std::size_t rank = 1; rank <= max_ranks; ++rank) {
      const std::string instance = tech + "_r" + std::to_string(rank);
      AttributeSpec cap_spec;
      cap_spec.name = "Maximum capacity";
      cap_spec.component = instance;
      cap_spec.dimension = Dimension::regional_1d;
      cap_spec.rule = AggRule::sum;
      AttributeSpec cf_spec;
      cf_spec.name = "Maximum operation rate";
      cf_spec.component = instance;
      cf_spec.dimension = Dimension::regional_2d_time;
      cf_spec.rule = AggRule::weighted_mean;
      cf_spec.weight_attribute = "Maximum capacity";

      Matrix cap_table(n, 1, 0.0);
      Matrix cf_table(n, d.horizon.steps, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (rank > per_region[i].size()) continue;
        const TechCluster& tc = per_region[i][rank - 1];
        cap_table(i, 0) = tc.capacity;
        for (std::size_t t = 0; t < d.horizon.steps; ++t) cf_table(i, t) = tc.cf[t];
      }
      out.specs.push_back(std::move(cap_spec));
      out.tables.push_back(std::move(cap_table));
      out.specs.push_back(std::move(cf_spec));
      out.tables.push_back(std::move(cf_table));
    }
    result.converted.push_back(tech);
    result.reps.push_back(std::move(per_region));
  }

  // unconverted technologies keep their fleets
  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    if (std::find(selected.begin(), selected.end(), ti) != selected.end()) continue;
    out.technologies.push_back(d.technologies[ti]);
    out.fleet_dirs.push_back(d.fleet_dirs[ti]);
    out.fleets.push_back(d.fleets[ti]);
  }
  return result;
}

inline Dataset apply_to_dataset(const Dataset& d, std::size_t n_ts) {
  return run_tech_aggregation(d, n_ts).dataset;
}

}  // namespace spagat
