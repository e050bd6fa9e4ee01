#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spagat/aggregate.hpp"
#include "spagat/connectivity.hpp"
#include "spagat/dataset.hpp"
#include "spagat/distance.hpp"
#include "spagat/generate.hpp"
#include "spagat/geometry.hpp"
#include "spagat/hess.hpp"
#include "spagat/io.hpp"
#include "spagat/log.hpp"
#include "spagat/techagg.hpp"
#include "spagat/types.hpp"

namespace spagat {

// exit codes: 0 ok, 1 internal, 2 input, 3 infeasible, 4 cut limit
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCutLimit = 4;

template <typename Fn>
int run_with_exit_code(Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const CutLimitError& e) {
    log_error(std::string("cut limit: ") + e.what());
    return kExitCutLimit;
  } catch (const InfeasibleError& e) {
    log_error(std::string("infeasible: ") + e.what());
    return kExitInfeasible;
  } catch (const InputError& e) {
    log_error(std::string("input: ") + e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitInternal;
  }
}

// Builds adjacency from geometry.json when present, otherwise adjacency.csv;
// rule-3 pairs from links.csv are OR-ed in either way.
inline ConnectivityMatrix load_connectivity(const std::string& dataset_dir,
                                            const RegionSet& regions) {
  namespace fs = std::filesystem;
  const std::string geometry_path = dataset_dir + "/geometry.json";
  const std::string adjacency_path = dataset_dir + "/adjacency.csv";
  const std::string links_path = dataset_dir + "/links.csv";

  std::vector<std::pair<std::size_t, std::size_t>> links;
  if (fs::exists(links_path)) links = load_region_pairs(links_path, regions);

  if (fs::exists(geometry_path)) {
    GeometrySet geom = load_geometry(geometry_path, regions);
    return build_connectivity(geom, links);
  }
  if (fs::exists(adjacency_path)) {
    auto pairs = load_region_pairs(adjacency_path, regions);
    pairs.insert(pairs.end(), links.begin(), links.end());
    return connectivity_from_pairs(regions.size(), pairs);
  }
  throw InputError("no geometry.json or adjacency.csv in " + dataset_dir);
}

struct GroupOptions {
  std::string dataset_dir;
  std::string out_dir;
  std::size_t k = 1;
  bool contiguity = true;
  SolveMode mode = SolveMode::heuristic;
  std::uint64_t seed = 0;
  std::size_t max_cut_rounds = 1000;
};

struct GroupArtifacts {
  Grouping grouping;
  Dataset aggregated;
};

// load -> normalize -> connectivity -> distances -> solve -> aggregate
inline GroupArtifacts run_group(const GroupOptions& opt) {
  Dataset d = load_dataset(opt.dataset_dir);
  NormalizedDataset nd = normalize(d);

  ConnectivityMatrix c;
  if (opt.contiguity) {
    c = load_connectivity(opt.dataset_dir, d.regions);
  } else {
    namespace fs = std::filesystem;
    if (fs::exists(opt.dataset_dir + "/geometry.json") ||
        fs::exists(opt.dataset_dir + "/adjacency.csv"))
      c = load_connectivity(opt.dataset_dir, d.regions);
    else
      c = ConnectivityMatrix(d.regions.size());
  }

  DistanceMatrix dist = pairwise_distances(nd);

  SolverConfig cfg;
  cfg.k = opt.k;
  cfg.contiguity = opt.contiguity;
  cfg.mode = opt.mode;
  cfg.seed = opt.seed;
  cfg.max_cut_rounds = opt.max_cut_rounds;
  Grouping g = solve(dist, c, cfg);
  log_info("grouping: k=" + std::to_string(opt.k) + " objective=" + std::to_string(g.objective) +
           " cuts=" + std::to_string(g.cuts_added) + " rounds=" + std::to_string(g.rounds));

  AggregationPlan plan = default_plan(d);
  std::vector<std::string> warnings;
  Dataset aggregated = aggregate_dataset(d, g, plan, &warnings);

  std::filesystem::create_directories(opt.out_dir);
  save_dataset(aggregated, opt.out_dir);
  write_grouping_json(g, d.regions, opt.contiguity, opt.out_dir + "/grouping.json");
  if (c.size() == d.regions.size() && d.regions.size() > 0) {
    // super-region adjacency: groups touch iff any member pair touches
    ConnectivityMatrix super(aggregated.regions.size());
    auto groups = g.groups();
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      for (std::size_t gj = gi + 1; gj < groups.size(); ++gj)
        for (std::size_t u : groups[gi].members) {
          bool linked = false;
          for (std::size_t v : groups[gj].members)
            if (c.connected(u, v)) {
              super.link(gi, gj);
              linked = true;
              break;
            }
          if (linked) break;
        }
    write_adjacency_csv(super, aggregated.regions, opt.out_dir + "/adjacency.csv");
  }
  return GroupArtifacts{std::move(g), std::move(aggregated)};
}

struct TechAggOptions {
  std::string dataset_dir;
  std::string out_dir;
  std::vector<std::string> techs;  // empty = all
  std::size_t n_ts = 1;
};

inline TechAggResult run_techagg(const TechAggOptions& opt) {
  Dataset d = load_dataset(opt.dataset_dir);
  const std::vector<std::string>* filter = opt.techs.empty() ? nullptr : &opt.techs;
  TechAggResult result = run_tech_aggregation(d, opt.n_ts, filter);
  std::filesystem::create_directories(opt.out_dir);
  save_dataset(result.dataset, opt.out_dir);
  write_representatives(result, d, opt.out_dir);
  log_info("techagg: n_ts=" + std::to_string(opt.n_ts) + " converted=" +
           std::to_string(result.converted.size()) + " technologies");
  return result;
}

struct DistancesOptions {
  std::string dataset_dir;
  std::string out_dir;
};

inline void run_distances(const DistancesOptions& opt) {
  Dataset d = load_dataset(opt.dataset_dir);
  NormalizedDataset nd = normalize(d);
  DistanceMatrix dist = pairwise_distances(nd);
  std::filesystem::create_directories(opt.out_dir);
  write_distances_csv(dist, d.regions, opt.out_dir + "/distances.csv");
}

struct SweepOptions {
  std::string dataset_dir;
  std::string out_dir;
  std::vector<std::size_t> k_list;
  std::vector<std::size_t> nts_list;
  bool contiguity = true;
  SolveMode mode = SolveMode::heuristic;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool timing = true;  // off zeroes wall_ms so reruns are byte-identical
};

struct SweepRow {
  std::size_t k = 0;
  std::size_t n_ts = 0;
  std::string status = "ok";
  double objective = 0.0;
  std::size_t cuts_added = 0;
  std::size_t rounds = 0;
  std::int64_t wall_ms = 0;
  double sum_rule_total = 0.0;
  double fleet_capacity_total = 0.0;
  double fleet_energy_total = 0.0;
};

namespace detail {

// conserved-total checksums over a dataset: totals of regional sum-rule
// attributes, fleet capacity, and fleet energy (capacity times CF summed
// over time)
inline void accumulate_checksums(const Dataset& d, SweepRow& row) {
  KahanSum sum_rule;
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    if (d.specs[si].dimension == Dimension::connection_2d) continue;
    if (d.specs[si].rule != AggRule::sum) continue;
    for (double v : d.tables[si].values()) sum_rule.add(v);
  }
  row.sum_rule_total = sum_rule.value();

  KahanSum cap, energy;
  for (const auto& per_region : d.fleets) {
    for (const auto& fleet : per_region) {
      for (const auto& p : fleet.plants) {
        cap.add(p.capacity);
        KahanSum cf_sum;
        for (double v : p.cf) cf_sum.add(v);
        energy.add(p.capacity * cf_sum.value());
      }
    }
  }
  // representative instances carry the fleet totals after conversion
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    if (spec.dimension != Dimension::regional_1d || spec.name != "Maximum capacity") continue;
    if (spec.component.find("_r") == std::string::npos) continue;
    if (!d.has_attr(spec.component, "Maximum operation rate")) continue;
    const auto& caps = d.tables[si];
    const auto& cf = d.tables[d.attr_index(spec.component, "Maximum operation rate")];
    for (std::size_t i = 0; i < d.regions.size(); ++i) {
      cap.add(caps(i, 0));
      KahanSum cf_sum;
      for (std::size_t t = 0; t < d.horizon.steps; ++t) cf_sum.add(cf(i, t));
      energy.add(caps(i, 0) * cf_sum.value());
    }
  }
  row.fleet_capacity_total = cap.value();
  row.fleet_energy_total = energy.value();
}

}  // namespace detail

// Runs the group x techagg grid. Cell failures are recorded in-row and the
// sweep continues; row order follows the requested grid regardless of the
// worker count.
inline std::vector<SweepRow> run_sweep(const SweepOptions& opt) {
  if (opt.k_list.empty() || opt.nts_list.empty())
    throw InputError("sweep requires at least one k and one n_ts value");
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);

  struct Cell {
    std::size_t k, n_ts;
  };
  std::vector<Cell> cells;
  for (std::size_t k : opt.k_list)
    for (std::size_t nts : opt.nts_list) cells.push_back({k, nts});
  std::vector<SweepRow> rows(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell cell = cells[idx];
      SweepRow& row = rows[idx];
      row.k = cell.k;
      row.n_ts = cell.n_ts;
      const auto start = std::chrono::steady_clock::now();
      try {
        const std::string cell_dir = opt.out_dir + "/k" + std::to_string(cell.k) + "_nts" +
                                     std::to_string(cell.n_ts);
        GroupOptions gopt;
        gopt.dataset_dir = opt.dataset_dir;
        gopt.out_dir = cell_dir + "/grouped";
        gopt.k = cell.k;
        gopt.contiguity = opt.contiguity;
        gopt.mode = opt.mode;
        gopt.seed = opt.seed;
        GroupArtifacts art = run_group(gopt);
        row.objective = art.grouping.objective;
        row.cuts_added = art.grouping.cuts_added;
        row.rounds = art.grouping.rounds;

        TechAggOptions topt;
        topt.dataset_dir = gopt.out_dir;
        topt.out_dir = cell_dir + "/final";
        topt.n_ts = cell.n_ts;
        TechAggResult tres = run_techagg(topt);
        detail::accumulate_checksums(tres.dataset, row);
      } catch (const CutLimitError& e) {
        row.status = "cut_limit";
        log_error(std::string("sweep cell failed: ") + e.what());
      } catch (const InfeasibleError& e) {
        row.status = "infeasible";
        log_error(std::string("sweep cell failed: ") + e.what());
      } catch (const InputError& e) {
        row.status = "input_error";
        log_error(std::string("sweep cell failed: ") + e.what());
      } catch (const std::exception& e) {
        row.status = "error";
        log_error(std::string("sweep cell failed: ") + e.what());
      }
      const auto stop = std::chrono::steady_clock::now();
      row.wall_ms =
          opt.timing
              ? std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()
              : 0;
    }
  };

  const std::size_t worker_count = std::max<std::size_t>(1, opt.workers);
  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string csv =
      "k,n_ts,status,objective,cuts_added,rounds,wall_ms,sum_rule_total,fleet_capacity_total,"
      "fleet_energy_total\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.k) + "," + std::to_string(row.n_ts) + "," + row.status + "," +
           detail::fmt_double(row.objective) + "," + std::to_string(row.cuts_added) + "," +
           std::to_string(row.rounds) + "," + std::to_string(row.wall_ms) + "," +
           detail::fmt_double(row.sum_rule_total) + "," +
           detail::fmt_double(row.fleet_capacity_total) + "," +
           detail::fmt_double(row.fleet_energy_total) + "\n";
  }
  detail::write_file(opt.out_dir + "/sweep.csv", csv);
  return rows;
}

}  // namespace spagat
