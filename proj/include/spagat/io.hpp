#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spagat/csv.hpp"
#include "spagat/geometry.hpp"
#include "spagat/hess.hpp"
#include "spagat/techagg.hpp"
#include "spagat/types.hpp"

namespace spagat {

// grouping.json: groups ordered by medoid region index, member ids sorted.
inline void write_grouping_json(const Grouping& g, const RegionSet& regions, bool contiguity,
                                const std::string& path) {
  nlohmann::ordered_json doc;
  doc["k"] = g.medoids.size();
  doc["contiguity"] = contiguity;
  doc["objective"] = g.objective;
  doc["groups"] = nlohmann::ordered_json::array();
  for (const auto& group : g.groups()) {
    nlohmann::ordered_json entry;
    entry["medoid"] = regions.id(group.medoid);
    std::vector<std::string> ids;
    for (std::size_t i : group.members) ids.push_back(regions.id(i));
    std::sort(ids.begin(), ids.end());
    entry["members"] = ids;
    doc["groups"].push_back(std::move(entry));
  }
  doc["cuts_added"] = g.cuts_added;
  doc["rounds"] = g.rounds;
  detail::write_file(path, doc.dump(2) + "\n");
}

// distances.csv: upper triangle in region order, 17 significant digits.
inline void write_distances_csv(const Matrix& D, const RegionSet& regions,
                                const std::string& path) {
  std::string out = "region_a,region_b,distance\n";
  for (std::size_t a = 0; a < regions.size(); ++a)
    for (std::size_t b = a + 1; b < regions.size(); ++b)
      out += regions.id(a) + "," + regions.id(b) + "," + detail::fmt_double(D(a, b)) + "\n";
  detail::write_file(path, out);
}

inline void write_geometry_json(const GeometrySet& geom, const RegionSet& regions,
                                const std::string& path) {
  nlohmann::ordered_json doc;
  doc["regions"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["rings"] = nlohmann::ordered_json::array();
    for (const auto& ring : geom.regions[i].rings) {
      nlohmann::ordered_json pts = nlohmann::ordered_json::array();
      for (const auto& p : ring.pts) pts.push_back({p.x, p.y});
      entry["rings"].push_back(std::move(pts));
    }
    entry["island"] = geom.regions[i].island;
    doc["regions"][regions.id(i)] = std::move(entry);
  }
  detail::write_file(path, doc.dump(2) + "\n");
}

// adjacency.csv for a region set: one `region_a,region_b` pair per line,
// upper triangle in region order.
inline void write_adjacency_csv(const ConnectivityMatrix& c, const RegionSet& regions,
                                const std::string& path) {
  std::string out;
  for (std::size_t a = 0; a < regions.size(); ++a)
    for (std::size_t b = a + 1; b < regions.size(); ++b)
      if (c.connected(a, b)) out += regions.id(a) + "," + regions.id(b) + "\n";
  detail::write_file(path, out);
}

// Per technology and region: representatives.csv (rank,capacity,mean_cf) and
// representatives_cf.csv with the series in the 2-d table layout keyed by rank.
inline void write_representatives(const TechAggResult& result, const Dataset& source,
                                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  for (std::size_t ci = 0; ci < result.converted.size(); ++ci) {
    const std::string& tech = result.converted[ci];
    std::size_t ti = 0;
    while (ti < source.technologies.size() && source.technologies[ti] != tech) ++ti;
    if (ti == source.technologies.size()) throw Error("representatives for unknown technology");
    for (std::size_t i = 0; i < source.regions.size(); ++i) {
      const auto& clusters = result.reps[ci][i];
      if (clusters.empty()) continue;
      const std::string dir = out_dir + "/" + source.fleet_dirs[ti] + "/" + source.regions.id(i);
      fs::create_directories(dir);
      std::string summary = "rank,capacity,mean_cf\n";
      std::string series = "rank";
      for (std::size_t t = 1; t <= source.horizon.steps; ++t) series += ",t" + std::to_string(t);
      series += "\n";
      for (std::size_t r = 0; r < clusters.size(); ++r) {
        summary += std::to_string(r + 1) + "," + detail::fmt_double(clusters[r].capacity) + "," +
                   detail::fmt_double(clusters[r].mean_cf) + "\n";
        series += std::to_string(r + 1);
        for (double v : clusters[r].cf) series += "," + detail::fmt_double(v);
        series += "\n";
      }
      detail::write_file(dir + "/representatives.csv", summary);
      detail::write_file(dir + "/representatives_cf.csv", series);
    }
  }
}

}  // namespace spagat
