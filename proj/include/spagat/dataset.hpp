#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spagat/csv.hpp"
#include "spagat/log.hpp"
#include "spagat/types.hpp"

namespace spagat {

// The multi-attribute regional dataset every downstream stage consumes.
// Tables are parallel to specs: regional_1d is n x 1, regional_2d_time is
// n x T, connection_2d is n x n (0 = no link; the diagonal is ignored by all
// consumers). Fleets are tech -> region index -> plant list.
struct Dataset {
  RegionSet regions;
  TimeHorizon horizon;
  std::vector<AttributeSpec> specs;
  std::vector<Matrix> tables;
  std::vector<std::string> technologies;
  std::vector<std::string> fleet_dirs;
  std::vector<std::vector<TechFleet>> fleets;

  bool has_attr(const std::string& component, const std::string& name) const {
    for (const auto& s : specs)
      if (s.component == component && s.name == name) return true;
    return false;
  }

  std::size_t attr_index(const std::string& component, const std::string& name) const {
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (specs[i].component == component && specs[i].name == name) return i;
    throw InputError("unknown attribute: " + component + "::" + name);
  }

  bool operator==(const Dataset&) const = default;
};

// Same shape as Dataset, every real-valued attribute min-max rescaled to
// [0,1] (constant attributes become all-zero). Wrapped in its own type so the
// distance stage cannot be fed raw data by accident.
struct NormalizedDataset {
  Dataset data;
  bool operator==(const NormalizedDataset&) const = default;
};

namespace detail {

// Attribute identity is (component, name); the table file name carries both.
inline std::string attr_filename(const AttributeSpec& s) {
  return s.component + "__" + s.name + ".csv";
}

inline void check_name_token(const std::string& s, const std::string& what) {
  if (s.empty()) throw InputError("empty " + what);
  for (char c : s) {
    if (c == '/' || c == '\\' || c == ',' || static_cast<unsigned char>(c) < 0x20)
      throw InputError("invalid character in " + what + ": '" + s + "'");
  }
}

inline void check_boolean_cell(double v, const std::string& context) {
  if (v != 0.0 && v != 1.0)
    throw InputError("boolean table contains non-{0,1} value in " + context);
}

inline Matrix load_regional_1d(const std::string& path, const RegionSet& regions,
                               const AttributeSpec& spec) {
  auto rows = read_csv(path);
  if (rows[0].size() != 2 || rows[0][0] != "region" || rows[0][1] != "value")
    throw InputError("bad header in " + path + " (expected 'region,value')");
  const std::size_t n = regions.size();
  Matrix table(n, 1);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2)
      throw InputError("dimension mismatch in " + path + ": row has " +
                       std::to_string(rows[r].size()) + " columns, expected 2");
    std::size_t i = regions.index(rows[r][0]);
    if (seen[i]) throw InputError("duplicate region row '" + rows[r][0] + "' in " + path);
    seen[i] = true;
    double v = parse_double(rows[r][1], path);
    if (spec.kind == ValueKind::boolean) check_boolean_cell(v, path);
    table(i, 0) = v;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) throw InputError("missing region row '" + regions.id(i) + "' in " + path);
  return table;
}

inline Matrix load_regional_2d(const std::string& path, const RegionSet& regions,
                               const TimeHorizon& horizon, const AttributeSpec& spec) {
  auto rows = read_csv(path);
  const std::size_t T = horizon.steps;
  if (rows[0].size() != T + 1)
    throw InputError("dimension mismatch in " + path + ": header has " +
                     std::to_string(rows[0].size() ? rows[0].size() - 1 : 0) +
                     " time columns, expected " + std::to_string(T));
  if (rows[0][0] != "region")
    throw InputError("bad header in " + path + " (expected 'region,t1,...')");
  const std::size_t n = regions.size();
  Matrix table(n, T);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != T + 1)
      throw InputError("dimension mismatch in " + path + ": row " + std::to_string(r) +
                       " has " + std::to_string(rows[r].size() - 1) + " time columns, expected " +
                       std::to_string(T));
    std::size_t i = regions.index(rows[r][0]);
    if (seen[i]) throw InputError("duplicate region row '" + rows[r][0] + "' in " + path);
    seen[i] = true;
    for (std::size_t t = 0; t < T; ++t) {
      double v = parse_double(rows[r][t + 1], path);
      if (spec.kind == ValueKind::boolean) check_boolean_cell(v, path);
      table(i, t) = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) throw InputError("missing region row '" + regions.id(i) + "' in " + path);
  return table;
}

inline Matrix load_connection_2d(const std::string& path, const RegionSet& regions,
                                 const AttributeSpec& spec) {
  auto rows = read_csv(path);
  if (rows[0].size() != 3 || rows[0][0] != "region_from" || rows[0][1] != "region_to" ||
      rows[0][2] != "value")
    throw InputError("bad header in " + path + " (expected 'region_from,region_to,value')");
  const std::size_t n = regions.size();
  Matrix table(n, n);  // unlisted pairs stay 0 (no link)
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3)
      throw InputError("dimension mismatch in " + path + ": row has " +
                       std::to_string(rows[r].size()) + " columns, expected 3");
    std::size_t a = regions.index(rows[r][0]);
    std::size_t b = regions.index(rows[r][1]);
    if (!seen.insert({a, b}).second)
      throw InputError("duplicate connection entry (" + rows[r][0] + "," + rows[r][1] + ") in " +
                       path);
    double v = parse_double(rows[r][2], path);
    if (v < 0.0) throw InputError("negative connection value in " + path);
    if (spec.kind == ValueKind::boolean) check_boolean_cell(v, path);
    table(a, b) = v;
  }
  return table;
}

inline TechFleet load_fleet(const std::string& region_dir, const TimeHorizon& horizon) {
  namespace fs = std::filesystem;
  TechFleet fleet;
  const std::string plants_path = region_dir + "/plants.csv";
  const std::string cf_path = region_dir + "/cf.csv";
  auto plant_rows = read_csv(plants_path);
  if (plant_rows[0].size() != 2 || plant_rows[0][0] != "plant_id" ||
      plant_rows[0][1] != "capacity")
    throw InputError("bad header in " + plants_path + " (expected 'plant_id,capacity')");
  std::set<std::string> ids;
  for (std::size_t r = 1; r < plant_rows.size(); ++r) {
    if (plant_rows[r].size() != 2)
      throw InputError("dimension mismatch in " + plants_path);
    Plant p;
    p.id = plant_rows[r][0];
    if (!ids.insert(p.id).second)
      throw InputError("duplicate plant_id '" + p.id + "' in " + plants_path);
    p.capacity = parse_double(plant_rows[r][1], plants_path);
    if (p.capacity <= 0.0)
      throw InputError("plant capacity must be > 0 in " + plants_path + " (plant " + p.id + ")");
    fleet.plants.push_back(std::move(p));
  }

  const std::size_t T = horizon.steps;
  auto cf_rows = read_csv(cf_path);
  if (cf_rows[0].size() != T + 1)
    throw InputError("dimension mismatch in " + cf_path + ": header has " +
                     std::to_string(cf_rows[0].size() - 1) + " time columns, expected " +
                     std::to_string(T));
  std::set<std::string> cf_ids;
  for (std::size_t r = 1; r < cf_rows.size(); ++r) {
    if (cf_rows[r].size() != T + 1)
      throw InputError("dimension mismatch in " + cf_path + ": row " + std::to_string(r));
    const std::string& pid = cf_rows[r][0];
    if (!cf_ids.insert(pid).second)
      throw InputError("duplicate plant_id '" + pid + "' in " + cf_path);
    Plant* plant = nullptr;
    for (auto& p : fleet.plants)
      if (p.id == pid) { plant = &p; break; }
    if (!plant) throw InputError("unknown plant_id '" + pid + "' in " + cf_path);
    plant->cf.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      double v = parse_double(cf_rows[r][t + 1], cf_path);
      if (v < 0.0 || v > 1.0)
        throw InputError("capacity factor outside [0,1] in " + cf_path + " (plant " + pid + ")");
      plant->cf[t] = v;
    }
  }
  for (const auto& p : fleet.plants)
    if (p.cf.empty())
      throw InputError("missing cf series for plant '" + p.id + "' in " + cf_path);
  return fleet;
}

}  // namespace detail

// Loads and fully validates a dataset directory (manifest.json plus the
// tables and fleets it references). Region order is the manifest order.
inline Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string manifest_path = dir + "/manifest.json";
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw InputError("missing file: " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed manifest " + manifest_path + ": " + e.what());
  }

  Dataset d;
  try {
    if (!manifest.contains("time_steps") || !manifest["time_steps"].is_number_unsigned() ||
        manifest["time_steps"].get<std::size_t>() == 0)
      throw InputError("manifest time_steps must be a positive integer");
    d.horizon.steps = manifest["time_steps"].get<std::size_t>();

    std::vector<std::string> ids;
    for (const auto& r : manifest.at("regions")) {
      ids.push_back(r.get<std::string>());
      detail::check_name_token(ids.back(), "region id");
    }
    d.regions = RegionSet(std::move(ids));

    std::set<std::string> keys;
    for (const auto& a : manifest.at("attributes")) {
      AttributeSpec spec;
      spec.name = a.at("name").get<std::string>();
      spec.component = a.at("component").get<std::string>();
      detail::check_name_token(spec.name, "attribute name");
      detail::check_name_token(spec.component, "component name");
      spec.dimension = dimension_from_string(a.at("dimension").get<std::string>());
      spec.rule = agg_rule_from_string(a.at("aggregation_rule").get<std::string>());
      if (a.contains("weight_attribute"))
        spec.weight_attribute = a["weight_attribute"].get<std::string>();
      if (spec.rule == AggRule::weighted_mean && spec.weight_attribute.empty())
        throw InputError("attribute " + spec.key() +
                         ": weighted_mean requires weight_attribute");
      if (a.contains("grouping_weight")) {
        spec.grouping_weight = a["grouping_weight"].get<double>();
        if (!(spec.grouping_weight >= 0.0))
          throw InputError("attribute " + spec.key() + ": grouping_weight must be >= 0");
      }
      if (a.contains("value_kind"))
        spec.kind = value_kind_from_string(a["value_kind"].get<std::string>());
      if (!keys.insert(spec.key()).second)
        throw InputError("duplicate attribute: " + spec.key());
      d.specs.push_back(std::move(spec));
    }

    if (manifest.contains("technologies")) {
      std::set<std::string> tech_names;
      for (const auto& t : manifest["technologies"]) {
        std::string name = t.at("name").get<std::string>();
        detail::check_name_token(name, "technology name");
        if (!tech_names.insert(name).second)
          throw InputError("duplicate technology: " + name);
        d.technologies.push_back(name);
        d.fleet_dirs.push_back(t.at("fleet_dir").get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed manifest " + manifest_path + ": " + e.what());
  }

  // weight references must resolve to a regional_1d attribute of the same
  // component before any table is read
  for (const auto& spec : d.specs) {
    if (spec.rule != AggRule::weighted_mean) continue;
    bool found = false;
    for (const auto& other : d.specs) {
      if (other.component == spec.component && other.name == spec.weight_attribute) {
        if (other.dimension != Dimension::regional_1d)
          throw InputError("attribute " + spec.key() + ": weight_attribute '" +
                           spec.weight_attribute + "' is not regional_1d");
        found = true;
        break;
      }
    }
    if (!found)
      throw InputError("attribute " + spec.key() + ": weighted_mean references unknown attribute '" +
                       spec.weight_attribute + "'");
  }

  for (const auto& spec : d.specs) {
    const std::string path = dir + "/" + detail::attr_filename(spec);
    switch (spec.dimension) {
      case Dimension::regional_1d:
        d.tables.push_back(detail::load_regional_1d(path, d.regions, spec));
        break;
      case Dimension::regional_2d_time:
        d.tables.push_back(detail::load_regional_2d(path, d.regions, d.horizon, spec));
        break;
      case Dimension::connection_2d:
        d.tables.push_back(detail::load_connection_2d(path, d.regions, spec));
        break;
    }
  }

  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    std::vector<TechFleet> per_region(d.regions.size());
    for (std::size_t i = 0; i < d.regions.size(); ++i) {
      const std::string region_dir = dir + "/" + d.fleet_dirs[ti] + "/" + d.regions.id(i);
      if (!fs::exists(region_dir)) continue;  // region without plants for this tech
      per_region[i] = detail::load_fleet(region_dir, d.horizon);
    }
    d.fleets.push_back(std::move(per_region));
  }

  log_debug("loaded dataset from " + dir + ": n=" + std::to_string(d.regions.size()) +
            ", T=" + std::to_string(d.horizon.steps) +
            ", attributes=" + std::to_string(d.specs.size()));
  return d;
}

// Writes the dataset directory in canonical form: manifest key order fixed,
// 17-significant-digit decimals, LF endings, connection rows restricted to
// nonzero off-diagonal cells in row-major region order.
inline void save_dataset(const Dataset& d, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  nlohmann::ordered_json manifest;
  manifest["time_steps"] = d.horizon.steps;
  manifest["regions"] = d.regions.ids();
  manifest["attributes"] = nlohmann::ordered_json::array();
  for (const auto& spec : d.specs) {
    nlohmann::ordered_json a;
    a["name"] = spec.name;
    a["component"] = spec.component;
    a["dimension"] = to_string(spec.dimension);
    a["aggregation_rule"] = to_string(spec.rule);
    if (spec.rule == AggRule::weighted_mean) a["weight_attribute"] = spec.weight_attribute;
    a["grouping_weight"] = spec.grouping_weight;
    a["value_kind"] = to_string(spec.kind);
    manifest["attributes"].push_back(std::move(a));
  }
  manifest["technologies"] = nlohmann::ordered_json::array();
  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    nlohmann::ordered_json t;
    t["name"] = d.technologies[ti];
    t["fleet_dir"] = d.fleet_dirs[ti];
    manifest["technologies"].push_back(std::move(t));
  }
  detail::write_file(dir + "/manifest.json", manifest.dump(2) + "\n");

  const std::size_t n = d.regions.size();
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    const auto& table = d.tables[si];
    std::string out;
    switch (spec.dimension) {
      case Dimension::regional_1d: {
        out = "region,value\n";
        for (std::size_t i = 0; i < n; ++i)
          out += d.regions.id(i) + "," + detail::fmt_double(table(i, 0)) + "\n";
        break;
      }
      case Dimension::regional_2d_time: {
        out = "region";
        for (std::size_t t = 1; t <= d.horizon.steps; ++t) out += ",t" + std::to_string(t);
        out += "\n";
        for (std::size_t i = 0; i < n; ++i) {
          out += d.regions.id(i);
          for (std::size_t t = 0; t < d.horizon.steps; ++t)
            out += "," + detail::fmt_double(table(i, t));
          out += "\n";
        }
        break;
      }
      case Dimension::connection_2d: {
        out = "region_from,region_to,value\n";
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) {
            if (a == b || table(a, b) == 0.0) continue;
            out += d.regions.id(a) + "," + d.regions.id(b) + "," +
                   detail::fmt_double(table(a, b)) + "\n";
          }
        break;
      }
    }
    detail::write_file(dir + "/" + detail::attr_filename(spec), out);
  }

  for (std::size_t ti = 0; ti < d.technologies.size(); ++ti) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& fleet = d.fleets[ti][i];
      if (fleet.empty()) continue;
      const std::string region_dir = dir + "/" + d.fleet_dirs[ti] + "/" + d.regions.id(i);
      fs::create_directories(region_dir);
      std::string plants = "plant_id,capacity\n";
      std::string cf = "plant_id";
      for (std::size_t t = 1; t <= d.horizon.steps; ++t) cf += ",t" + std::to_string(t);
      cf += "\n";
      for (const auto& p : fleet.plants) {
        plants += p.id + "," + detail::fmt_double(p.capacity) + "\n";
        cf += p.id;
        for (double v : p.cf) cf += "," + detail::fmt_double(v);
        cf += "\n";
      }
      detail::write_file(region_dir + "/plants.csv", plants);
      detail::write_file(region_dir + "/cf.csv", cf);
    }
  }
}

namespace detail {

inline void minmax_rescale(Matrix& table, double lo, double hi) {
  if (hi == lo) {
    for (double& v : table.values()) v = 0.0;  // constant attribute: zero contribution
    return;
  }
  const double span = hi - lo;
  for (double& v : table.values()) v = (v - lo) / span;
}

}  // namespace detail

// Per-attribute min-max scaling to [0,1]. Boolean attributes pass through.
// Two-dimensional attributes scale over the whole matrix; connection
// attributes scale over off-diagonal cells only and keep a zero diagonal.
inline NormalizedDataset normalize(const Dataset& d) {
  NormalizedDataset nd{d};
  const std::size_t n = d.regions.size();
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    if (spec.kind == ValueKind::boolean) continue;
    Matrix& table = nd.data.tables[si];
    if (spec.dimension == Dimension::connection_2d) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          lo = std::min(lo, table(a, b));
          hi = std::max(hi, table(a, b));
        }
      if (n == 1 || hi == lo) {
        for (double& v : table.values()) v = 0.0;
      } else {
        const double span = hi - lo;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            table(a, b) = (a == b) ? 0.0 : (table(a, b) - lo) / span;
      }
    } else {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (double v : table.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      detail::minmax_rescale(table, lo, hi);
    }
  }
  return nd;
}

}  // namespace spagat
