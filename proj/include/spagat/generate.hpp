#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spagat/dataset.hpp"
#include "spagat/geometry.hpp"
#include "spagat/io.hpp"
#include "spagat/rng.hpp"
#include "spagat/types.hpp"

namespace spagat {

struct GenConfig {
  std::size_t n_regions = 9;
  std::size_t time_steps = 24;
  std::size_t n_plants = 4;  // per region, per technology
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Dataset dataset;
  GeometrySet geometry;
};

namespace detail {

inline std::string region_name(std::size_t index, std::size_t n) {
  const std::size_t width = std::to_string(n).size();
  std::string num = std::to_string(index + 1);
  while (num.size() < width) num.insert(num.begin(), '0');
  return "R" + num;
}

// smooth low-frequency field over the grid; neighboring regions get similar
// values, which gives the instance its spatial structure
inline double smooth_field(double col, double row, double phase) {
  return 0.5 * (std::sin(0.61 * col + phase) + std::cos(0.47 * row + 1.7 * phase));
}

inline double clamp01(double v) { return std::max(0.0, std::min(1.0, v)); }

}  // namespace detail

// Deterministic synthetic instance: unit-square grid geometry, spatially
// correlated attribute fields, grid-neighbor transmission links and
// two-archetype CF fleets for wind and photovoltaic plants.
inline GeneratedInstance generate_instance(const GenConfig& cfg) {
  if (cfg.n_regions < 1) throw InputError("n_regions must be >= 1");
  if (cfg.time_steps < 1) throw InputError("time_steps must be >= 1");
  if (cfg.n_plants < 1) throw InputError("n_plants must be >= 1");

  const std::size_t n = cfg.n_regions;
  const std::size_t T = cfg.time_steps;
  const std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  Rng rng(cfg.seed);

  GeneratedInstance out;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(detail::region_name(i, n));
  out.dataset.regions = RegionSet(ids);
  out.dataset.horizon.steps = T;

  out.geometry.regions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double col = static_cast<double>(i % cols);
    const double row = static_cast<double>(i / cols);
    Ring ring;
    ring.pts = {{col, row}, {col + 1, row}, {col + 1, row + 1}, {col, row + 1}};
    out.geometry.regions[i].rings.push_back(std::move(ring));
  }

  auto grid_pos = [&](std::size_t i) {
    return std::pair<double, double>{static_cast<double>(i % cols),
                                     static_cast<double>(i / cols)};
  };

  Dataset& d = out.dataset;
  auto add_1d = [&](const std::string& component, const std::string& name, AggRule rule,
                    ValueKind kind = ValueKind::real) -> Matrix& {
    AttributeSpec spec;
    spec.component = component;
    spec.name = name;
    spec.dimension = Dimension::regional_1d;
    spec.rule = rule;
    spec.kind = kind;
    d.specs.push_back(std::move(spec));
    d.tables.emplace_back(n, 1, 0.0);
    return d.tables.back();
  };
  auto add_2d = [&](const std::string& component, const std::string& name, AggRule rule,
                    const std::string& weight = "") -> Matrix& {
    AttributeSpec spec;
    spec.component = component;
    spec.name = name;
    spec.dimension = Dimension::regional_2d_time;
    spec.rule = rule;
    spec.weight_attribute = weight;
    d.specs.push_back(std::move(spec));
    d.tables.emplace_back(n, T, 0.0);
    return d.tables.back();
  };
  auto add_conn = [&](const std::string& component, const std::string& name, AggRule rule)
      -> Matrix& {
    AttributeSpec spec;
    spec.component = component;
    spec.name = name;
    spec.dimension = Dimension::connection_2d;
    spec.rule = rule;
    d.specs.push_back(std::move(spec));
    d.tables.emplace_back(n, n, 0.0);
    return d.tables.back();
  };

  {
    Matrix& demand = add_2d("Electricity demand", "Fixed operation rate", AggRule::sum);
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = grid_pos(i);
      const double scale = 60.0 + 40.0 * detail::smooth_field(cx, cy, 0.3);
      const double phase = rng.uniform(0.0, 0.5);
      for (std::size_t t = 0; t < T; ++t) {
        const double daily =
            1.0 + 0.35 * std::sin(6.283185307179586 * (static_cast<double>(t % 24) / 24.0 + phase));
        demand(i, t) = std::max(1.0, scale * daily + 2.0 * rng.normal());
      }
    }
  }
  {
    Matrix& heat = add_2d("Heat demand", "Fixed operation rate", AggRule::sum);
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = grid_pos(i);
      const double scale = 30.0 + 20.0 * detail::smooth_field(cx, cy, 1.1);
      for (std::size_t t = 0; t < T; ++t) {
        const double seasonal =
            1.0 + 0.5 * std::cos(6.283185307179586 * static_cast<double>(t) /
                                 std::max<double>(24.0, static_cast<double>(T)));
        heat(i, t) = std::max(0.5, scale * seasonal + 1.5 * rng.normal());
      }
    }
  }

  struct VresSpec {
    const char* component;
    double cf_base;
    double cf_swing;
    double phase;
  };
  const VresSpec vres[] = {{"Wind turbine", 0.35, 0.25, 0.0},
                           {"Photovoltaic", 0.20, 0.18, 2.1},
                           {"Hydro plant", 0.45, 0.10, 4.2}};
  for (const auto& v : vres) {
    Matrix& cap = add_1d(v.component, "Maximum capacity", AggRule::sum);
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = grid_pos(i);
      cap(i, 0) = std::max(5.0, 100.0 + 60.0 * detail::smooth_field(cx, cy, v.phase) +
                                    5.0 * rng.normal());
    }
    Matrix& rate = add_2d(v.component, "Maximum operation rate", AggRule::weighted_mean,
                          "Maximum capacity");
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = grid_pos(i);
      const double base = detail::clamp01(v.cf_base + 0.15 * detail::smooth_field(cx, cy, v.phase));
      for (std::size_t t = 0; t < T; ++t) {
        const double cycle = std::sin(6.283185307179586 * static_cast<double>(t % 24) / 24.0 +
                                      v.phase + 0.2 * cx);
        rate(i, t) = detail::clamp01(base + v.cf_swing * cycle + 0.04 * rng.normal());
      }
    }
  }
  {
    Matrix& invest = add_1d("Wind turbine", "Investment per capacity", AggRule::mean);
    for (std::size_t i = 0; i < n; ++i) invest(i, 0) = 900.0 + 150.0 * rng.uniform();
    Matrix& elig = add_1d("Wind turbine", "Locational eligibility", AggRule::bool_or,
                          ValueKind::boolean);
    for (std::size_t i = 0; i < n; ++i) elig(i, 0) = rng.uniform() < 0.85 ? 1.0 : 0.0;
  }

  {
    Matrix& cable_cap = add_conn("AC cable", "Maximum capacity", AggRule::sum);
    Matrix& losses = add_conn("AC cable", "Losses", AggRule::mean);
    Matrix& distances = add_conn("AC cable", "Distances", AggRule::mean);
    Matrix& reactances = add_conn("AC cable", "Reactances", AggRule::sum);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const bool right = (b == a + 1) && (b % cols != 0);
        const bool below = (b == a + cols);
        if (!right && !below) continue;
        const double cap = 50.0 + 150.0 * rng.uniform();
        const double loss = 0.01 + 0.04 * rng.uniform();
        const double dist = 80.0 + 40.0 * rng.uniform();
        const double reac = 1.0 + 4.0 * rng.uniform();
        cable_cap(a, b) = cable_cap(b, a) = cap;
        losses(a, b) = losses(b, a) = loss;
        distances(a, b) = distances(b, a) = dist;
        reactances(a, b) = reactances(b, a) = reac;
      }
    }
  }

  // two-archetype fleets: high-CF and low-CF plants whose series share the
  // technology's daily cycle
  const char* fleet_techs[] = {"Wind turbine", "Photovoltaic"};
  for (const char* tech : fleet_techs) {
    d.technologies.push_back(tech);
    std::string dir_name = tech;
    std::replace(dir_name.begin(), dir_name.end(), ' ', '_');
    d.fleet_dirs.push_back("fleets/" + dir_name);
    std::vector<TechFleet> per_region(n);
    const double phase = tech == std::string("Wind turbine") ? 0.0 : 2.1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < cfg.n_plants; ++p) {
        Plant plant;
        plant.id = "p" + std::to_string(p + 1);
        plant.capacity = 1.0 + 9.0 * rng.uniform();
        const bool high = rng.uniform() < 0.5;
        const double base = high ? 0.55 : 0.2;
        const double swing = high ? 0.2 : 0.1;
        plant.cf.resize(T);
        for (std::size_t t = 0; t < T; ++t) {
          const double cycle =
              std::sin(6.283185307179586 * static_cast<double>(t % 24) / 24.0 + phase);
          plant.cf[t] = detail::clamp01(base + swing * cycle + 0.03 * rng.normal());
        }
        per_region[i].plants.push_back(std::move(plant));
      }
    }
    d.fleets.push_back(std::move(per_region));
  }

  return out;
}

// Emits a complete dataset directory plus geometry.json.
inline void generate_dataset(const GenConfig& cfg, const std::string& out_dir) {
  GeneratedInstance inst = generate_instance(cfg);
  save_dataset(inst.dataset, out_dir);
  write_geometry_json(inst.geometry, inst.dataset.regions, out_dir + "/geometry.json");
}

}  // namespace spagat
