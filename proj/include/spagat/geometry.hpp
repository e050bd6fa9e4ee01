#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spagat/types.hpp"

namespace spagat {

struct Point {
  double x = 0.0, y = 0.0;
};

// Ordered coordinate ring, implicitly closed (last vertex connects to first).
struct Ring {
  std::vector<Point> pts;  // >= 3 vertices
};

struct RegionGeometry {
  std::vector<Ring> rings;
  bool island = false;
};

// Planar polygon geometry, parallel to a RegionSet.
struct GeometrySet {
  std::vector<RegionGeometry> regions;
  std::size_t size() const { return regions.size(); }
};

namespace detail {

inline double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double point_segment_dist2(const Point& p, const Point& a, const Point& b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return dist2(p, a);
  double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
  t = std::max(0.0, std::min(1.0, t));
  const Point proj{a.x + t * abx, a.y + t * aby};
  return dist2(p, proj);
}

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool segments_intersect(const Point& p1, const Point& p2, const Point& q1,
                               const Point& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline double segment_segment_dist2(const Point& p1, const Point& p2, const Point& q1,
                                    const Point& q2) {
  if (segments_intersect(p1, p2, q1, q2)) return 0.0;
  double best = point_segment_dist2(p1, q1, q2);
  best = std::min(best, point_segment_dist2(p2, q1, q2));
  best = std::min(best, point_segment_dist2(q1, p1, p2));
  best = std::min(best, point_segment_dist2(q2, p1, p2));
  return best;
}

// Minimum distance between the region boundaries (all ring segments).
inline double boundary_distance(const RegionGeometry& ga, const RegionGeometry& gb) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ra : ga.rings) {
    const std::size_t na = ra.pts.size();
    for (std::size_t i = 0; i < na; ++i) {
      const Point& a1 = ra.pts[i];
      const Point& a2 = ra.pts[(i + 1) % na];
      for (const auto& rb : gb.rings) {
        const std::size_t nb = rb.pts.size();
        for (std::size_t j = 0; j < nb; ++j) {
          const Point& b1 = rb.pts[j];
          const Point& b2 = rb.pts[(j + 1) % nb];
          best = std::min(best, segment_segment_dist2(a1, a2, b1, b2));
          if (best == 0.0) return 0.0;
        }
      }
    }
  }
  return std::sqrt(best);
}

// Minimum vertex-to-vertex distance; the island rule measures with this.
inline double vertex_distance(const RegionGeometry& ga, const RegionGeometry& gb) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ra : ga.rings)
    for (const auto& pa : ra.pts)
      for (const auto& rb : gb.rings)
        for (const auto& pb : rb.pts) best = std::min(best, dist2(pa, pb));
  return std::sqrt(best);
}

}  // namespace detail

// geometry.json: {"regions": {"<id>": {"rings": [[[x,y],...],...], "island": bool}}}
inline GeometrySet load_geometry(const std::string& path, const RegionSet& regions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("missing file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed geometry " + path + ": " + e.what());
  }

  GeometrySet geom;
  geom.regions.resize(regions.size());
  std::vector<bool> covered(regions.size(), false);
  try {
    for (const auto& [id, entry] : doc.at("regions").items()) {
      const std::size_t i = regions.index(id);
      covered[i] = true;
      RegionGeometry rg;
      for (const auto& ring_json : entry.at("rings")) {
        Ring ring;
        for (const auto& pt : ring_json)
          ring.pts.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
        if (ring.pts.size() < 3)
          throw InputError("ring with fewer than 3 vertices for region '" + id + "' in " + path);
        rg.rings.push_back(std::move(ring));
      }
      if (rg.rings.empty())
        throw InputError("region '" + id + "' has no rings in " + path);
      if (entry.contains("island")) rg.island = entry["island"].get<bool>();
      geom.regions[i] = std::move(rg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed geometry " + path + ": " + e.what());
  }
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (!covered[i])
      throw InputError("geometry missing region '" + regions.id(i) + "' in " + path);
  return geom;
}

}  // namespace spagat
