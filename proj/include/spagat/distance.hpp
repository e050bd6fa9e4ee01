#pragma once

#include <cstddef>

#include "spagat/dataset.hpp"
#include "spagat/types.hpp"

namespace spagat {

// Pairwise region distances over all normalized attributes: the sum of a
// squared-difference term per 1-d attribute, a squared-difference term per
// time step per 2-d attribute, and a (1 - link strength)^2 term per
// connection attribute. Each attribute enters multiplied by its
// grouping_weight; weight 0 removes it from the measure entirely.
using DistanceMatrix = Matrix;

inline double regional_1d_distance(const NormalizedDataset& nd, std::size_t a, std::size_t b) {
  KahanSum sum;
  const Dataset& d = nd.data;
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    if (spec.dimension != Dimension::regional_1d) continue;
    if (spec.grouping_weight == 0.0) continue;
    const double diff = d.tables[si](a, 0) - d.tables[si](b, 0);
    sum.add(spec.grouping_weight * diff * diff);
  }
  return sum.value();
}

inline double regional_2d_distance(const NormalizedDataset& nd, std::size_t a, std::size_t b) {
  KahanSum sum;
  const Dataset& d = nd.data;
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    if (spec.dimension != Dimension::regional_2d_time) continue;
    if (spec.grouping_weight == 0.0) continue;
    const Matrix& table = d.tables[si];
    const double w = spec.grouping_weight;
    for (std::size_t t = 0; t < d.horizon.steps; ++t) {
      const double diff = table(a, t) - table(b, t);
      sum.add(w * diff * diff);
    }
  }
  return sum.value();
}

// Connection values are link strengths in [0,1] after normalization, so they
// turn into a distance by subtracting from 1. Asymmetric tables are
// symmetrized as the mean of the two directed values.
inline double connection_2d_distance(const NormalizedDataset& nd, std::size_t a, std::size_t b) {
  KahanSum sum;
  const Dataset& d = nd.data;
  for (std::size_t si = 0; si < d.specs.size(); ++si) {
    const auto& spec = d.specs[si];
    if (spec.dimension != Dimension::connection_2d) continue;
    if (spec.grouping_weight == 0.0) continue;
    const Matrix& table = d.tables[si];
    const double strength = (table(a, b) + table(b, a)) / 2.0;
    const double diff = 1.0 - strength;
    sum.add(spec.grouping_weight * diff * diff);
  }
  return sum.value();
}

inline DistanceMatrix pairwise_distances(const NormalizedDataset& nd) {
  const std::size_t n = nd.data.regions.size();
  DistanceMatrix dist(n, n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double v = regional_1d_distance(nd, a, b) + regional_2d_distance(nd, a, b) +
                       connection_2d_distance(nd, a, b);
      dist(a, b) = v;
      dist(b, a) = v;
    }
  }
  return dist;
}

}  // namespace spagat
