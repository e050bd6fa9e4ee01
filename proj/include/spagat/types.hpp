#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spagat {

// Error taxonomy. The CLI maps these to exit codes: InputError -> 2,
// InfeasibleError -> 3, CutLimitError (hess.hpp) -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : Error {
  using Error::Error;
};
struct InfeasibleError : Error {
  using Error::Error;
};

enum class Dimension { regional_1d, regional_2d_time, connection_2d };
enum class ValueKind { real, boolean };
enum class AggRule { sum, mean, weighted_mean, bool_or };

inline std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::regional_1d: return "regional_1d";
    case Dimension::regional_2d_time: return "regional_2d_time";
    case Dimension::connection_2d: return "connection_2d";
  }
  return "?";
}

inline std::string to_string(AggRule r) {
  switch (r) {
    case AggRule::sum: return "sum";
    case AggRule::mean: return "mean";
    case AggRule::weighted_mean: return "weighted_mean";
    case AggRule::bool_or: return "bool_or";
  }
  return "?";
}

inline std::string to_string(ValueKind k) {
  return k == ValueKind::boolean ? "boolean" : "real";
}

inline Dimension dimension_from_string(const std::string& s) {
  if (s == "regional_1d") return Dimension::regional_1d;
  if (s == "regional_2d_time") return Dimension::regional_2d_time;
  if (s == "connection_2d") return Dimension::connection_2d;
  throw InputError("unknown dimension: " + s);
}

inline AggRule agg_rule_from_string(const std::string& s) {
  if (s == "sum") return AggRule::sum;
  if (s == "mean") return AggRule::mean;
  if (s == "weighted_mean") return AggRule::weighted_mean;
  if (s == "bool_or") return AggRule::bool_or;
  throw InputError("unknown aggregation_rule: " + s);
}

inline ValueKind value_kind_from_string(const std::string& s) {
  if (s == "real") return ValueKind::real;
  if (s == "boolean") return ValueKind::boolean;
  throw InputError("unknown value_kind: " + s);
}

// Ordered set of unique region identifiers. The declaration order is the
// canonical index order; every table and matrix in the toolkit uses it.
class RegionSet {
 public:
  RegionSet() = default;

  explicit RegionSet(std::vector<std::string> ids) : ids_(std::move(ids)) {
    if (ids_.empty()) throw InputError("region set must not be empty");
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (ids_[i].empty()) throw InputError("empty region id");
      if (!index_.emplace(ids_[i], i).second)
        throw InputError("duplicate region id: " + ids_[i]);
    }
  }

  std::size_t size() const { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }

  bool contains(const std::string& id) const { return index_.count(id) > 0; }

  std::size_t index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown region: " + id);
    return it->second;
  }

  bool operator==(const RegionSet& o) const { return ids_ == o.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TimeHorizon {
  std::size_t steps = 0;
  bool operator==(const TimeHorizon&) const = default;
};

// One attribute of one model component. Identity is the (component, name)
// pair; several components may carry attributes of the same name.
struct AttributeSpec {
  std::string name;
  std::string component;
  Dimension dimension = Dimension::regional_1d;
  AggRule rule = AggRule::mean;
  std::string weight_attribute;  // set iff rule == weighted_mean; names a
                                 // regional_1d attribute of the same component
  double grouping_weight = 1.0;  // 0 removes the attribute from the distance
                                 // measure, never from aggregation
  ValueKind kind = ValueKind::real;

  std::string key() const { return component + "::" + name; }
  bool operator==(const AttributeSpec&) const = default;
};

// Dense row-major matrix of doubles. Regional 1-d tables are stored n x 1,
// time tables n x T, connection tables n x n.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

// Compensated summation. All reductions in the toolkit accumulate in a fixed
// order through this so results are bit-reproducible across runs.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct Plant {
  std::string id;
  double capacity = 0.0;          // > 0
  std::vector<double> cf;         // length T, each value in [0,1]
  bool operator==(const Plant&) const = default;
};

struct TechFleet {
  std::vector<Plant> plants;
  bool empty() const { return plants.empty(); }
  bool operator==(const TechFleet&) const = default;
};

}  // namespace spagat
