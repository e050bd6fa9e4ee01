#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spagat/connectivity.hpp"
#include "spagat/distance.hpp"
#include "spagat/rng.hpp"
#include "spagat/types.hpp"

namespace spagat {

enum class SolveMode { exact, heuristic };

inline SolveMode solve_mode_from_string(const std::string& s) {
  if (s == "exact") return SolveMode::exact;
  if (s == "heuristic") return SolveMode::heuristic;
  throw InputError("unknown mode: " + s);
}

struct SolverConfig {
  std::size_t k = 1;
  bool contiguity = true;
  SolveMode mode = SolveMode::exact;
  std::uint64_t seed = 0;
  std::size_t max_cut_rounds = 1000;
  std::uint64_t exact_node_limit = 500'000'000;  // branch guard for exact mode
};

struct Group {
  std::size_t medoid = 0;
  std::vector<std::size_t> members;  // ascending, includes the medoid
};

// Partition of the region set into k groups, each with a designated medoid.
// assignment[i] is the medoid region index of i's group; medoids are
// self-assigned.
struct Grouping {
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> medoids;  // ascending, size k
  double objective = 0.0;
  std::size_t cuts_added = 0;
  std::size_t rounds = 0;

  std::vector<Group> groups() const {
    std::vector<Group> out;
    for (std::size_t m : medoids) {
      Group g;
      g.medoid = m;
      for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == m) g.members.push_back(i);
      out.push_back(std::move(g));
    }
    return out;
  }
};

// Cut derived from an (a,j)-separator C: any grouping that assigns a to
// medoid j must also assign at least one member of C to j, because removing
// C from the adjacency graph disconnects a from j.
struct SeparatorCut {
  std::size_t a = 0;
  std::size_t medoid = 0;
  std::vector<std::size_t> cut;  // ascending, disjoint from {a, medoid}
  bool operator==(const SeparatorCut&) const = default;
  bool operator<(const SeparatorCut& o) const {
    return std::tie(a, medoid, cut) < std::tie(o.a, o.medoid, o.cut);
  }
};

inline bool cut_satisfied(const SeparatorCut& cut, const std::vector<std::size_t>& assignment) {
  if (assignment[cut.a] != cut.medoid) return true;
  for (std::size_t c : cut.cut)
    if (assignment[c] == cut.medoid) return true;
  return false;
}

struct CutTraceEntry {
  SeparatorCut cut;
  std::vector<std::size_t> incumbent;  // assignment that triggered the cut
};

struct SolveTrace {
  std::vector<CutTraceEntry> cuts;
  std::size_t rounds = 0;
};

struct CutLimitError : Error {
  CutLimitError(const std::string& msg, Grouping inc, std::size_t viol)
      : Error(msg), incumbent(std::move(inc)), violations(viol) {}
  Grouping incumbent;
  std::size_t violations = 0;
};

namespace detail {

// The one objective everyone reports: sum of D(i, medoid(i)) accumulated in
// region order with compensated summation. Exact solver, heuristic and brute
// force all hand complete assignments to this, so equal partitions give
// bit-equal objectives.
inline double canonical_objective(const Matrix& D, const std::vector<std::size_t>& assignment) {
  KahanSum sum;
  for (std::size_t i = 0; i < assignment.size(); ++i) sum.add(D(i, assignment[i]));
  return sum.value();
}

// Internal branch-and-bound pruning uses plain sums; this slack keeps an
// ulp-level mismatch with the canonical objective from ever cutting off the
// true optimum.
inline double prune_margin(double incumbent) {
  return 1e-9 * (1.0 + std::abs(incumbent));
}

inline bool separates(std::size_t a, std::size_t j, const std::vector<std::size_t>& cut,
                      const ConnectivityMatrix& c) {
  std::vector<std::uint8_t> blocked(c.size(), 0);
  for (std::size_t v : cut) blocked[v] = 1;
  if (blocked[a] || blocked[j]) throw Error("separator overlaps its endpoints");
  std::vector<std::uint8_t> visited(c.size(), 0);
  std::vector<std::size_t> stack{a};
  visited[a] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == j) return false;
    for (std::size_t v = 0; v < c.size(); ++v) {
      if (visited[v] || blocked[v] || !c.connected(u, v)) continue;
      visited[v] = 1;
      stack.push_back(v);
    }
  }
  return true;
}

}  // namespace detail

// Builds an (a,j)-separator for a fragment representative a whose medoid j
// lies in a different component of the subgraph induced by `members`: the
// neighborhood of a's fragment, greedily minimized in region order. The
// result may be empty when a's fragment is a whole component of the full
// graph (the cut then pins x[a][j] to zero).
inline SeparatorCut find_separator(std::size_t a, std::size_t j,
                                   const std::vector<std::size_t>& members,
                                   const ConnectivityMatrix& c) {
  auto comps = components(members, c);
  const std::vector<std::size_t>* fragment = nullptr;
  for (const auto& comp : comps) {
    const bool has_a = std::binary_search(comp.begin(), comp.end(), a);
    const bool has_j = std::binary_search(comp.begin(), comp.end(), j);
    if (has_a && has_j)
      throw Error("find_separator: regions " + std::to_string(a) + " and " + std::to_string(j) +
                  " are connected within members");
    if (has_a) fragment = &comp;
  }
  if (!fragment) throw Error("find_separator: region a is not in members");

  std::vector<std::uint8_t> in_fragment(c.size(), 0);
  for (std::size_t v : *fragment) in_fragment[v] = 1;

  std::vector<std::size_t> cut;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (in_fragment[v] || v == a || v == j) continue;
    for (std::size_t u : *fragment) {
      if (c.connected(u, v)) {
        cut.push_back(v);
        break;
      }
    }
  }

  // drop every vertex whose removal keeps the set a separator
  for (std::size_t pos = 0; pos < cut.size();) {
    std::vector<std::size_t> reduced;
    reduced.reserve(cut.size() - 1);
    for (std::size_t q = 0; q < cut.size(); ++q)
      if (q != pos) reduced.push_back(cut[q]);
    if (detail::separates(a, j, reduced, c))
      cut = std::move(reduced);
    else
      ++pos;
  }

  if (!detail::separates(a, j, cut, c))
    throw Error("find_separator: produced set does not separate its endpoints");
  return SeparatorCut{a, j, std::move(cut)};
}

namespace detail {

struct AssignmentResult {
  std::vector<std::size_t> assignment;
  double objective = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

// Exact Hess solve: branch and bound over medoid k-subsets in lexicographic
// order, with a nested assignment search that honors the accumulated
// separator cuts. Intended for n up to roughly 25.
class ExactSolver {
 public:
  ExactSolver(const Matrix& D, std::size_t k, const std::vector<SeparatorCut>& cuts,
              std::uint64_t node_limit)
      : D_(D), n_(D.rows()), k_(k), cuts_(cuts), node_limit_(node_limit) {
    // suffix_min_[i][s] = min over candidate medoids j >= s of D(i,j)
    suffix_min_.assign(n_, std::vector<double>(n_ + 1, std::numeric_limits<double>::infinity()));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t s = n_; s-- > 0;)
        suffix_min_[i][s] = std::min(suffix_min_[i][s + 1], D_(i, s));
    nearest_.assign(n_, std::numeric_limits<double>::infinity());
  }

  AssignmentResult run() {
    medoids_.clear();
    best_ = AssignmentResult{};
    choose_medoids(0);
    return best_;
  }

 private:
  void bump_nodes() {
    if (++nodes_ > node_limit_)
      throw Error("exact solver node limit exceeded (" + std::to_string(node_limit_) + ")");
  }

  void choose_medoids(std::size_t start) {
    bump_nodes();
    if (medoids_.size() == k_) {
      solve_assignment();
      return;
    }
    const std::size_t remaining = k_ - medoids_.size();
    for (std::size_t next = start; next + remaining <= n_; ++next) {
      std::vector<double> saved = nearest_;
      for (std::size_t i = 0; i < n_; ++i) nearest_[i] = std::min(nearest_[i], D_(i, next));
      medoids_.push_back(next);

      double bound = 0.0;
      if (medoids_.size() == k_) {
        for (std::size_t i = 0; i < n_; ++i) bound += nearest_[i];
      } else {
        for (std::size_t i = 0; i < n_; ++i)
          bound += std::min(nearest_[i], suffix_min_[i][next + 1]);
      }
      if (!best_.feasible || bound <= best_.objective + prune_margin(best_.objective))
        choose_medoids(next + 1);

      medoids_.pop_back();
      nearest_ = std::move(saved);
    }
  }

  void solve_assignment() {
    free_.clear();
    relevant_cuts_.clear();
    assign_.assign(n_, kUnassigned);
    for (std::size_t j : medoids_) assign_[j] = j;
    for (std::size_t i = 0; i < n_; ++i)
      if (assign_[i] == kUnassigned) free_.push_back(i);
    for (const auto& cut : cuts_) {
      if (assign_[cut.medoid] != cut.medoid) continue;  // medoid not chosen
      if (assign_[cut.a] == cut.a) continue;            // a is a medoid here
      relevant_cuts_.push_back(&cut);
    }

    // rest_lb_[p] = sum of nearest-medoid distances of free regions p..end
    rest_lb_.assign(free_.size() + 1, 0.0);
    for (std::size_t p = free_.size(); p-- > 0;)
      rest_lb_[p] = rest_lb_[p + 1] + nearest_[free_[p]];

    descend(0, 0.0);
  }

  bool partial_cut_violation() const {
    for (const SeparatorCut* cut : relevant_cuts_) {
      if (assign_[cut->a] != cut->medoid) continue;
      bool open = false;  // some member of C unassigned or already on j
      for (std::size_t c : cut->cut) {
        if (assign_[c] == kUnassigned || assign_[c] == cut->medoid) {
          open = true;
          break;
        }
      }
      if (!open) return true;
    }
    return false;
  }

  void descend(std::size_t pos, double partial_cost) {
    bump_nodes();
    if (pos == free_.size()) {
      for (const SeparatorCut* cut : relevant_cuts_)
        if (!cut_satisfied(*cut, assign_)) return;
      const double obj = canonical_objective(D_, assign_);
      if (!best_.feasible || obj < best_.objective) {
        best_.feasible = true;
        best_.objective = obj;
        best_.assignment = assign_;
      }
      return;
    }
    const std::size_t r = free_[pos];
    for (std::size_t j : medoids_) {
      const double cost = partial_cost + D_(r, j);
      if (best_.feasible &&
          cost + rest_lb_[pos + 1] > best_.objective + prune_margin(best_.objective))
        continue;
      assign_[r] = j;
      if (!partial_cut_violation()) descend(pos + 1, cost);
      assign_[r] = kUnassigned;
    }
  }

  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  const Matrix& D_;
  std::size_t n_, k_;
  const std::vector<SeparatorCut>& cuts_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;

  std::vector<std::vector<double>> suffix_min_;
  std::vector<double> nearest_;  // min distance to the current partial medoid set
  std::vector<std::size_t> medoids_;
  std::vector<std::size_t> free_;
  std::vector<const SeparatorCut*> relevant_cuts_;
  std::vector<double> rest_lb_;
  std::vector<std::size_t> assign_;
  AssignmentResult best_;
};

inline double assignment_cost(const Matrix& D, const std::vector<std::size_t>& members,
                              const std::vector<std::size_t>& medoids) {
  KahanSum sum;
  for (std::size_t v : members) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m : medoids) best = std::min(best, D(v, m));
    sum.add(best);
  }
  return sum.value();
}

// Greedy farthest-point seeding followed by PAM-style medoid swaps over one
// member set. The seed picks the first medoid; everything after is
// tie-broken by region order.
inline std::vector<std::size_t> pam_medoids(const Matrix& D,
                                            const std::vector<std::size_t>& members,
                                            std::size_t k_local, Rng& rng) {
  std::vector<std::size_t> medoids{members[rng.below(members.size())]};
  std::vector<double> mind(members.size());
  for (std::size_t p = 0; p < members.size(); ++p) mind[p] = D(members[p], medoids[0]);
  while (medoids.size() < k_local) {
    double best = -1.0;
    std::size_t best_p = members.size();
    for (std::size_t p = 0; p < members.size(); ++p) {
      if (mind[p] > best &&
          std::find(medoids.begin(), medoids.end(), members[p]) == medoids.end()) {
        best = mind[p];
        best_p = p;
      }
    }
    medoids.push_back(members[best_p]);
    for (std::size_t p = 0; p < members.size(); ++p)
      mind[p] = std::min(mind[p], D(members[p], medoids.back()));
  }
  std::sort(medoids.begin(), medoids.end());
  if (k_local == members.size()) return medoids;

  // swap search, first improvement, fixed scan order
  double current = assignment_cost(D, members, medoids);
  std::vector<std::size_t> nearest_idx(members.size());
  std::vector<double> d1(members.size()), d2(members.size());
  auto refresh = [&] {
    for (std::size_t p = 0; p < members.size(); ++p) {
      d1[p] = d2[p] = std::numeric_limits<double>::infinity();
      for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
        const double d = D(members[p], medoids[mi]);
        if (d < d1[p]) {
          d2[p] = d1[p];
          d1[p] = d;
          nearest_idx[p] = mi;
        } else if (d < d2[p]) {
          d2[p] = d;
        }
      }
    }
  };
  refresh();

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t mi = 0; mi < medoids.size() && !improved; ++mi) {
      for (std::size_t p = 0; p < members.size() && !improved; ++p) {
        const std::size_t h = members[p];
        if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
        double delta = 0.0;
        for (std::size_t q = 0; q < members.size(); ++q) {
          const double dh = D(members[q], h);
          const double base = d1[q];
          const double after = (nearest_idx[q] == mi) ? std::min(d2[q], dh) : std::min(base, dh);
          delta += after - base;
        }
        if (delta < 0.0) {
          std::vector<std::size_t> candidate = medoids;
          candidate[mi] = h;
          std::sort(candidate.begin(), candidate.end());
          const double cost = assignment_cost(D, members, candidate);
          if (cost < current) {
            medoids = std::move(candidate);
            current = cost;
            refresh();
            improved = true;
          }
        }
      }
    }
  }
  return medoids;
}

inline void assign_nearest(const Matrix& D, const std::vector<std::size_t>& members,
                           const std::vector<std::size_t>& medoids,
                           std::vector<std::size_t>& assignment) {
  for (std::size_t v : members) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_m = medoids.front();
    for (std::size_t m : medoids) {
      if (D(v, m) < best) {
        best = D(v, m);
        best_m = m;
      }
    }
    assignment[v] = best_m;
  }
}

// Moves every fragment that lost its medoid into the adjacent group with the
// least objective increase. Each move merges the fragment into a neighboring
// group, so the total component count drops every iteration.
inline void repair_contiguity(const Matrix& D, const ConnectivityMatrix& c,
                              std::vector<std::size_t>& assignment,
                              std::vector<std::size_t>& medoids) {
  const std::size_t n = assignment.size();
  std::size_t guard = 0;
  while (true) {
    if (++guard > n + 2) throw Error("contiguity repair failed to converge");
    bool moved = false;
    for (std::size_t j : medoids) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (assignment[i] == j) members.push_back(i);
      auto comps = components(members, c);
      if (comps.size() <= 1) continue;
      const std::vector<std::size_t>* fragment = nullptr;
      for (const auto& comp : comps) {
        if (!std::binary_search(comp.begin(), comp.end(), j)) {
          fragment = &comp;
          break;
        }
      }
      double best_delta = std::numeric_limits<double>::infinity();
      std::size_t best_h = n;
      for (std::size_t h : medoids) {
        if (h == j) continue;
        bool adjacent = false;
        for (std::size_t v : *fragment) {
          for (std::size_t u = 0; u < n && !adjacent; ++u)
            if (assignment[u] == h && c.connected(v, u)) adjacent = true;
          if (adjacent) break;
        }
        if (!adjacent) continue;
        double delta = 0.0;
        for (std::size_t v : *fragment) delta += D(v, h) - D(v, j);
        if (delta < best_delta) {
          best_delta = delta;
          best_h = h;
        }
      }
      if (best_h == n)
        throw InfeasibleError("disconnected fragment has no adjacent group to join");
      for (std::size_t v : *fragment) assignment[v] = best_h;
      moved = true;
      break;  // recompute groups from scratch after every move
    }
    if (!moved) break;
  }

  // re-derive each group's medoid as its 1-median
  std::vector<std::size_t> new_medoids;
  for (std::size_t j : medoids) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (assignment[i] == j) members.push_back(i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = j;
    for (std::size_t cand : members) {
      KahanSum sum;
      for (std::size_t i : members) sum.add(D(i, cand));
      if (sum.value() < best) {
        best = sum.value();
        best_j = cand;
      }
    }
    new_medoids.push_back(best_j);
    for (std::size_t i : members) assignment[i] = best_j;
  }
  std::sort(new_medoids.begin(), new_medoids.end());
  medoids = std::move(new_medoids);
}

// Distributes k medoids over the graph components: at least one per
// component, remainder by largest quota remainder, capped by component size.
inline std::vector<std::size_t> allocate_group_counts(
    const std::vector<std::vector<std::size_t>>& comps, std::size_t k, std::size_t n) {
  const std::size_t q = comps.size();
  std::vector<double> quota(q);
  std::vector<std::size_t> count(q);
  for (std::size_t i = 0; i < q; ++i) {
    quota[i] = static_cast<double>(k) * static_cast<double>(comps[i].size()) /
               static_cast<double>(n);
    count[i] = std::clamp<std::size_t>(static_cast<std::size_t>(quota[i]), 1, comps[i].size());
  }
  auto total = [&] {
    std::size_t s = 0;
    for (std::size_t v : count) s += v;
    return s;
  };
  while (total() < k) {
    std::size_t best = q;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q; ++i) {
      if (count[i] >= comps[i].size()) continue;
      const double gap = quota[i] - static_cast<double>(count[i]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == q) throw InfeasibleError("cannot place k groups across graph components");
    ++count[best];
  }
  while (total() > k) {
    std::size_t best = q;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q; ++i) {
      if (count[i] <= 1) continue;
      const double gap = quota[i] - static_cast<double>(count[i]);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == q) throw InfeasibleError("cannot place k groups across graph components");
    --count[best];
  }
  return count;
}

inline AssignmentResult heuristic_assign(const Matrix& D, const ConnectivityMatrix& c,
                                         const SolverConfig& cfg) {
  const std::size_t n = D.rows();
  Rng rng(cfg.seed);
  std::vector<std::size_t> assignment(n, 0);
  std::vector<std::size_t> medoids;

  if (!cfg.contiguity) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    medoids = pam_medoids(D, all, cfg.k, rng);
    assign_nearest(D, all, medoids, assignment);
  } else {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    auto comps = components(all, c);
    auto counts = allocate_group_counts(comps, cfg.k, n);
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      auto local = pam_medoids(D, comps[ci], counts[ci], rng);
      assign_nearest(D, comps[ci], local, assignment);
      medoids.insert(medoids.end(), local.begin(), local.end());
    }
    repair_contiguity(D, c, assignment, medoids);
  }

  std::sort(medoids.begin(), medoids.end());
  AssignmentResult res;
  res.assignment = std::move(assignment);
  res.objective = canonical_objective(D, res.assignment);
  res.feasible = true;
  return res;
}

inline void validate_distance_matrix(const Matrix& D) {
  if (D.rows() != D.cols() || D.rows() == 0)
    throw InputError("distance matrix must be square and non-empty");
  for (std::size_t a = 0; a < D.rows(); ++a) {
    if (D(a, a) != 0.0) throw InputError("distance matrix diagonal must be zero");
    for (std::size_t b = 0; b < D.cols(); ++b) {
      if (!std::isfinite(D(a, b)) || D(a, b) < 0.0)
        throw InputError("distance matrix entries must be finite and nonnegative");
      if (D(a, b) != D(b, a)) throw InputError("distance matrix must be symmetric");
    }
  }
}

inline Grouping grouping_from(const Matrix& D, const AssignmentResult& res) {
  Grouping g;
  g.assignment = res.assignment;
  std::set<std::size_t> meds;
  for (std::size_t i = 0; i < res.assignment.size(); ++i) meds.insert(res.assignment[i]);
  g.medoids.assign(meds.begin(), meds.end());
  g.objective = canonical_objective(D, g.assignment);
  return g;
}

}  // namespace detail

// Solves the k-medoids assignment model, lazily adding separator cuts until
// every group induces a connected subgraph (contiguity on). Exact mode is
// provably optimal; heuristic mode returns a feasible contiguous grouping
// that is deterministic for a fixed seed.
inline Grouping solve(const DistanceMatrix& D, const ConnectivityMatrix& c,
                      const SolverConfig& cfg, SolveTrace* trace = nullptr) {
  detail::validate_distance_matrix(D);
  const std::size_t n = D.rows();
  if (cfg.k < 1 || cfg.k > n)
    throw InputError("k must satisfy 1 <= k <= n (k=" + std::to_string(cfg.k) +
                     ", n=" + std::to_string(n) + ")");
  if (cfg.contiguity) {
    if (c.size() != n) throw InputError("connectivity matrix size does not match regions");
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const std::size_t q = components(all, c).size();
    if (cfg.k < q)
      throw InfeasibleError("contiguity requires at least " + std::to_string(q) +
                            " groups (graph has " + std::to_string(q) +
                            " components) but k=" + std::to_string(cfg.k));
  }

  std::vector<SeparatorCut> cuts;
  std::set<SeparatorCut> cut_index;
  Grouping incumbent;

  const std::size_t rounds_limit = cfg.contiguity ? std::max<std::size_t>(1, cfg.max_cut_rounds) : 1;
  for (std::size_t round = 1; round <= rounds_limit; ++round) {
    detail::AssignmentResult res;
    if (cfg.mode == SolveMode::exact) {
      detail::ExactSolver solver(D, cfg.k, cuts, cfg.exact_node_limit);
      res = solver.run();
      if (!res.feasible) throw InfeasibleError("no assignment satisfies the accumulated cuts");
    } else {
      res = detail::heuristic_assign(D, c, cfg);
    }
    incumbent = detail::grouping_from(D, res);
    incumbent.rounds = round;
    incumbent.cuts_added = cuts.size();

    if (!cfg.contiguity) {
      if (trace) trace->rounds = round;
      return incumbent;
    }

    // scout the incumbent for fragments separated from their medoid
    std::size_t fragments = 0;
    for (const auto& group : incumbent.groups()) {
      auto comps = components(group.members, c);
      if (comps.size() <= 1) continue;
      for (const auto& comp : comps) {
        if (std::binary_search(comp.begin(), comp.end(), group.medoid)) continue;
        ++fragments;
        SeparatorCut cut = find_separator(comp.front(), group.medoid, group.members, c);
        if (!cut_index.insert(cut).second)
          throw Error("cut generation stalled: duplicate separator cut");
        if (trace) trace->cuts.push_back({cut, incumbent.assignment});
        cuts.push_back(std::move(cut));
      }
    }
    incumbent.cuts_added = cuts.size();
    if (fragments == 0) {
      incumbent.rounds = round;
      if (trace) trace->rounds = round;
      return incumbent;
    }
    if (round == rounds_limit)
      throw CutLimitError("cut round limit (" + std::to_string(rounds_limit) +
                              ") exceeded with " + std::to_string(fragments) +
                              " disconnected fragments",
                          incumbent, fragments);
  }
  throw Error("unreachable");
}

// Exhaustive oracle over all k-partitions (n <= 10). Group cost picks the
// best medoid inside each part; ties between optimal partitions resolve to
// the lexicographically smallest sorted medoid set.
inline Grouping brute_force(const DistanceMatrix& D, const ConnectivityMatrix& c, std::size_t k,
                            bool contiguity) {
  detail::validate_distance_matrix(D);
  const std::size_t n = D.rows();
  if (n > 10) throw InputError("brute_force supports n <= 10");
  if (k < 1 || k > n) throw InputError("k must satisfy 1 <= k <= n");
  if (contiguity && c.size() != n)
    throw InputError("connectivity matrix size does not match regions");

  std::vector<std::size_t> label(n, 0);
  bool found = false;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_assignment, best_medoids;

  auto consider = [&] {
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t i = 0; i < n; ++i) blocks[label[i]].push_back(i);
    if (contiguity) {
      for (const auto& block : blocks)
        if (components(block, c).size() != 1) return;
    }
    // every per-block medoid choice is scored against the full canonical
    // objective; picking block medoids by per-block sums alone can be off by
    // an ulp against the flat accumulation order
    std::vector<std::size_t> choice(k, 0);
    std::vector<std::size_t> assignment(n), medoids(k);
    while (true) {
      for (std::size_t b = 0; b < k; ++b) {
        const std::size_t medoid = blocks[b][choice[b]];
        medoids[b] = medoid;
        for (std::size_t i : blocks[b]) assignment[i] = medoid;
      }
      std::vector<std::size_t> sorted_medoids = medoids;
      std::sort(sorted_medoids.begin(), sorted_medoids.end());
      const double obj = detail::canonical_objective(D, assignment);
      if (!found || obj < best_obj || (obj == best_obj && sorted_medoids < best_medoids)) {
        found = true;
        best_obj = obj;
        best_assignment = assignment;
        best_medoids = std::move(sorted_medoids);
      }
      std::size_t b = 0;
      while (b < k && ++choice[b] == blocks[b].size()) choice[b++] = 0;
      if (b == k) break;
    }
  };

  // enumerate set partitions as restricted growth strings with exactly k blocks
  auto recurse = [&](auto&& self, std::size_t i, std::size_t blocks_used) -> void {
    if (i == n) {
      if (blocks_used == k) consider();
      return;
    }
    if (blocks_used + (n - i) < k) return;  // cannot reach k blocks any more
    const std::size_t limit = std::min(blocks_used + 1, k);
    for (std::size_t v = 0; v < limit; ++v) {
      label[i] = v;
      self(self, i + 1, std::max(blocks_used, v + 1));
    }
  };
  recurse(recurse, 0, 0);

  if (!found)
    throw InfeasibleError("no feasible partition into " + std::to_string(k) +
                          " connected groups");
  Grouping g;
  g.assignment = std::move(best_assignment);
  g.medoids = std::move(best_medoids);
  g.objective = best_obj;
  g.rounds = 1;
  return g;
}

}  // namespace spagat
