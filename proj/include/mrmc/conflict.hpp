#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrmc/model.hpp"

namespace mrmc {

/// Symmetric, irreflexive adjacency over tuple indices, stored as packed
/// bit rows. Immutable once built.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(int vertex_count);

  int size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  void add_edge(int a, int b);
  bool adjacent(int a, int b) const;
  std::size_t edge_count() const;

  std::span<const std::uint64_t> row(int v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  /// Edge list dump, one "i j" pair (i < j) per line.
  std::string edge_list() const;

 private:
  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct IndependentSet {
  std::vector<int> members;  // sorted ascending
};

/// True iff the two tuples cannot be active simultaneously: they share a
/// (node, radio) endpoint, or they are co-channel and an endpoint of one
/// lies within interference range of the other's transmitter (checked both
/// ways).
bool conflicts(const Tuple& a, const Tuple& b, const Topology& topology);

/// Pairwise application of `conflicts` over the tuple list.
ConflictGraph build_mdcg(const std::vector<Tuple>& tuples, const Topology& topology);

inline constexpr int kDefaultMaximalIsCap = 200000;

/// All maximal independent sets, in lexicographic member order. Throws
/// EnumerationLimitError when more than `cap` sets exist.
std::vector<IndependentSet> enumerate_maximal_is(const ConflictGraph& graph,
                                                 int cap = kDefaultMaximalIsCap);

struct MaxWeightIsResult {
  IndependentSet set;
  double weight = 0.0;
};

/// Exact maximum-weight independent set via branch and bound (greedy
/// incumbent, clique-cover bound). Ties are broken toward the
/// lexicographically smallest member list; with all-zero weights that is the
/// empty set.
MaxWeightIsResult max_weight_is(const ConflictGraph& graph, std::span<const double> weights);

struct PricedIs {
  IndependentSet set;
  double weight = 0.0;
  bool proven = false;  // true when the search closed within the budget
  // further sets above the harvest threshold seen during the search
  std::vector<IndependentSet> extras;
};

inline constexpr double kNoHarvest = 1e300;

/// Budget-capped variant for column-generation pricing: explores at most
/// `node_budget` search nodes and reports whether optimality was proven.
/// Unproven results still carry the best independent set found.
/// `cover_hint` optionally groups vertices that tend to form cliques (the
/// scheduling layer passes channel indices); it only affects the pruning
/// bound, never the optimum. Sets heavier than `harvest_above` encountered
/// along the way are returned as extras.
PricedIs max_weight_is_limited(const ConflictGraph& graph, std::span<const double> weights,
                               long node_budget, std::span<const int> cover_hint = {},
                               double harvest_above = kNoHarvest);

/// Grows `seed` to a maximal independent set, adding vertices in index order.
IndependentSet extend_to_maximal(const ConflictGraph& graph, std::vector<int> seed);

}  // namespace mrmc
