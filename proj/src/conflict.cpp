#include "mrmc/conflict.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mrmc {

ConflictGraph::ConflictGraph(int vertex_count)
    : n_(vertex_count), words_((static_cast<std::size_t>(vertex_count) + 63) / 64) {
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

void ConflictGraph::add_edge(int a, int b) {
  if (a == b) return;
  bits_[static_cast<std::size_t>(a) * words_ + b / 64] |= 1ull << (b % 64);
  bits_[static_cast<std::size_t>(b) * words_ + a / 64] |= 1ull << (a % 64);
}

bool ConflictGraph::adjacent(int a, int b) const {
  return (bits_[static_cast<std::size_t>(a) * words_ + b / 64] >> (b % 64)) & 1ull;
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t total = 0;
  for (const std::uint64_t w : bits_) total += std::popcount(w);
  return total / 2;
}

std::string ConflictGraph::edge_list() const {
  std::ostringstream out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (adjacent(i, j)) out << i << ' ' << j << '\n';
  return out.str();
}

namespace {

bool shares_radio(const Tuple& a, const Tuple& b) {
  return (a.tx == b.tx && a.tx_radio == b.tx_radio) ||
         (a.tx == b.rx && a.tx_radio == b.rx_radio) ||
         (a.rx == b.tx && a.rx_radio == b.tx_radio) ||
         (a.rx == b.rx && a.rx_radio == b.rx_radio);
}

// Some endpoint of `victim` lies within interference range of the
// transmitter of `offender`.
bool hit_by_transmitter(const Tuple& victim, const Tuple& offender, const Topology& t) {
  return t.distance(victim.tx, offender.tx) <= t.interference_range ||
         t.distance(victim.rx, offender.tx) <= t.interference_range;
}

}  // namespace

bool conflicts(const Tuple& a, const Tuple& b, const Topology& topology) {
  if (shares_radio(a, b)) return true;
  if (a.channel != b.channel) return false;
  return hit_by_transmitter(a, b, topology) || hit_by_transmitter(b, a, topology);
}

ConflictGraph build_mdcg(const std::vector<Tuple>& tuples, const Topology& topology) {
  const int n = static_cast<int>(tuples.size());
  ConflictGraph graph(n);

  // Geometric co-channel conflict depends only on the directed node pairs,
  // so it is precomputed per link and looked up in the pairwise loop.
  std::vector<std::pair<int, int>> links;
  std::vector<int> link_of(n);
  for (int i = 0; i < n; ++i) {
    const std::pair<int, int> key{tuples[i].tx, tuples[i].rx};
    auto it = std::find(links.begin(), links.end(), key);
    if (it == links.end()) {
      links.push_back(key);
      link_of[i] = static_cast<int>(links.size()) - 1;
    } else {
      link_of[i] = static_cast<int>(it - links.begin());
    }
  }
  const int num_links = static_cast<int>(links.size());
  std::vector<char> geo(static_cast<std::size_t>(num_links) * num_links, 0);
  auto within = [&](int a, int b) { return topology.distance(a, b) <= topology.interference_range; };
  for (int la = 0; la < num_links; ++la)
    for (int lb = 0; lb < num_links; ++lb) {
      const auto [atx, arx] = links[la];
      const auto [btx, brx] = links[lb];
      const bool hit = within(atx, btx) || within(arx, btx) || within(btx, atx) || within(brx, atx);
      geo[static_cast<std::size_t>(la) * num_links + lb] = hit ? 1 : 0;
    }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Tuple& a = tuples[i];
      const Tuple& b = tuples[j];
      const bool clash =
          shares_radio(a, b) ||
          (a.channel == b.channel && geo[static_cast<std::size_t>(link_of[i]) * num_links + link_of[j]]);
      if (clash) graph.add_edge(i, j);
    }
  return graph;
}

namespace {

class Bitset {
 public:
  Bitset() = default;
  Bitset(std::size_t words) : w_(words, 0) {}

  void set(int i) { w_[i / 64] |= 1ull << (i % 64); }
  void reset(int i) { w_[i / 64] &= ~(1ull << (i % 64)); }
  bool test(int i) const { return (w_[i / 64] >> (i % 64)) & 1ull; }
  bool empty() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  std::size_t words() const { return w_.size(); }
  std::uint64_t word(std::size_t i) const { return w_[i]; }
  std::uint64_t& word(std::size_t i) { return w_[i]; }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t x = w_[wi];
      while (x) {
        const int bit = std::countr_zero(x);
        f(static_cast<int>(wi * 64 + bit));
        x &= x - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> w_;
};

// Candidates and excluded sets restricted to the complement graph: a
// neighbor in the complement is any non-adjacent distinct vertex.
struct MaximalIsEnumerator {
  const ConflictGraph& g;
  int cap;
  std::vector<IndependentSet> out;
  std::vector<int> current;
  std::vector<Bitset> comp;  // complement adjacency rows

  MaximalIsEnumerator(const ConflictGraph& graph, int cap_) : g(graph), cap(cap_) {
    comp.reserve(g.size());
    for (int v = 0; v < g.size(); ++v) {
      Bitset r(g.words_per_row());
      const auto row = g.row(v);
      for (std::size_t i = 0; i < row.size(); ++i) r.word(i) = ~row[i];
      r.reset(v);
      const int tail = g.size() % 64;
      if (tail) r.word(r.words() - 1) &= (1ull << tail) - 1;
      comp.push_back(std::move(r));
    }
  }

  const Bitset& complement_neighbors(int v) const { return comp[v]; }

  void expand(Bitset candidates, Bitset excluded) {
    if (candidates.empty() && excluded.empty()) {
      if (static_cast<int>(out.size()) >= cap)
        throw EnumerationLimitError(
            "maximal independent set count exceeds cap; use column generation");
      IndependentSet set;
      set.members = current;
      out.push_back(std::move(set));
      return;
    }
    // pivot: vertex of candidates|excluded with the most candidate
    // complement-neighbors (smallest branch set)
    int pivot = -1, best = -1;
    auto consider = [&](int u) {
      const Bitset& cn = complement_neighbors(u);
      int c = 0;
      for (std::size_t i = 0; i < cn.words(); ++i)
        c += std::popcount(cn.word(i) & candidates.word(i));
      if (c > best) {
        best = c;
        pivot = u;
      }
    };
    candidates.for_each(consider);
    excluded.for_each(consider);

    const Bitset& pivot_cn = complement_neighbors(pivot);
    std::vector<int> branch;
    candidates.for_each([&](int v) {
      if (!pivot_cn.test(v)) branch.push_back(v);
    });
    for (const int v : branch) {
      const Bitset& cn = complement_neighbors(v);
      Bitset next_c(candidates.words()), next_x(candidates.words());
      for (std::size_t i = 0; i < candidates.words(); ++i) {
        next_c.word(i) = candidates.word(i) & cn.word(i);
        next_x.word(i) = excluded.word(i) & cn.word(i);
      }
      current.push_back(v);
      expand(next_c, next_x);
      current.pop_back();
      candidates.reset(v);
      excluded.set(v);
    }
  }
};

}  // namespace

std::vector<IndependentSet> enumerate_maximal_is(const ConflictGraph& graph, int cap) {
  if (graph.size() == 0) return {};
  MaximalIsEnumerator e(graph, cap);
  Bitset all(graph.words_per_row());
  for (int v = 0; v < graph.size(); ++v) all.set(v);
  e.expand(all, Bitset(graph.words_per_row()));
  for (auto& s : e.out) std::sort(s.members.begin(), s.members.end());
  std::sort(e.out.begin(), e.out.end(),
            [](const IndependentSet& a, const IndependentSet& b) { return a.members < b.members; });
  return e.out;
}

namespace {

constexpr double kWeightTol = 1e-9;
constexpr long kSearchBudget = 50000000;   // nodes for the optimum search
constexpr long kLexQueryBudget = 8000000;  // shared across tie-break queries

// Branch and bound over the positive-weight vertices with conflict-filtered
// candidate bitsets (positions index into `order`). The pruning bound is a
// greedy clique cover built once over the whole order: an independent set
// takes at most the heaviest remaining candidate from each clique, which is
// never weaker than the plain sum of remaining weights and collapses the
// near-uniform dual vectors that column generation produces. Existence mode
// stops as soon as any set of weight >= target is found.
struct BranchBound {
  const ConflictGraph& g;
  const std::vector<int>& order;       // positive vertices, hint-grouped
  const std::vector<double>& weights;  // full-size weight array
  std::vector<Bitset> nonadj;          // per position: later compatible positions
  std::size_t words = 0;
  std::vector<int> clique_of;          // static greedy cover over positions
  int num_cliques = 0;
  std::vector<int> current, best;
  double best_weight = 0.0;
  bool existence_mode = false;
  double target = 0.0;
  bool found = false;
  std::vector<int> found_set;
  long budget = kSearchBudget;
  bool budget_exceeded = false;
  // leaves heavier than this are collected as extra columns
  double harvest_above = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<int>>> harvest;
  static constexpr std::size_t kHarvestCap = 8;
  mutable std::vector<double> clique_best;
  mutable std::vector<long> clique_stamp;
  mutable long stamp = 0;

  BranchBound(const ConflictGraph& graph, const std::vector<int>& order_,
              const std::vector<double>& w)
      : g(graph), order(order_), weights(w) {
    const std::size_t k = order.size();
    words = (k + 63) / 64;
    nonadj.assign(k, Bitset(words));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (!g.adjacent(order[i], order[j])) nonadj[i].set(static_cast<int>(j));

    // static greedy clique cover in position order; grouped ordering keeps
    // the co-channel cliques intact
    clique_of.assign(k, -1);
    std::vector<std::vector<int>> members;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = 0; c < members.size() && clique_of[i] < 0; ++c) {
        bool all = true;
        for (const int m : members[c])
          if (!g.adjacent(order[i], order[m])) {
            all = false;
            break;
          }
        if (all) {
          clique_of[i] = static_cast<int>(c);
          members[c].push_back(static_cast<int>(i));
        }
      }
      if (clique_of[i] < 0) {
        clique_of[i] = static_cast<int>(members.size());
        members.push_back({static_cast<int>(i)});
      }
    }
    num_cliques = static_cast<int>(members.size());
    clique_best.assign(num_cliques, 0.0);
    clique_stamp.assign(num_cliques, -1);
  }

  // the bound charges each static clique its heaviest remaining candidate
  double cover_bound(const Bitset& candidates) const {
    ++stamp;
    double s = 0.0;
    candidates.for_each([&](int pos) {
      const int c = clique_of[pos];
      const double wv = weights[order[pos]];
      if (clique_stamp[c] != stamp) {
        clique_stamp[c] = stamp;
        clique_best[c] = wv;
        s += wv;
      } else if (wv > clique_best[c]) {
        s += wv - clique_best[c];
        clique_best[c] = wv;
      }
    });
    return s;
  }

  void run() {
    Bitset all(words);
    for (std::size_t i = 0; i < order.size(); ++i) all.set(static_cast<int>(i));
    search(all, 0.0);
  }

  void record_harvest(double acc) {
    if (!(acc > harvest_above) || current.empty()) return;
    for (const auto& [w, set] : harvest)
      if (set == current) return;
    if (harvest.size() < kHarvestCap) {
      harvest.push_back({acc, current});
      return;
    }
    std::size_t weakest = 0;
    for (std::size_t i = 1; i < harvest.size(); ++i)
      if (harvest[i].first < harvest[weakest].first) weakest = i;
    if (acc > harvest[weakest].first) harvest[weakest] = {acc, current};
  }

  void search(const Bitset& candidates, double acc) {
    if (existence_mode && found) return;
    if (--budget < 0) {
      budget_exceeded = true;
      return;
    }
    if (existence_mode) {
      if (acc >= target) {
        found = true;
        found_set = current;
        return;
      }
    } else if (acc > best_weight + kWeightTol) {
      best_weight = acc;
      best = current;
    }
    if (candidates.empty()) {
      record_harvest(acc);
      return;
    }
    const double bound = acc + cover_bound(candidates);
    if (existence_mode ? bound < target : bound <= best_weight + kWeightTol) {
      record_harvest(acc);
      return;
    }

    int first = -1;
    for (std::size_t wi = 0; wi < words && first < 0; ++wi)
      if (candidates.word(wi))
        first = static_cast<int>(wi * 64 + std::countr_zero(candidates.word(wi)));

    // include `first`
    Bitset next(words);
    for (std::size_t wi = 0; wi < words; ++wi)
      next.word(wi) = candidates.word(wi) & nonadj[first].word(wi);
    current.push_back(order[first]);
    search(next, acc + weights[order[first]]);
    current.pop_back();
    if (existence_mode && found) return;

    // exclude `first`
    Bitset rest = candidates;
    rest.reset(first);
    search(rest, acc);
  }
};

// Positive vertices sorted for the search: clique-prone groups first (when
// hinted), heaviest first within a group. Grouped ordering makes the greedy
// first-fit cover rediscover the hinted cliques.
std::vector<int> positive_order(std::span<const double> weights, std::span<const int> hint) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i)
    if (weights[i] > kWeightTol) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const int ga = hint.empty() ? 0 : hint[a];
    const int gb = hint.empty() ? 0 : hint[b];
    if (ga != gb) return ga < gb;
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });
  return order;
}

}  // namespace

namespace {

// Builds the lexicographically smallest optimum from one known optimum. A
// vertex joins the result exactly when some optimum extends the members
// picked so far through it; the current optimal completion (`witness`)
// answers most of those questions for free, and a budgeted existence query
// settles the vertices that conflict with it. If the query budget runs dry
// the witness completion is kept as is, which stays exact in weight and
// deterministic.
MaxWeightIsResult lex_smallest_optimum(const ConflictGraph& graph, const std::vector<double>& w,
                                       const std::vector<int>& order, double optimum,
                                       const std::vector<int>& one_optimum) {
  const int n = graph.size();
  MaxWeightIsResult result;
  if (optimum <= kWeightTol) return result;  // all-zero ties: empty set

  std::vector<int> witness = one_optimum;
  std::sort(witness.begin(), witness.end());

  std::vector<int> chosen;
  double chosen_weight = 0.0;
  long lex_budget = kLexQueryBudget;

  auto conflicts_chosen = [&](int v) {
    for (const int u : chosen)
      if (graph.adjacent(u, v)) return true;
    return false;
  };
  auto conflicts_witness = [&](int v) {
    for (const int u : witness)
      if (graph.adjacent(u, v)) return true;
    return false;
  };

  for (int v = 0; v < n && chosen_weight < optimum - kWeightTol; ++v) {
    if (conflicts_chosen(v)) continue;
    if (!witness.empty() && witness.front() == v) {
      witness.erase(witness.begin());
      chosen.push_back(v);
      chosen_weight += w[v];
      continue;
    }
    const bool in_witness = std::binary_search(witness.begin(), witness.end(), v);
    if (in_witness) {
      witness.erase(std::find(witness.begin(), witness.end(), v));
      chosen.push_back(v);
      chosen_weight += w[v];
      continue;
    }
    if (w[v] <= kWeightTol && !conflicts_witness(v)) {
      chosen.push_back(v);  // free rider, the witness completion still fits
      continue;
    }
    if (lex_budget <= 0) continue;
    // does any optimum extend chosen + v? search the heavier vertices above v
    std::vector<int> cand;
    for (const int u : order)
      if (u > v && !graph.adjacent(u, v) && !conflicts_chosen(u)) cand.push_back(u);
    const double target = optimum - chosen_weight - w[v] - kWeightTol;
    if (target <= 0.0) {
      chosen.push_back(v);
      chosen_weight += w[v];
      witness.clear();
      continue;
    }
    BranchBound query(graph, cand, w);
    query.existence_mode = true;
    query.target = target;
    query.budget = lex_budget;
    query.run();
    lex_budget = query.budget;
    if (query.budget_exceeded && !query.found) {
      lex_budget = 0;  // keep completing from the current witness
      continue;
    }
    if (query.found) {
      chosen.push_back(v);
      chosen_weight += w[v];
      witness = query.found_set;
      std::sort(witness.begin(), witness.end());
    }
  }
  // budget degradation path: append whatever of the witness is still owed
  for (const int u : witness) {
    if (chosen_weight >= optimum - kWeightTol) break;
    chosen.push_back(u);
    chosen_weight += w[u];
  }
  std::sort(chosen.begin(), chosen.end());

  result.set.members = std::move(chosen);
  for (const int v : result.set.members) result.weight += w[v];
  return result;
}

}  // namespace

MaxWeightIsResult max_weight_is(const ConflictGraph& graph, std::span<const double> weights) {
  std::vector<double> w(weights.begin(), weights.end());
  const std::vector<int> order = positive_order(weights, {});
  BranchBound bb(graph, order, w);
  bb.run();
  if (bb.budget_exceeded)
    throw EnumerationLimitError("max-weight independent set search exceeded its node budget");
  return lex_smallest_optimum(graph, w, order, bb.best_weight, bb.best);
}

PricedIs max_weight_is_limited(const ConflictGraph& graph, std::span<const double> weights,
                               long node_budget, std::span<const int> cover_hint,
                               double harvest_above) {
  std::vector<double> w(weights.begin(), weights.end());
  const std::vector<int> order = positive_order(weights, cover_hint);
  BranchBound bb(graph, order, w);
  bb.budget = node_budget;
  bb.harvest_above = harvest_above;
  bb.run();

  PricedIs out;
  out.proven = !bb.budget_exceeded;
  if (out.proven) {
    const MaxWeightIsResult exact = lex_smallest_optimum(graph, w, order, bb.best_weight, bb.best);
    out.set = exact.set;
    out.weight = exact.weight;
  } else {
    out.set.members = bb.best;
    std::sort(out.set.members.begin(), out.set.members.end());
    for (const int v : out.set.members) out.weight += w[v];
  }
  std::sort(bb.harvest.begin(), bb.harvest.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [hw, members] : bb.harvest) {
    std::sort(members.begin(), members.end());
    if (members == out.set.members) continue;
    out.extras.push_back({std::move(members)});
  }
  return out;
}

IndependentSet extend_to_maximal(const ConflictGraph& graph, std::vector<int> seed) {
  std::vector<char> in(graph.size(), 0);
  for (const int v : seed) in[v] = 1;
  for (int v = 0; v < graph.size(); ++v) {
    if (in[v]) continue;
    bool clash = false;
    for (const int u : seed)
      if (graph.adjacent(u, v)) {
        clash = true;
        break;
      }
    if (!clash) {
      seed.push_back(v);
      in[v] = 1;
    }
  }
  std::sort(seed.begin(), seed.end());
  return {std::move(seed)};
}

}  // namespace mrmc
