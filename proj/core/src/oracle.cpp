#include "sptw/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace sptw {

TreeEnumeration::TreeEnumeration(std::vector<TaxonId> taxa) : taxa_(std::move(taxa)) {
  std::sort(taxa_.begin(), taxa_.end());
  taxa_.erase(std::unique(taxa_.begin(), taxa_.end()), taxa_.end());
  if (taxa_.size() < 3 || taxa_.size() > 9)
    throw std::invalid_argument("tree enumeration supports 3..9 taxa");
  choice_.assign(taxa_.size() - 3, 0);
}

PhyloTree TreeEnumeration::build() const {
  // star on the first three taxa, then insert taxon i on edge choice_[i-3]
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}};
  std::vector<std::pair<int, TaxonId>> leaves{{1, taxa_[0]}, {2, taxa_[1]}, {3, taxa_[2]}};
  int vertices = 4;
  for (std::size_t i = 3; i < taxa_.size(); ++i) {
    std::vector<std::pair<int, int>> sorted = edges;
    for (auto& e : sorted)
      if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(sorted.begin(), sorted.end());
    auto [u, v] = sorted[choice_[i - 3]];
    int mid = vertices++;
    int leaf = vertices++;
    edges.erase(std::find_if(edges.begin(), edges.end(), [&](auto e) {
      return (e.first == u && e.second == v) || (e.first == v && e.second == u);
    }));
    edges.push_back({u, mid});
    edges.push_back({mid, v});
    edges.push_back({mid, leaf});
    leaves.emplace_back(leaf, taxa_[i]);
  }
  return PhyloTree::from_edges(vertices, edges, leaves);
}

bool TreeEnumeration::advance() {
  // odometer over edge choices; the k-th taxon goes onto one of the
  // 2(k-1)-3 edges of the previous tree, giving the (2n-5)!! product
  for (int i = static_cast<int>(choice_.size()) - 1; i >= 0; --i) {
    int base = 2 * (i + 4) - 5;
    if (++choice_[i] < base) return true;
    choice_[i] = 0;
  }
  return false;
}

std::optional<PhyloTree> TreeEnumeration::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
    return build();
  }
  if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  return build();
}

std::uint64_t num_binary_topologies(int n) {
  if (n < 1) throw std::invalid_argument("num_binary_topologies needs n >= 1");
  std::uint64_t r = 1;
  for (int k = 3; k <= n; ++k) r *= static_cast<std::uint64_t>(2 * k - 5);
  return r;
}

std::optional<PhyloTree> brute_force_compatible(std::span<const PhyloTree> trees) {
  if (trees.empty()) throw std::invalid_argument("brute_force_compatible: empty input");
  std::set<TaxonId> all;
  for (const auto& t : trees) all.insert(t.taxa().begin(), t.taxa().end());
  if (all.size() > 9)
    throw std::invalid_argument("brute_force_compatible: more than 9 taxa");
  std::vector<TaxonId> xs(all.begin(), all.end());
  if (xs.size() <= 3) {
    PhyloTree s = unique_topology(xs);
    for (const auto& t : trees)
      if (!displays(s, t)) return std::nullopt;
    return s;
  }
  TreeEnumeration en(xs);
  while (auto s = en.next()) {
    bool ok = true;
    for (const auto& t : trees)
      if (!displays(*s, t)) {
        ok = false;
        break;
      }
    if (ok) return s;
  }
  return std::nullopt;
}

int exact_treewidth(const SimpleGraph& g) {
  if (g.n > 20) throw std::invalid_argument("exact_treewidth supports at most 20 vertices");
  if (g.n == 0) return -1;
  std::vector<std::uint32_t> adj(g.n, 0);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  const std::uint32_t full = (g.n == 32) ? ~0u : ((1u << g.n) - 1);

  // q(R, v): vertices outside R u {v} adjacent to v directly or through R
  auto q_value = [&](std::uint32_t r, int v) {
    std::uint32_t nbrs = adj[v];
    std::uint32_t inside = nbrs & r;
    std::uint32_t seen_inside = inside;
    while (inside) {
      std::uint32_t expand = 0;
      std::uint32_t work = inside;
      while (work) {
        int w = std::countr_zero(work);
        work &= work - 1;
        expand |= adj[w];
      }
      nbrs |= expand;
      inside = expand & r & ~seen_inside;
      seen_inside |= inside;
    }
    return std::popcount(nbrs & ~r & ~(1u << v));
  };

  // dp[S] = best width over orderings that eliminate exactly S first
  std::vector<signed char> dp(std::size_t{1} << g.n, 0);
  dp[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = 127;
    std::uint32_t work = s;
    while (work) {
      int v = std::countr_zero(work);
      work &= work - 1;
      std::uint32_t rest = s & ~(1u << v);
      int cand = std::max<int>(dp[rest], q_value(rest, v));
      best = std::min(best, cand);
    }
    dp[s] = static_cast<signed char>(best);
  }
  return dp[full];
}

}  // namespace sptw
