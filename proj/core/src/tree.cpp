#include "sptw/tree.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace sptw {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

PhyloTree PhyloTree::from_edges(int vertex_count,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::pair<int, TaxonId>>& leaf_taxa) {
  require(vertex_count >= 1, "tree needs at least one vertex");
  PhyloTree t;
  t.adj_.assign(vertex_count, {});
  t.vertex_taxon_.assign(vertex_count, kNoTaxon);
  for (auto [u, v] : edges) {
    require(u >= 0 && u < vertex_count && v >= 0 && v < vertex_count && u != v,
            "edge endpoint out of range");
    t.adj_[u].push_back(v);
    t.adj_[v].push_back(u);
  }
  for (auto& nbrs : t.adj_) std::sort(nbrs.begin(), nbrs.end());
  for (auto [v, taxon] : leaf_taxa) {
    require(v >= 0 && v < vertex_count, "leaf vertex out of range");
    require(taxon != kNoTaxon, "leaf taxon must be valid");
    require(t.vertex_taxon_[v] == kNoTaxon, "vertex labeled twice");
    t.vertex_taxon_[v] = taxon;
    t.taxa_.push_back(taxon);
  }
  std::sort(t.taxa_.begin(), t.taxa_.end());
  require(std::adjacent_find(t.taxa_.begin(), t.taxa_.end()) == t.taxa_.end(),
          "duplicate taxon label in tree");

  require(static_cast<int>(edges.size()) == vertex_count - 1, "tree must have V-1 edges");
  // connectivity
  std::vector<char> seen(vertex_count, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++reached;
    for (int w : t.adj_[v])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  require(reached == vertex_count, "tree must be connected");

  for (int v = 0; v < vertex_count; ++v) {
    int d = t.degree(v);
    bool labeled = t.vertex_taxon_[v] != kNoTaxon;
    if (labeled) {
      require(d == 1 || (d == 0 && vertex_count == 1), "taxon vertex must have degree 1");
    } else {
      require(d >= 3, "internal vertex must have degree >= 3");
    }
  }
  return t;
}

PhyloTree PhyloTree::single_leaf(TaxonId t) {
  return from_edges(1, {}, {{0, t}});
}

int PhyloTree::edge_count() const {
  int total = 0;
  for (const auto& nbrs : adj_) total += static_cast<int>(nbrs.size());
  return total / 2;
}

int PhyloTree::vertex_of(TaxonId t) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (vertex_taxon_[v] == t) return v;
  return -1;
}

bool PhyloTree::is_binary() const {
  for (int v = 0; v < vertex_count(); ++v)
    if (!is_leaf(v) && degree(v) != 3) return false;
  return true;
}

std::vector<std::pair<int, int>> PhyloTree::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int v = 0; v < vertex_count(); ++v)
    for (int w : adj_[v])
      if (v < w) out.emplace_back(v, w);
  std::sort(out.begin(), out.end());
  return out;
}

Split Split::make(std::vector<TaxonId> a, std::vector<TaxonId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.empty() || b.empty()) throw std::invalid_argument("split sides must be nonempty");
  if (b.front() < a.front()) std::swap(a, b);
  return Split{std::move(a), std::move(b)};
}

Quartet Quartet::make(TaxonId a, TaxonId b, TaxonId c, TaxonId d) {
  std::array<TaxonId, 2> p1{std::min(a, b), std::max(a, b)};
  std::array<TaxonId, 2> p2{std::min(c, d), std::max(c, d)};
  if (p2[0] < p1[0]) std::swap(p1, p2);
  if (p1[0] == p2[0] || p1[0] == p2[1] || p1[1] == p2[0] || p1[1] == p2[1] || p1[0] == p1[1] ||
      p2[0] == p2[1])
    throw std::invalid_argument("quartet needs four distinct taxa");
  return Quartet{p1, p2};
}

PhyloTree restrict_to(const PhyloTree& t, std::span<const TaxonId> subset) {
  require(!subset.empty(), "restriction subset must be nonempty");
  std::set<TaxonId> want(subset.begin(), subset.end());
  for (TaxonId x : want)
    require(t.has_taxon(x), "restriction subset contains unknown taxon");

  int n = t.vertex_count();
  if (static_cast<int>(want.size()) == 1) return PhyloTree::single_leaf(*want.begin());

  // Prune unneeded leaves until only the Steiner tree of `want` remains.
  std::vector<int> deg(n);
  std::vector<char> alive(n, 1);
  std::vector<char> marked(n, 0);
  for (int v = 0; v < n; ++v) {
    deg[v] = t.degree(v);
    if (t.is_leaf(v) && want.contains(t.taxon_of(v))) marked[v] = 1;
  }
  std::queue<int> q;
  for (int v = 0; v < n; ++v)
    if (!marked[v] && deg[v] <= 1) q.push(v);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (!alive[v] || marked[v] || deg[v] > 1) continue;
    alive[v] = 0;
    for (int w : t.neighbors(v))
      if (alive[w] && --deg[w] <= 1 && !marked[w]) q.push(w);
  }

  // Keep marked leaves and branch vertices; contract degree-2 chains.
  std::vector<int> new_id(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (alive[v] && (marked[v] || deg[v] >= 3)) new_id[v] = next++;

  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, TaxonId>> leaves;
  for (int v = 0; v < n; ++v) {
    if (new_id[v] < 0) continue;
    if (marked[v]) leaves.emplace_back(new_id[v], t.taxon_of(v));
    for (int w : t.neighbors(v)) {
      if (!alive[w]) continue;
      // walk through suppressed degree-2 vertices to the next kept vertex
      int prev = v, cur = w;
      while (new_id[cur] < 0) {
        int nxt = -1;
        for (int x : t.neighbors(cur))
          if (alive[x] && x != prev) {
            nxt = x;
            break;
          }
        prev = cur;
        cur = nxt;
      }
      if (new_id[v] < new_id[cur]) edges.emplace_back(new_id[v], new_id[cur]);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return PhyloTree::from_edges(next, edges, leaves);
}

std::vector<Split> splits(const PhyloTree& t) {
  require(t.taxon_count() >= 2, "splits need at least two taxa");
  std::vector<Split> out;
  int n = t.vertex_count();
  for (auto [u, v] : t.edges()) {
    // taxa on the u side of edge (u,v)
    std::vector<char> seen(n, 0);
    seen[v] = 1;  // block the far endpoint
    std::vector<TaxonId> side;
    std::queue<int> q;
    q.push(u);
    seen[u] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (t.is_leaf(x)) side.push_back(t.taxon_of(x));
      for (int w : t.neighbors(x))
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
    std::sort(side.begin(), side.end());
    std::vector<TaxonId> other;
    std::set_difference(t.taxa().begin(), t.taxa().end(), side.begin(), side.end(),
                        std::back_inserter(other));
    out.push_back(Split::make(std::move(side), std::move(other)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Leaf-to-leaf path lengths via BFS from each leaf.
std::vector<std::vector<int>> leaf_distances(const PhyloTree& t, const std::vector<int>& leaf_vx) {
  int n = t.vertex_count();
  std::vector<std::vector<int>> dist;
  dist.reserve(leaf_vx.size());
  for (int source : leaf_vx) {
    std::vector<int> d(n, -1);
    std::queue<int> q;
    q.push(source);
    d[source] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : t.neighbors(v))
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          q.push(w);
        }
    }
    dist.push_back(std::move(d));
  }
  return dist;
}

Quartet four_point(int dab, int dcd, int dac, int dbd, int dad, int dbc, TaxonId a, TaxonId b,
                   TaxonId c, TaxonId d) {
  int s1 = dab + dcd, s2 = dac + dbd, s3 = dad + dbc;
  if (s1 < s2 && s1 < s3) return Quartet::make(a, b, c, d);
  if (s2 < s1 && s2 < s3) return Quartet::make(a, c, b, d);
  if (s3 < s1 && s3 < s2) return Quartet::make(a, d, b, c);
  throw std::invalid_argument("four-point condition unresolved: tree not binary on these taxa");
}

}  // namespace

Quartet quartet_topology(const PhyloTree& t, TaxonId a, TaxonId b, TaxonId c, TaxonId d) {
  std::vector<int> leaf_vx{t.vertex_of(a), t.vertex_of(b), t.vertex_of(c), t.vertex_of(d)};
  for (int v : leaf_vx) require(v >= 0, "quartet taxon not in tree");
  auto dist = leaf_distances(t, leaf_vx);
  return four_point(dist[0][leaf_vx[1]], dist[2][leaf_vx[3]], dist[0][leaf_vx[2]],
                    dist[1][leaf_vx[3]], dist[0][leaf_vx[3]], dist[1][leaf_vx[2]], a, b, c, d);
}

std::vector<Quartet> quartet_set(const PhyloTree& t) {
  require(t.is_binary(), "quartet_set requires a binary tree");
  require(t.taxon_count() >= 4, "quartet_set requires at least four taxa");
  const auto& xs = t.taxa();
  int n = t.taxon_count();
  std::vector<int> leaf_vx(n);
  for (int i = 0; i < n; ++i) leaf_vx[i] = t.vertex_of(xs[i]);
  auto dist = leaf_distances(t, leaf_vx);
  auto d = [&](int i, int j) { return dist[i][leaf_vx[j]]; };

  std::vector<Quartet> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          out.push_back(four_point(d(i, j), d(k, l), d(i, k), d(j, l), d(i, l), d(j, k), xs[i],
                                   xs[j], xs[k], xs[l]));
  std::sort(out.begin(), out.end());
  return out;
}

bool displays(const PhyloTree& s, const PhyloTree& t) {
  require(std::includes(s.taxa().begin(), s.taxa().end(), t.taxa().begin(), t.taxa().end()),
          "displays: taxa of candidate tree not contained in supertree");
  if (t.taxon_count() <= 2) return true;
  PhyloTree r = restrict_to(s, t.taxa());
  return splits(r) == splits(t);
}

PhyloTree unique_topology(std::span<const TaxonId> taxa) {
  std::vector<TaxonId> xs(taxa.begin(), taxa.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  switch (xs.size()) {
    case 1:
      return PhyloTree::single_leaf(xs[0]);
    case 2:
      return PhyloTree::from_edges(2, {{0, 1}}, {{0, xs[0]}, {1, xs[1]}});
    case 3:
      return PhyloTree::from_edges(4, {{0, 1}, {0, 2}, {0, 3}},
                                   {{1, xs[0]}, {2, xs[1]}, {3, xs[2]}});
    default:
      throw std::invalid_argument("unique_topology is defined for 1..3 taxa");
  }
}

}  // namespace sptw
