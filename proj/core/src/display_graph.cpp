#include "sptw/display_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace sptw {

namespace {

void check(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(std::string("display graph invariant violated: ") + msg);
}

}  // namespace

std::vector<TaxonId> DisplayGraph::taxa() const {
  std::vector<TaxonId> out;
  for (const Vertex& v : verts)
    if (v.taxon != kNoTaxon) out.push_back(v.taxon);
  std::sort(out.begin(), out.end());
  return out;
}

DisplayGraph build_display(std::span<const PhyloTree> trees) {
  if (trees.empty()) throw std::invalid_argument("build_display: empty tree list");
  DisplayGraph d;
  d.tree_count = static_cast<int>(trees.size());
  std::map<TaxonId, int> taxon_vertex;
  for (int i = 0; i < d.tree_count; ++i) {
    const PhyloTree& t = trees[i];
    std::vector<int> vmap(t.vertex_count(), -1);
    for (int v = 0; v < t.vertex_count(); ++v) {
      if (t.is_leaf(v)) {
        TaxonId x = t.taxon_of(v);
        auto it = taxon_vertex.find(x);
        if (it == taxon_vertex.end()) {
          int id = d.vertex_count();
          d.verts.push_back({x, -1, {i}});
          taxon_vertex.emplace(x, id);
          vmap[v] = id;
        } else {
          d.verts[it->second].owners.push_back(i);
          vmap[v] = it->second;
        }
      } else {
        int id = d.vertex_count();
        d.verts.push_back({kNoTaxon, i, {i}});
        vmap[v] = id;
      }
    }
    for (auto [u, v] : t.edges()) d.edges.push_back({vmap[u], vmap[v], i});
  }
  d.inc.assign(d.vertex_count(), {});
  for (int e = 0; e < d.edge_count(); ++e) {
    d.inc[d.edges[e].u].push_back(e);
    d.inc[d.edges[e].v].push_back(e);
  }
  return d;
}

namespace {

// Mutable cleanup state over a fixed vertex/edge id space. Kind priority is
// fixed (small trees, then suppressions, then taxon removals): under it a
// taxon removal can only push an internal vertex from degree 3 to 2, and the
// suppression of that vertex fires before the next taxon removal, so internal
// vertices never dangle and the three event kinds stay sufficient.
struct CleanupEngine {
  const DisplayGraph& in;
  CleanupOrder order;

  std::vector<char> alive_v, alive_e;
  std::vector<int> deg;
  std::vector<DisplayGraph::Edge> edges;         // grows when merges add edges
  std::vector<std::vector<int>> inc;
  std::vector<std::set<int>> owners;             // taxon vertex -> current trees
  std::vector<int> taxa_count;                   // tree -> surviving taxa
  std::vector<char> tree_present;
  std::vector<CleanupEvent> events;

  struct Bucket {
    CleanupOrder order;
    std::set<int> by_id;
    std::deque<int> seq;
    void push(int x) {
      if (order == CleanupOrder::ById)
        by_id.insert(x);
      else
        seq.push_back(x);
    }
    bool empty() const { return by_id.empty() && seq.empty(); }
    int pop() {
      if (order == CleanupOrder::ById) {
        int x = *by_id.begin();
        by_id.erase(by_id.begin());
        return x;
      }
      int x = (order == CleanupOrder::Fifo) ? seq.front() : seq.back();
      if (order == CleanupOrder::Fifo)
        seq.pop_front();
      else
        seq.pop_back();
      return x;
    }
  };
  Bucket small_trees, suppressions, taxon_removals;

  CleanupEngine(const DisplayGraph& d, CleanupOrder o) : in(d), order(o) {
    alive_v.assign(d.vertex_count(), 1);
    deg.resize(d.vertex_count());
    edges = d.edges;
    alive_e.assign(edges.size(), 1);
    inc = d.inc;
    owners.resize(d.vertex_count());
    taxa_count.assign(d.tree_count, 0);
    tree_present.assign(d.tree_count, 0);
    for (int v = 0; v < d.vertex_count(); ++v) {
      deg[v] = d.degree(v);
      if (d.is_taxon(v)) {
        owners[v] = {d.verts[v].owners.begin(), d.verts[v].owners.end()};
        for (int i : owners[v]) {
          ++taxa_count[i];
          tree_present[i] = 1;
        }
      } else {
        tree_present[d.verts[v].tree] = 1;
      }
    }
    small_trees.order = suppressions.order = taxon_removals.order = order;

    for (int i = 0; i < d.tree_count; ++i)
      if (tree_present[i] && taxa_count[i] < 4) small_trees.push(i);
    for (int v = 0; v < d.vertex_count(); ++v) recheck_vertex(v);
  }

  void recheck_vertex(int v) {
    if (!alive_v[v]) return;
    if (in.verts[v].taxon != kNoTaxon) {
      if (deg[v] == 1) taxon_removals.push(v);
    } else {
      check(deg[v] >= 2, "internal vertex dropped below degree 2");
      if (deg[v] == 2) suppressions.push(v);
    }
  }

  int other_end(int e, int v) const { return edges[e].u == v ? edges[e].v : edges[e].u; }

  std::vector<int> alive_edges_at(int v) const {
    std::vector<int> out;
    for (int e : inc[v])
      if (alive_e[e]) out.push_back(e);
    return out;
  }

  // Removes an edge; when a taxon endpoint thereby loses its last edge of the
  // owning tree, its membership (and the tree's taxon count) is updated.
  void remove_edge(int e, bool update_membership) {
    alive_e[e] = 0;
    for (int v : {edges[e].u, edges[e].v}) {
      --deg[v];
      if (update_membership && in.verts[v].taxon != kNoTaxon) {
        int i = edges[e].tree;
        if (owners[v].erase(i)) {
          --taxa_count[i];
          if (tree_present[i] && taxa_count[i] < 4) small_trees.push(i);
        }
      }
    }
  }

  void add_edge(int u, int v, int tree) {
    int e = static_cast<int>(edges.size());
    edges.push_back({u, v, tree});
    alive_e.push_back(1);
    inc[u].push_back(e);
    inc[v].push_back(e);
    ++deg[u];
    ++deg[v];
  }

  bool has_edge_between(int x, int y) const {
    for (int e : inc[x])
      if (alive_e[e] && other_end(e, x) == y) return true;
    return false;
  }

  void apply_small_tree(int i) {
    events.push_back({CleanupEvent::Kind::RemovedSmallTree, -1, kNoTaxon, i});
    tree_present[i] = 0;
    // merged edges created after construction also carry the tree tag, so
    // scan the full edge list rather than the initial per-tree index
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (!alive_e[e] || edges[e].tree != i) continue;
      remove_edge(e, true);
      for (int v : {edges[e].u, edges[e].v}) recheck_after_tree_removal(v, i);
    }
    for (int v = 0; v < in.vertex_count(); ++v) {
      if (!alive_v[v]) continue;
      if (in.verts[v].taxon == kNoTaxon && in.verts[v].tree == i) alive_v[v] = 0;
      if (in.verts[v].taxon != kNoTaxon) {
        owners[v].erase(i);
        if (owners[v].empty()) alive_v[v] = 0;  // taxon left in no tree
      }
    }
    taxa_count[i] = 0;
  }

  void recheck_after_tree_removal(int v, int removed_tree) {
    if (!alive_v[v]) return;
    if (in.verts[v].taxon == kNoTaxon && in.verts[v].tree == removed_tree) return;  // dies anyway
    recheck_vertex(v);
  }

  void apply_suppress(int v) {
    auto es = alive_edges_at(v);
    check(es.size() == 2, "suppression target no longer has degree 2");
    int e1 = es[0], e2 = es[1];
    int tree = edges[e1].tree;
    check(edges[e2].tree == tree, "degree-2 internal with edges of two trees");
    int x = other_end(e1, v), y = other_end(e2, v);
    check(x != y, "parallel edges at a degree-2 internal vertex");
    events.push_back({CleanupEvent::Kind::SuppressedDegree2Internal, v, kNoTaxon, tree});
    if (has_edge_between(x, y)) {
      // Merging would duplicate an existing edge between two shared taxa;
      // drop it and recheck both endpoints.
      check(in.verts[x].taxon != kNoTaxon && in.verts[y].taxon != kNoTaxon,
            "duplicate merged edge with a non-taxon endpoint");
      remove_edge(e1, true);
      remove_edge(e2, true);
      alive_v[v] = 0;
      recheck_vertex(x);
      recheck_vertex(y);
    } else {
      remove_edge(e1, false);
      remove_edge(e2, false);
      alive_v[v] = 0;
      add_edge(x, y, tree);  // membership of x,y in `tree` is unchanged
    }
  }

  void apply_remove_taxon(int t) {
    auto es = alive_edges_at(t);
    check(es.size() == 1, "taxon removal target no longer has degree 1");
    int e = es[0];
    int tree = edges[e].tree;
    check(owners[t].size() == 1 && *owners[t].begin() == tree,
          "degree-1 taxon owned by more than one tree");
    events.push_back(
        {CleanupEvent::Kind::RemovedDegree1Taxon, t, in.verts[t].taxon, tree});
    int w = other_end(e, t);
    remove_edge(e, true);
    alive_v[t] = 0;
    recheck_vertex(w);
  }

  bool step() {
    while (!small_trees.empty()) {
      int i = small_trees.pop();
      if (tree_present[i] && taxa_count[i] < 4) {
        apply_small_tree(i);
        return true;
      }
    }
    while (!suppressions.empty()) {
      int v = suppressions.pop();
      if (alive_v[v] && in.verts[v].taxon == kNoTaxon && deg[v] == 2) {
        apply_suppress(v);
        return true;
      }
    }
    while (!taxon_removals.empty()) {
      int t = taxon_removals.pop();
      if (alive_v[t] && in.verts[t].taxon != kNoTaxon && deg[t] == 1) {
        apply_remove_taxon(t);
        return true;
      }
    }
    return false;
  }

  void run() {
    while (step()) {
    }
  }

  DisplayGraph result() const {
    DisplayGraph out;
    out.tree_count = in.tree_count;
    std::vector<int> new_id(in.vertex_count(), -1);
    for (int v = 0; v < in.vertex_count(); ++v) {
      if (!alive_v[v]) continue;
      new_id[v] = out.vertex_count();
      DisplayGraph::Vertex vert;
      vert.taxon = in.verts[v].taxon;
      vert.tree = in.verts[v].tree;
      if (vert.taxon != kNoTaxon)
        vert.owners.assign(owners[v].begin(), owners[v].end());
      else
        vert.owners = {vert.tree};
      out.verts.push_back(std::move(vert));
    }
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (!alive_e[e]) continue;
      out.edges.push_back({new_id[edges[e].u], new_id[edges[e].v], edges[e].tree});
    }
    out.inc.assign(out.vertex_count(), {});
    for (int e = 0; e < out.edge_count(); ++e) {
      out.inc[out.edges[e].u].push_back(e);
      out.inc[out.edges[e].v].push_back(e);
    }
    return out;
  }
};

}  // namespace

std::pair<DisplayGraph, CleanupTrace> cleanup(const DisplayGraph& d, CleanupOrder order) {
  CleanupEngine engine(d, order);
  engine.run();
  return {engine.result(), CleanupTrace{std::move(engine.events)}};
}

DisplayGraph replay_cleanup(const DisplayGraph& d, const CleanupTrace& trace) {
  CleanupEngine engine(d, CleanupOrder::ById);
  for (const CleanupEvent& ev : trace.events) {
    switch (ev.kind) {
      case CleanupEvent::Kind::RemovedSmallTree:
        engine.apply_small_tree(ev.tree);
        break;
      case CleanupEvent::Kind::SuppressedDegree2Internal:
        engine.apply_suppress(ev.vertex);
        break;
      case CleanupEvent::Kind::RemovedDegree1Taxon:
        engine.apply_remove_taxon(ev.vertex);
        break;
    }
  }
  return engine.result();
}

std::vector<DisplayGraph> components(const DisplayGraph& d) {
  std::vector<int> comp(d.vertex_count(), -1);
  int comps = 0;
  for (int start = 0; start < d.vertex_count(); ++start) {
    if (comp[start] >= 0) continue;
    std::queue<int> q;
    q.push(start);
    comp[start] = comps;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : d.inc[v]) {
        int w = d.other_end(e, v);
        if (comp[w] < 0) {
          comp[w] = comps;
          q.push(w);
        }
      }
    }
    ++comps;
  }
  std::vector<DisplayGraph> out(comps);
  std::vector<std::vector<int>> new_id(comps);
  for (int c = 0; c < comps; ++c) {
    out[c].tree_count = d.tree_count;
    new_id[c].assign(d.vertex_count(), -1);
  }
  for (int v = 0; v < d.vertex_count(); ++v) {
    int c = comp[v];
    new_id[c][v] = out[c].vertex_count();
    out[c].verts.push_back(d.verts[v]);
  }
  for (const auto& e : d.edges) {
    int c = comp[e.u];
    out[c].edges.push_back({new_id[c][e.u], new_id[c][e.v], e.tree});
  }
  for (auto& g : out) {
    g.inc.assign(g.vertex_count(), {});
    for (int e = 0; e < g.edge_count(); ++e) {
      g.inc[g.edges[e].u].push_back(e);
      g.inc[g.edges[e].v].push_back(e);
    }
  }
  return out;
}

std::vector<TreeImage> extract_trees(const DisplayGraph& d) {
  std::vector<TreeImage> out;
  for (int i = 0; i < d.tree_count; ++i) {
    std::vector<int> verts;
    for (int v = 0; v < d.vertex_count(); ++v) {
      const auto& vert = d.verts[v];
      bool mine = (vert.taxon != kNoTaxon)
                      ? std::binary_search(vert.owners.begin(), vert.owners.end(), i)
                      : vert.tree == i;
      if (mine) verts.push_back(v);
    }
    if (verts.empty()) continue;
    std::vector<int> new_id(d.vertex_count(), -1);
    for (int k = 0; k < static_cast<int>(verts.size()); ++k) new_id[verts[k]] = k;
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : d.edges)
      if (e.tree == i) edges.emplace_back(new_id[e.u], new_id[e.v]);
    std::vector<std::pair<int, TaxonId>> leaves;
    for (int k = 0; k < static_cast<int>(verts.size()); ++k)
      if (d.verts[verts[k]].taxon != kNoTaxon) leaves.emplace_back(k, d.verts[verts[k]].taxon);
    TreeImage img;
    img.tree = i;
    img.image = PhyloTree::from_edges(static_cast<int>(verts.size()), edges, leaves);
    img.to_display = std::move(verts);
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace sptw
