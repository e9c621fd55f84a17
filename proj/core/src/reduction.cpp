#include "sptw/reduction.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sptw {

SimpleGraph graph_of(const DisplayGraph& d) {
  SimpleGraph g;
  g.n = d.vertex_count();
  std::set<std::pair<int, int>> seen;
  for (const auto& e : d.edges) {
    auto key = std::minmax(e.u, e.v);
    if (seen.insert(key).second) g.edges.emplace_back(key.first, key.second);
  }
  return g;
}

namespace {

struct Reducer {
  int n;
  std::vector<std::set<int>> adj;
  std::vector<char> alive;
  int alive_count;
  std::vector<ReductionStep> steps;

  explicit Reducer(const SimpleGraph& g) : n(g.n), adj(g.n), alive(g.n, 1), alive_count(g.n) {
    for (auto [u, v] : g.edges) {
      if (u == v) throw std::invalid_argument("self-loops are not supported");
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }

  bool run() {
    while (alive_count > 0) {
      // lowest-id vertex of the smallest reducible degree class,
      // isolated > pendant > bypass
      int pick = -1;
      ReductionStep::Kind kind{};
      for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        std::size_t d = adj[v].size();
        if (d == 0) {
          pick = v;
          kind = ReductionStep::Kind::DropIsolated;
          break;
        }
        if (d == 1 && (pick < 0 || kind == ReductionStep::Kind::Bypass)) {
          pick = v;
          kind = ReductionStep::Kind::DropPendant;
        } else if (d == 2 && pick < 0) {
          pick = v;
          kind = ReductionStep::Kind::Bypass;
        }
      }
      if (pick < 0) return false;  // stalled kernel, min degree >= 3
      switch (kind) {
        case ReductionStep::Kind::DropIsolated:
          steps.push_back({kind, pick});
          kill(pick);
          break;
        case ReductionStep::Kind::DropPendant: {
          int a = *adj[pick].begin();
          int anchor = -1;
          for (int w : adj[a])
            if (w != pick) {
              anchor = w;
              break;
            }
          steps.push_back({kind, pick, a, -1, false, anchor});
          adj[a].erase(pick);
          kill(pick);
          break;
        }
        case ReductionStep::Kind::Bypass: {
          auto it = adj[pick].begin();
          int a = *it++;
          int b = *it;
          bool merged = adj[a].contains(b);
          steps.push_back({kind, pick, a, b, merged, -1});
          adj[a].erase(pick);
          adj[b].erase(pick);
          adj[a].insert(b);
          adj[b].insert(a);
          kill(pick);
          break;
        }
      }
    }
    return true;
  }

  void kill(int v) {
    alive[v] = 0;
    adj[v].clear();
    --alive_count;
  }
};

}  // namespace

std::pair<bool, ReductionTrace> is_tw_le_2(const SimpleGraph& g) {
  Reducer r(g);
  bool ok = r.run();
  return {ok, ReductionTrace{std::move(r.steps)}};
}

bool verify_k4_witness(const SimpleGraph& g, const K4Witness& w) {
  std::vector<int> owner(g.n, -1);
  for (int i = 0; i < 4; ++i) {
    if (w.branch_sets[i].empty()) return false;
    for (int v : w.branch_sets[i]) {
      if (v < 0 || v >= g.n || owner[v] != -1) return false;
      owner[v] = i;
    }
  }
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  // branch sets connected
  for (int i = 0; i < 4; ++i) {
    std::set<int> inside(w.branch_sets[i].begin(), w.branch_sets[i].end());
    std::vector<int> stack{w.branch_sets[i][0]};
    std::set<int> seen{w.branch_sets[i][0]};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int x : adj[v])
        if (inside.contains(x) && seen.insert(x).second) stack.push_back(x);
    }
    if (seen.size() != inside.size()) return false;
  }
  // all six cross edges
  bool cross[4][4] = {};
  for (auto [u, v] : g.edges) {
    if (owner[u] >= 0 && owner[v] >= 0 && owner[u] != owner[v])
      cross[owner[u]][owner[v]] = cross[owner[v]][owner[u]] = true;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!cross[i][j]) return false;
  return true;
}

namespace {

// Working graph for witness extraction: vertices carry branch sets of
// original vertices; all shrinking operations are minor operations.
struct Shrinker {
  std::vector<std::set<int>> adj;
  std::vector<char> alive;
  std::vector<std::vector<int>> branch;

  explicit Shrinker(const SimpleGraph& g) : adj(g.n), alive(g.n, 1), branch(g.n) {
    for (auto [u, v] : g.edges) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
    for (int v = 0; v < g.n; ++v) branch[v] = {v};
  }

  std::vector<int> alive_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(adj.size()); ++v)
      if (alive[v]) out.push_back(v);
    return out;
  }

  SimpleGraph materialize() const {
    auto verts = alive_vertices();
    std::vector<int> id(adj.size(), -1);
    for (int k = 0; k < static_cast<int>(verts.size()); ++k) id[verts[k]] = k;
    SimpleGraph g;
    g.n = static_cast<int>(verts.size());
    for (int v : verts)
      for (int w : adj[v])
        if (v < w) g.edges.emplace_back(id[v], id[w]);
    return g;
  }

  void drop(int v) {
    for (int w : adj[v]) adj[w].erase(v);
    adj[v].clear();
    alive[v] = 0;
  }

  // Contract (u,v), keeping u; v's branch set is absorbed.
  void contract(int u, int v) {
    adj[u].erase(v);
    adj[v].erase(u);
    for (int w : adj[v]) {
      adj[w].erase(v);
      adj[w].insert(u);
      adj[u].insert(w);
    }
    adj[v].clear();
    alive[v] = 0;
    branch[u].insert(branch[u].end(), branch[v].begin(), branch[v].end());
    branch[v].clear();
  }

  // Reduce to the stalled kernel; pendant/isolated vertices cannot be part
  // of a minimal model, so their branch sets are discarded.
  void kernelize() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
        if (!alive[v]) continue;
        if (adj[v].size() <= 1) {
          drop(v);
          changed = true;
        } else if (adj[v].size() == 2) {
          auto it = adj[v].begin();
          int a = *it++;
          int b = *it;
          contract(a, v);  // merges any parallel edge implicitly (set adjacency)
          (void)b;
          changed = true;
        }
      }
    }
  }

  bool stalls() const {
    auto [ok, trace] = is_tw_le_2(materialize());
    (void)trace;
    return !ok;
  }

  bool is_k4() const {
    auto verts = alive_vertices();
    if (verts.size() != 4) return false;
    for (int v : verts)
      if (adj[v].size() != 3) return false;
    return true;
  }
};

}  // namespace

K4Witness k4_witness(const SimpleGraph& g) {
  {
    auto [ok, trace] = is_tw_le_2(g);
    (void)trace;
    if (ok) throw std::invalid_argument("k4_witness: graph has treewidth <= 2");
  }
  Shrinker s(g);
  s.kernelize();
  for (;;) {
    if (s.is_k4()) break;
    // try a contraction, then a deletion, that preserves treewidth >= 3
    bool advanced = false;
    auto verts = s.alive_vertices();
    for (int u : verts) {
      for (int v : s.adj[u]) {
        if (v < u) continue;
        Shrinker copy = s;
        copy.contract(u, v);
        copy.kernelize();
        if (copy.stalls()) {
          s = std::move(copy);
          advanced = true;
          break;
        }
      }
      if (advanced) break;
    }
    if (advanced) continue;
    for (int u : verts) {
      for (int v : s.adj[u]) {
        if (v < u) continue;
        Shrinker copy = s;
        copy.adj[u].erase(v);
        copy.adj[v].erase(u);
        copy.kernelize();
        if (copy.stalls()) {
          s = std::move(copy);
          advanced = true;
          break;
        }
      }
      if (advanced) break;
    }
    if (!advanced)
      throw std::logic_error("k4_witness: minor-minimal kernel is not K4");
  }
  K4Witness w;
  auto verts = s.alive_vertices();
  for (int i = 0; i < 4; ++i) {
    w.branch_sets[i] = s.branch[verts[i]];
    std::sort(w.branch_sets[i].begin(), w.branch_sets[i].end());
  }
  if (!verify_k4_witness(g, w)) throw std::logic_error("k4_witness: verifier rejected witness");
  return w;
}

}  // namespace sptw
