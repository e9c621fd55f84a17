#include "sptw/embedding.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace sptw {

namespace {

void expect(bool cond, const char* msg, bool internal = false) {
  if (cond) return;
  if (internal) throw std::logic_error(msg);
  throw std::invalid_argument(msg);
}

// Embedding under construction. Edge slots grow and die during replay;
// darts are 2*slot+side with side 0 at the stored first endpoint.
struct Builder {
  int n;
  std::vector<std::pair<int, int>> slot_vx;
  std::vector<char> slot_alive;
  std::vector<std::vector<int>> rot;
  std::map<std::pair<int, int>, int> slot_of;  // (min,max) -> slot

  explicit Builder(int vertices) : n(vertices), rot(vertices) {}

  int find_slot(int u, int v) const {
    auto it = slot_of.find(std::minmax(u, v));
    return it == slot_of.end() ? -1 : it->second;
  }

  int dart_at(int slot, int vertex) const {
    return 2 * slot + (slot_vx[slot].first == vertex ? 0 : 1);
  }

  int new_slot(int u, int v) {
    int s = static_cast<int>(slot_vx.size());
    slot_vx.emplace_back(u, v);
    slot_alive.push_back(1);
    slot_of[std::minmax(u, v)] = s;
    return s;
  }

  void kill_slot(int slot) {
    slot_alive[slot] = 0;
    slot_of.erase(std::minmax(slot_vx[slot].first, slot_vx[slot].second));
  }

  std::size_t position_of(int vertex, int dart) const {
    const auto& r = rot[vertex];
    auto it = std::find(r.begin(), r.end(), dart);
    expect(it != r.end(), "embed: dart missing from rotation", true);
    return static_cast<std::size_t>(it - r.begin());
  }
};

}  // namespace

RotationSystem embed(const SimpleGraph& g, const ReductionTrace& trace) {
  Builder b(g.n);
  std::vector<char> alive(g.n, 0);

  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    const ReductionStep& s = *it;
    expect(s.v >= 0 && s.v < g.n && !alive[s.v], "trace does not match graph: bad vertex");
    switch (s.kind) {
      case ReductionStep::Kind::DropIsolated:
        alive[s.v] = 1;
        break;
      case ReductionStep::Kind::DropPendant: {
        expect(s.a >= 0 && alive[s.a], "trace does not match graph: pendant neighbor missing");
        alive[s.v] = 1;
        int e = b.new_slot(s.v, s.a);
        b.rot[s.v] = {b.dart_at(e, s.v)};
        int anchor_slot = s.anchor >= 0 ? b.find_slot(s.a, s.anchor) : -1;
        if (anchor_slot >= 0) {
          std::size_t pos = b.position_of(s.a, b.dart_at(anchor_slot, s.a));
          b.rot[s.a].insert(b.rot[s.a].begin() + pos + 1, b.dart_at(e, s.a));
        } else {
          b.rot[s.a].insert(b.rot[s.a].begin(), b.dart_at(e, s.a));
        }
        break;
      }
      case ReductionStep::Kind::Bypass: {
        expect(s.a >= 0 && s.b >= 0 && alive[s.a] && alive[s.b],
               "trace does not match graph: bypass neighbors missing");
        int e0 = b.find_slot(s.a, s.b);
        expect(e0 >= 0, "trace does not match graph: bypassed edge missing");
        alive[s.v] = 1;
        if (!s.merged) {
          // subdivide (a,b) with v: the new darts take the old darts' slots
          std::size_t pa = b.position_of(s.a, b.dart_at(e0, s.a));
          std::size_t pb = b.position_of(s.b, b.dart_at(e0, s.b));
          b.kill_slot(e0);
          int e1 = b.new_slot(s.a, s.v);
          int e2 = b.new_slot(s.v, s.b);
          b.rot[s.a][pa] = b.dart_at(e1, s.a);
          b.rot[s.b][pb] = b.dart_at(e2, s.b);
          b.rot[s.v] = {b.dart_at(e1, s.v), b.dart_at(e2, s.v)};
        } else {
          // restore the merged parallel path flush against its twin so the
          // triangle a-v-b closes into a face
          std::size_t pa = b.position_of(s.a, b.dart_at(e0, s.a));
          std::size_t pb = b.position_of(s.b, b.dart_at(e0, s.b));
          int e1 = b.new_slot(s.a, s.v);
          int e2 = b.new_slot(s.v, s.b);
          b.rot[s.a].insert(b.rot[s.a].begin() + pa + 1, b.dart_at(e1, s.a));
          b.rot[s.b].insert(b.rot[s.b].begin() + pb, b.dart_at(e2, s.b));
          b.rot[s.v] = {b.dart_at(e1, s.v), b.dart_at(e2, s.v)};
        }
        break;
      }
    }
  }

  // the rebuilt graph must be exactly the input
  std::vector<std::pair<int, int>> built, wanted;
  for (int s = 0; s < static_cast<int>(b.slot_vx.size()); ++s)
    if (b.slot_alive[s]) built.push_back(std::minmax(b.slot_vx[s].first, b.slot_vx[s].second));
  for (auto [u, v] : g.edges) wanted.push_back(std::minmax(u, v));
  std::sort(built.begin(), built.end());
  std::sort(wanted.begin(), wanted.end());
  expect(built == wanted, "trace does not match graph: edge sets differ");
  for (int v = 0; v < g.n; ++v)
    expect(alive[v], "trace does not match graph: vertex never restored");

  // compact to dense edge ids ordered by endpoint pair
  RotationSystem r;
  r.n = g.n;
  std::map<int, int> slot_to_edge;
  for (int s = 0; s < static_cast<int>(b.slot_vx.size()); ++s) {
    if (!b.slot_alive[s]) continue;
    int id = r.edge_count();
    slot_to_edge[s] = id;
    r.edge_vx.push_back(std::minmax(b.slot_vx[s].first, b.slot_vx[s].second));
  }
  // reorder edge ids canonically
  {
    std::vector<int> order(r.edge_count());
    for (int i = 0; i < r.edge_count(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return r.edge_vx[x] < r.edge_vx[y]; });
    std::vector<int> rank(r.edge_count());
    for (int i = 0; i < r.edge_count(); ++i) rank[order[i]] = i;
    std::vector<std::pair<int, int>> sorted_vx(r.edge_count());
    for (int i = 0; i < r.edge_count(); ++i) sorted_vx[rank[i]] = r.edge_vx[i];
    r.edge_vx = std::move(sorted_vx);
    for (auto& [slot, id] : slot_to_edge) id = rank[id];
  }
  r.rot.assign(g.n, {});
  for (int v = 0; v < g.n; ++v) {
    for (int dart : b.rot[v]) {
      int slot = dart >> 1;
      int e = slot_to_edge.at(slot);
      r.rot[v].push_back(2 * e + (r.edge_vx[e].first == v ? 0 : 1));
    }
  }

  // connectivity + Euler check
  if (g.n > 0) {
    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    std::vector<std::vector<int>> adj(g.n);
    for (auto [u, v] : g.edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          q.push(w);
        }
    }
    expect(reached == g.n, "embed requires a connected graph");
  }
  int f = static_cast<int>(faces(r).size());
  expect(r.n - r.edge_count() + f == 2, "embedding violates Euler's formula", true);
  return r;
}

std::vector<Face> faces(const RotationSystem& r) {
  int darts = 2 * r.edge_count();
  if (darts == 0) {
    Face outer;
    outer.is_outer = true;
    return {outer};
  }
  // position of each dart within its rotation
  std::vector<int> vertex_of(darts), pos_of(darts);
  for (int v = 0; v < r.n; ++v)
    for (int i = 0; i < static_cast<int>(r.rot[v].size()); ++i) {
      vertex_of[r.rot[v][i]] = v;
      pos_of[r.rot[v][i]] = i;
    }
  auto next_dart = [&](int d) {
    int t = d ^ 1;  // twin
    int v = vertex_of[t];
    int i = pos_of[t];
    return r.rot[v][(i + 1) % r.rot[v].size()];
  };

  std::vector<Face> out;
  std::vector<char> used(darts, 0);
  for (int d0 = 0; d0 < darts; ++d0) {
    if (used[d0]) continue;
    Face f;
    int d = d0;
    do {
      used[d] = 1;
      f.darts.push_back(d);
      d = next_dart(d);
    } while (d != d0);
    out.push_back(std::move(f));
  }

  // outer face: max boundary length, then smallest contained vertex id,
  // then smallest face index
  int best = 0;
  auto min_vertex = [&](const Face& f) {
    int m = r.n;
    for (int d : f.darts) m = std::min(m, vertex_of[d]);
    return m;
  };
  for (int i = 1; i < static_cast<int>(out.size()); ++i) {
    const Face &a = out[i], &b = out[best];
    if (a.boundary_length() > b.boundary_length() ||
        (a.boundary_length() == b.boundary_length() && min_vertex(a) < min_vertex(b)))
      best = i;
  }
  out[best].is_outer = true;
  return out;
}

FaceLabeling face_labels(const RotationSystem& r, const std::vector<Face>& fs) {
  int nf = static_cast<int>(fs.size());
  std::vector<int> face_of_dart(2 * r.edge_count(), -1);
  for (int f = 0; f < nf; ++f)
    for (int d : fs[f].darts) face_of_dart[d] = f;

  std::vector<std::set<int>> dual(nf);
  for (int e = 0; e < r.edge_count(); ++e) {
    int f1 = face_of_dart[2 * e], f2 = face_of_dart[2 * e + 1];
    if (f1 != f2) {
      dual[f1].insert(f2);
      dual[f2].insert(f1);
    }
  }
  FaceLabeling out;
  out.labels.assign(nf, -1);
  for (int f = 0; f < nf; ++f)
    if (fs[f].is_outer) out.outer_face = f;
  std::queue<int> q;
  out.labels[out.outer_face] = 0;
  q.push(out.outer_face);
  while (!q.empty()) {
    int f = q.front();
    q.pop();
    for (int g : dual[f])
      if (out.labels[g] < 0) {
        out.labels[g] = out.labels[f] + 1;
        q.push(g);
      }
  }
  return out;
}

MinAdjFaces minimally_adjacent_faces(const RotationSystem& r, const DisplayGraph& d) {
  auto fs = faces(r);
  auto labeling = face_labels(r, fs);
  return minimally_adjacent_faces(r, d, fs, labeling);
}

MinAdjFaces minimally_adjacent_faces(const RotationSystem& r, const DisplayGraph& d,
                                     const std::vector<Face>& fs, const FaceLabeling& labeling) {
  int nf = static_cast<int>(fs.size());
  std::vector<int> face_of_dart(2 * r.edge_count(), -1);
  for (int f = 0; f < nf; ++f)
    for (int df : fs[f].darts) face_of_dart[df] = f;
  std::vector<std::set<int>> dual(nf);
  for (int e = 0; e < r.edge_count(); ++e) {
    int f1 = face_of_dart[2 * e], f2 = face_of_dart[2 * e + 1];
    if (f1 != f2) {
      dual[f1].insert(f2);
      dual[f2].insert(f1);
    }
  }

  int k = *std::max_element(labeling.labels.begin(), labeling.labels.end());
  expect(k >= 1, "no qualifying face pair: embedding has no bounded face");
  // largest label over faces adjacent to a face with label k
  int lstar = -1;
  for (int f = 0; f < nf; ++f) {
    if (labeling.labels[f] != k) continue;
    for (int g : dual[f]) lstar = std::max(lstar, labeling.labels[g]);
  }
  expect(lstar >= 1, "no qualifying face pair: only the outer face borders the deepest faces");

  int f1 = -1, f2 = -1;
  for (int f = 0; f < nf && f1 < 0; ++f) {
    if (labeling.labels[f] != k) continue;
    for (int g : dual[f]) {
      if (labeling.labels[g] != lstar) continue;
      f1 = f;
      f2 = g;
      break;
    }
  }
  expect(f1 >= 0, "no qualifying face pair", true);

  // shared boundary of the selected pair
  std::vector<int> shared_edges;
  for (int e = 0; e < r.edge_count(); ++e) {
    int a = face_of_dart[2 * e], b = face_of_dart[2 * e + 1];
    if ((a == f1 && b == f2) || (a == f2 && b == f1)) shared_edges.push_back(e);
  }
  expect(!shared_edges.empty(), "selected faces share no edge", true);

  std::map<int, std::vector<std::pair<int, int>>> path_adj;  // vertex -> (nbr, edge)
  for (int e : shared_edges) {
    auto [u, v] = r.edge_vx[e];
    path_adj[u].emplace_back(v, e);
    path_adj[v].emplace_back(u, e);
  }
  std::vector<int> endpoints;
  for (const auto& [v, nbrs] : path_adj) {
    expect(nbrs.size() <= 2, "shared boundary is not a simple path", true);
    if (nbrs.size() == 1) endpoints.push_back(v);
  }
  expect(endpoints.size() == 2, "shared boundary is not a single open path", true);
  expect(static_cast<int>(shared_edges.size()) == static_cast<int>(path_adj.size()) - 1,
         "shared boundary contains a cycle", true);

  // shared vertices must be exactly the path vertices
  std::set<int> b1, b2;
  for (int df : fs[f1].darts) {
    b1.insert(r.dart_origin(df));
  }
  for (int df : fs[f2].darts) {
    b2.insert(r.dart_origin(df));
  }
  for (int v : b1)
    if (b2.contains(v))
      expect(path_adj.contains(v), "faces meet at a vertex outside the shared path", true);

  SharedBoundaryPath p;
  p.u = std::min(endpoints[0], endpoints[1]);
  p.v = std::max(endpoints[0], endpoints[1]);
  int prev = -1, cur = p.u;
  while (cur != p.v) {
    for (auto [nbr, e] : path_adj[cur]) {
      if (nbr == prev) continue;
      p.edges.push_back(e);
      if (nbr != p.v) p.interior.push_back(nbr);
      prev = cur;
      cur = nbr;
      break;
    }
  }

  expect(d.degree(p.u) >= 3 && d.degree(p.v) >= 3, "shared path endpoint has degree < 3", true);
  int interior_taxa = 0;
  for (int v : p.interior) {
    expect(d.degree(v) == 2, "shared path interior vertex does not have degree 2", true);
    if (d.is_taxon(v)) ++interior_taxa;
  }
  expect(interior_taxa <= 1, "more than one taxon inside the shared path", true);
  expect(!fs[f1].is_outer && !fs[f2].is_outer, "selected face pair touches the outer face", true);

  return MinAdjFaces{f1, f2, std::move(p)};
}

}  // namespace sptw
