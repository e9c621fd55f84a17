#include "sptw/supertree.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "sptw/log.hpp"

namespace sptw {

namespace {

void internal_check(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(std::string("supertree construction invariant failed: ") + msg);
}

bool subset_of(std::span<const TaxonId> a, std::span<const TaxonId> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<TaxonId> sorted_union(std::span<const PhyloTree> trees) {
  std::set<TaxonId> all;
  for (const auto& t : trees) all.insert(t.taxa().begin(), t.taxa().end());
  return {all.begin(), all.end()};
}

// Taxa on the `from` side of edge (from, blocked).
std::vector<TaxonId> side_taxa(const PhyloTree& t, int from, int blocked) {
  std::vector<char> seen(t.vertex_count(), 0);
  seen[blocked] = 1;
  seen[from] = 1;
  std::vector<TaxonId> out;
  std::queue<int> q;
  q.push(from);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (t.is_leaf(v)) out.push_back(t.taxon_of(v));
    for (int w : t.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Rebuilds a tree from mutable parts, compacting vertex ids.
struct Surgeon {
  std::vector<TaxonId> taxon;
  std::vector<char> alive;
  std::vector<std::pair<int, int>> edges;

  static Surgeon of(const PhyloTree& t) {
    Surgeon s;
    s.taxon.resize(t.vertex_count());
    s.alive.assign(t.vertex_count(), 1);
    for (int v = 0; v < t.vertex_count(); ++v) s.taxon[v] = t.taxon_of(v);
    s.edges = t.edges();
    return s;
  }

  int add_vertex(TaxonId tx = kNoTaxon) {
    taxon.push_back(tx);
    alive.push_back(1);
    return static_cast<int>(taxon.size()) - 1;
  }

  void remove_edge(int u, int v) {
    auto it = std::find_if(edges.begin(), edges.end(), [&](auto e) {
      return (e.first == u && e.second == v) || (e.first == v && e.second == u);
    });
    if (it == edges.end()) throw std::logic_error("surgeon: edge to remove not found");
    edges.erase(it);
  }

  PhyloTree build() const {
    std::vector<int> id(taxon.size(), -1);
    int next = 0;
    for (std::size_t v = 0; v < taxon.size(); ++v)
      if (alive[v]) id[v] = next++;
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : edges) es.emplace_back(id[u], id[v]);
    std::vector<std::pair<int, TaxonId>> leaves;
    for (std::size_t v = 0; v < taxon.size(); ++v)
      if (alive[v] && taxon[v] != kNoTaxon) leaves.emplace_back(id[v], taxon[v]);
    return PhyloTree::from_edges(next, es, leaves);
  }
};

PhyloTree add_leaf_on_edge(const PhyloTree& s, TaxonId z, std::pair<int, int> edge) {
  Surgeon surgeon = Surgeon::of(s);
  int mid = surgeon.add_vertex();
  int leaf = surgeon.add_vertex(z);
  surgeon.remove_edge(edge.first, edge.second);
  surgeon.edges.push_back({edge.first, mid});
  surgeon.edges.push_back({mid, edge.second});
  surgeon.edges.push_back({mid, leaf});
  return surgeon.build();
}

PhyloTree add_leaf_anywhere(const PhyloTree& s, TaxonId z) {
  if (s.taxon_count() == 1)
    return PhyloTree::from_edges(2, {{0, 1}}, {{0, s.taxa()[0]}, {1, z}});
  return add_leaf_on_edge(s, z, s.edges()[0]);
}

// First edge (canonical order) whose split puts x1 and x2 on opposite sides.
std::optional<std::pair<int, int>> find_split_edge(const PhyloTree& s,
                                                   std::span<const TaxonId> x1,
                                                   std::span<const TaxonId> x2) {
  for (auto [u, v] : s.edges()) {
    auto a = side_taxa(s, u, v);
    std::vector<TaxonId> b;
    std::set_difference(s.taxa().begin(), s.taxa().end(), a.begin(), a.end(),
                        std::back_inserter(b));
    if (subset_of(x1, a) && subset_of(x2, b)) return std::pair{u, v};
    if (subset_of(x2, a) && subset_of(x1, b)) return std::pair{u, v};
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::LeafInner:
      return "leaf-inner";
    case CaseLabel::TaxonOnPath:
      return "taxon-on-path";
    case CaseLabel::InternalEdge:
      return "internal-edge";
  }
  return "?";
}

bool two_tree_compatible(const PhyloTree& t1, const PhyloTree& t2) {
  if (!t1.is_binary() || !t2.is_binary())
    throw std::invalid_argument("two_tree_compatible requires binary trees");
  std::vector<TaxonId> common;
  std::set_intersection(t1.taxa().begin(), t1.taxa().end(), t2.taxa().begin(), t2.taxa().end(),
                        std::back_inserter(common));
  if (common.size() <= 3) return true;
  // binary trees on equal taxa are compatible iff they resolve every
  // 4-subset identically, i.e. have equal quartet sets
  return quartet_set(restrict_to(t1, common)) == quartet_set(restrict_to(t2, common));
}

bool theorem1_check(const PhyloTree& t1, const PhyloTree& t2) {
  if (!t1.is_binary() || !t2.is_binary())
    throw std::invalid_argument("theorem1_check requires binary trees");
  std::vector<TaxonId> common;
  std::set_intersection(t1.taxa().begin(), t1.taxa().end(), t2.taxa().begin(), t2.taxa().end(),
                        std::back_inserter(common));
  std::vector<PhyloTree> restricted;
  if (common.empty()) {
    restricted = {t1, t2};
  } else {
    restricted = {restrict_to(t1, common), restrict_to(t2, common)};
  }
  return is_tw_le_2(graph_of(build_display(restricted))).first;
}

PhyloTree contract_metataxon(const PhyloTree& t, std::span<const TaxonId> side, TaxonId label) {
  std::vector<TaxonId> m;
  std::set_intersection(side.begin(), side.end(), t.taxa().begin(), t.taxa().end(),
                        std::back_inserter(m));
  if (m.empty()) return t;
  if (m.size() == t.taxa().size()) return PhyloTree::single_leaf(label);
  if (t.has_taxon(label)) throw std::invalid_argument("meta-taxon label already present");
  if (m.size() == 1) {
    Surgeon s = Surgeon::of(t);
    s.taxon[t.vertex_of(m[0])] = label;
    return s.build();
  }
  // need an edge whose one side is exactly m
  for (auto [u, v] : t.edges()) {
    auto a = side_taxa(t, u, v);
    int inside = -1;
    if (a == m)
      inside = u;
    else {
      std::vector<TaxonId> b;
      std::set_difference(t.taxa().begin(), t.taxa().end(), a.begin(), a.end(),
                          std::back_inserter(b));
      if (b == m) inside = v;
    }
    if (inside < 0) continue;
    int outside = (inside == u) ? v : u;
    // drop the spanned subtree, pend the meta-taxon leaf from the cut point
    Surgeon s = Surgeon::of(t);
    std::vector<char> gone(t.vertex_count(), 0);
    std::queue<int> q;
    q.push(inside);
    gone[inside] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int w : t.neighbors(x))
        if (w != outside && !gone[w]) {
          gone[w] = 1;
          q.push(w);
        }
    }
    for (int x = 0; x < t.vertex_count(); ++x)
      if (gone[x]) s.alive[x] = 0;
    std::erase_if(s.edges, [&](auto e) { return gone[e.first] || gone[e.second]; });
    int leaf = s.add_vertex(label);
    s.edges.push_back({outside, leaf});
    return s.build();
  }
  throw std::invalid_argument("contract_metataxon: no edge separates the side from the rest");
}

bool split_respected(std::span<const PhyloTree> trees, std::span<const TaxonId> x1,
                     std::span<const TaxonId> x2) {
  for (const auto& t : trees) {
    std::vector<TaxonId> m1, m2;
    std::set_intersection(x1.begin(), x1.end(), t.taxa().begin(), t.taxa().end(),
                          std::back_inserter(m1));
    std::set_intersection(x2.begin(), x2.end(), t.taxa().begin(), t.taxa().end(),
                          std::back_inserter(m2));
    if (m1.empty() || m2.empty()) continue;
    std::vector<TaxonId> both;
    std::set_union(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(both));
    if (both.size() <= 2) continue;
    if (!find_split_edge(restrict_to(t, both), m1, m2)) return false;
  }
  return true;
}

PhyloTree attach_on_split_edge(const PhyloTree& s, TaxonId leaf, std::span<const TaxonId> x1,
                               std::span<const TaxonId> x2) {
  if (s.has_taxon(leaf)) throw std::invalid_argument("attach_on_split_edge: leaf already present");
  auto edge = find_split_edge(s, x1, x2);
  if (!edge) throw std::invalid_argument("attach_on_split_edge: no edge induces the split");
  return add_leaf_on_edge(s, leaf, *edge);
}

PhyloTree glue_at_edge_image(const PhyloTree& s1, const PhyloTree& s2, TaxonId port1,
                             TaxonId port2) {
  int p1 = s1.vertex_of(port1), p2 = s2.vertex_of(port2);
  if (p1 < 0 || p2 < 0) throw std::invalid_argument("glue_at_edge_image: port missing");
  if (s1.taxon_count() < 2 || s2.taxon_count() < 2)
    throw std::invalid_argument("glue_at_edge_image: trees must have a vertex besides the port");
  {
    std::vector<TaxonId> rest1, rest2, overlap;
    for (TaxonId t : s1.taxa())
      if (t != port1) rest1.push_back(t);
    for (TaxonId t : s2.taxa())
      if (t != port2) rest2.push_back(t);
    std::set_intersection(rest1.begin(), rest1.end(), rest2.begin(), rest2.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
      throw std::invalid_argument("glue_at_edge_image: taxon sets overlap beyond the ports");
  }
  int q1 = s1.neighbors(p1)[0];
  int q2 = s2.neighbors(p2)[0];
  int off = s1.vertex_count();
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, TaxonId>> leaves;
  for (auto [u, v] : s1.edges())
    if (u != p1 && v != p1) edges.emplace_back(u, v);
  for (int v = 0; v < s1.vertex_count(); ++v)
    if (v != p1 && s1.is_leaf(v)) leaves.emplace_back(v, s1.taxon_of(v));
  for (auto [u, v] : s2.edges())
    if (u != p2 && v != p2) edges.emplace_back(u + off, v + off);
  for (int v = 0; v < s2.vertex_count(); ++v)
    if (v != p2 && s2.is_leaf(v)) leaves.emplace_back(v + off, s2.taxon_of(v));
  edges.emplace_back(q1, q2 + off);
  // compact ids (the two port vertices are skipped)
  std::vector<int> id(s1.vertex_count() + s2.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < s1.vertex_count() + s2.vertex_count(); ++v)
    if (v != p1 && v != p2 + off) id[v] = next++;
  for (auto& e : edges) e = {id[e.first], id[e.second]};
  for (auto& l : leaves) l.first = id[l.first];
  return PhyloTree::from_edges(next, edges, leaves);
}

namespace {

int display_edge_between(const DisplayGraph& d, int u, int v) {
  for (int e : d.inc[u])
    if (d.other_end(e, u) == v) return e;
  internal_check(false, "expected display-graph edge not found");
  return -1;
}

// Edges of a face walk incident to a vertex (as rotation-system edge ids).
std::vector<int> face_edges_at(const RotationSystem& r, const Face& f, int vertex) {
  std::set<int> out;
  for (int d : f.darts)
    if (r.dart_origin(d) == vertex || r.dart_target(d) == vertex) out.insert(r.dart_edge(d));
  return {out.begin(), out.end()};
}

std::vector<int> face_vertices(const RotationSystem& r, const Face& f) {
  std::set<int> out;
  for (int d : f.darts) out.insert(r.dart_origin(d));
  return {out.begin(), out.end()};
}

}  // namespace

std::pair<CaseLabel, SeparatorInfo> classify_case(const SharedBoundaryPath& path,
                                                  const DisplayGraph& d, const RotationSystem& r,
                                                  const Face& f1, const Face& f2) {
  bool u_leaf = d.is_taxon(path.u);
  bool v_leaf = d.is_taxon(path.v);
  internal_check(!(u_leaf && v_leaf),
                 "both separator endpoints are leaves; cleanup removes leaf-leaf edges");

  int taxa_inside = 0;
  for (int x : path.interior) {
    internal_check(d.is_taxon(x), "internal tree vertex inside a shared boundary path");
    ++taxa_inside;
  }
  internal_check(taxa_inside <= 1, "more than one taxon inside a shared boundary path");

  CaseLabel label;
  SeparatorInfo sep;
  sep.u = path.u;
  sep.v = path.v;
  if (u_leaf != v_leaf) {
    label = CaseLabel::LeafInner;
    internal_check(path.interior.empty(), "leaf endpoint with a non-edge shared path");
    if (v_leaf) std::swap(sep.u, sep.v);  // sep.u is the leaf
  } else if (taxa_inside == 1) {
    label = CaseLabel::TaxonOnPath;
    sep.taxon_on_path = path.interior[0];
    int tu = d.verts[path.u].tree, tv = d.verts[path.v].tree;
    internal_check(tu != tv, "path taxon between internal vertices of one tree");
  } else {
    label = CaseLabel::InternalEdge;
    internal_check(path.interior.empty() && path.edges.size() == 1,
                   "internal-internal shared path longer than one edge without a taxon");
    int tu = d.verts[path.u].tree, tv = d.verts[path.v].tree;
    internal_check(tu == tv, "single shared edge between internal vertices of two trees");
  }

  // split the graph at {u, v} (plus the path taxon)
  std::vector<char> blocked(d.vertex_count(), 0);
  blocked[path.u] = blocked[path.v] = 1;
  if (sep.taxon_on_path) blocked[*sep.taxon_on_path] = 1;
  std::vector<int> comp(d.vertex_count(), -1);
  int comps = 0;
  for (int s = 0; s < d.vertex_count(); ++s) {
    if (blocked[s] || comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = comps;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int e : d.inc[x]) {
        int w = d.other_end(e, x);
        if (!blocked[w] && comp[w] < 0) {
          comp[w] = comps;
          q.push(w);
        }
      }
    }
    ++comps;
  }
  internal_check(comps >= 2, "separator does not disconnect the display graph");

  std::set<int> path_verts{path.u, path.v};
  for (int x : path.interior) path_verts.insert(x);
  auto remainder_comp = [&](const Face& f) {
    int cid = -1;
    for (int x : face_vertices(r, f)) {
      if (path_verts.contains(x)) continue;
      internal_check(!blocked[x], "face remainder vertex blocked");
      if (cid < 0) cid = comp[x];
      internal_check(comp[x] == cid, "face boundary remainder spans two components");
    }
    internal_check(cid >= 0, "face boundary has no vertex outside the shared path");
    return cid;
  };
  int cid1 = remainder_comp(f1);
  int cid2 = remainder_comp(f2);
  internal_check(cid1 != cid2, "face remainders meet; separator argument violated");

  for (int x = 0; x < d.vertex_count(); ++x) {
    if (blocked[x] || !d.is_taxon(x)) continue;
    (comp[x] == cid1 ? sep.side1 : sep.side2).push_back(d.verts[x].taxon);
  }
  std::sort(sep.side1.begin(), sep.side1.end());
  std::sort(sep.side2.begin(), sep.side2.end());
  internal_check(!sep.side1.empty() && !sep.side2.empty(), "separator side has no taxa");
  if (label == CaseLabel::InternalEdge)
    internal_check(sep.side1.size() >= 2 && sep.side2.size() >= 2,
                   "internal-edge separator side has fewer than two taxa");
  return {label, sep};
}

namespace {

// Two-vertex junction for joining the halves of a cut tree: s carries the
// first-side stubs of both halves, t the second-side stubs, with the edge
// (s,t) playing the image of the cut edge in both halves at once.
PhyloTree join_cut_halves(const PhyloTree& s1, const PhyloTree& s2, TaxonId port1, TaxonId port2,
                          std::span<const TaxonId> first_side1,
                          std::span<const TaxonId> first_side2) {
  struct Half {
    const PhyloTree* tree;
    int port, q, va, vb;
  };
  std::array<Half, 2> halves{Half{&s1, s1.vertex_of(port1), -1, -1, -1},
                             Half{&s2, s2.vertex_of(port2), -1, -1, -1}};
  std::array<std::span<const TaxonId>, 2> firsts{first_side1, first_side2};
  for (int i = 0; i < 2; ++i) {
    Half& h = halves[i];
    internal_check(h.port >= 0, "cut-join port missing");
    h.q = h.tree->neighbors(h.port)[0];
    internal_check(!h.tree->is_leaf(h.q) && h.tree->degree(h.q) == 3,
                   "cut-join port must hang off an internal vertex");
    std::vector<int> rest;
    for (int w : h.tree->neighbors(h.q))
      if (w != h.port) rest.push_back(w);
    auto side_a = side_taxa(*h.tree, rest[0], h.q);
    bool a_holds = subset_of(firsts[i], side_a);
    if (!a_holds) {
      auto side_b = side_taxa(*h.tree, rest[1], h.q);
      internal_check(subset_of(firsts[i], side_b),
                     "cut-join orientation taxa split across both sides");
    }
    h.va = a_holds ? rest[0] : rest[1];
    h.vb = a_holds ? rest[1] : rest[0];
  }

  int n1 = s1.vertex_count(), n2 = s2.vertex_count();
  std::vector<int> id(n1 + n2 + 2, -1);
  int next = 0;
  auto skip1 = std::set<int>{halves[0].port, halves[0].q};
  auto skip2 = std::set<int>{halves[1].port, halves[1].q};
  for (int v = 0; v < n1; ++v)
    if (!skip1.contains(v)) id[v] = next++;
  for (int v = 0; v < n2; ++v)
    if (!skip2.contains(v)) id[n1 + v] = next++;
  int s_junction = next++;
  int t_junction = next++;

  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, TaxonId>> leaves;
  for (auto [u, v] : s1.edges())
    if (!skip1.contains(u) && !skip1.contains(v)) edges.emplace_back(id[u], id[v]);
  for (auto [u, v] : s2.edges())
    if (!skip2.contains(u) && !skip2.contains(v)) edges.emplace_back(id[n1 + u], id[n1 + v]);
  for (int v = 0; v < n1; ++v)
    if (!skip1.contains(v) && s1.is_leaf(v)) leaves.emplace_back(id[v], s1.taxon_of(v));
  for (int v = 0; v < n2; ++v)
    if (!skip2.contains(v) && s2.is_leaf(v)) leaves.emplace_back(id[n1 + v], s2.taxon_of(v));
  edges.emplace_back(id[halves[0].va], s_junction);
  edges.emplace_back(id[n1 + halves[1].va], s_junction);
  edges.emplace_back(s_junction, t_junction);
  edges.emplace_back(t_junction, id[halves[0].vb]);
  edges.emplace_back(t_junction, id[n1 + halves[1].vb]);
  return PhyloTree::from_edges(next, edges, leaves);
}

std::string vertex_desc(const DisplayGraph& d, const TaxonTable& taxa, int v) {
  if (d.is_taxon(v)) return taxa.label(d.verts[v].taxon);
  return "T" + std::to_string(d.verts[v].tree) + ".v" + std::to_string(v);
}

struct Solver {
  TaxonTable& taxa;
  std::vector<CaseRecord> trace;
  int depth_limit = 0;

  PhyloTree rec_instance(const std::vector<PhyloTree>& trees, int depth, int parent_taxa) {
    internal_check(depth <= depth_limit, "recursion depth exceeded the taxon-count bound");
    auto all = sorted_union(trees);
    internal_check(!all.empty(), "recursive instance without taxa");
    internal_check(parent_taxa < 0 || static_cast<int>(all.size()) < parent_taxa,
                   "recursive instance did not shrink the taxon set");
    for (const auto& t : trees) internal_check(t.is_binary(), "recursive instance not binary");
    log_debug("instance: " + std::to_string(trees.size()) + " trees, " +
              std::to_string(all.size()) + " taxa, depth " + std::to_string(depth));

    std::optional<PhyloTree> s;
    if (all.size() <= 3) {
      s = unique_topology(all);
    } else {
      DisplayGraph d = build_display(trees);
      auto [cleaned, cleanup_trace] = cleanup(d);
      for (const DisplayGraph& comp : components(cleaned)) {
        PhyloTree part = rec_component(comp, depth);
        s = s ? join_disjoint(*s, part) : part;
      }
      restore_cleaned_taxa(trees, cleanup_trace, s);
    }
    internal_check(s.has_value(), "instance produced no supertree");
    internal_check(s->taxa() == all, "supertree taxa differ from the instance taxa");
    for (const auto& t : trees)
      internal_check(displays(*s, t), "constructed supertree fails to display an input tree");
    return *s;
  }

  PhyloTree rec_component(const DisplayGraph& comp, int depth) {
    auto images = extract_trees(comp);
    for (const auto& img : images)
      internal_check(img.image.taxon_count() >= 4, "cleaned component kept a small tree");
    auto comp_taxa = comp.taxa();
    int comp_n = static_cast<int>(comp_taxa.size());

    auto [ok, rtrace] = is_tw_le_2(graph_of(comp));
    internal_check(ok, "cleaned component is not reducible despite the instance gate");
    RotationSystem rot = embed(graph_of(comp), rtrace);
    auto fs = faces(rot);
    auto labeling = face_labels(rot, fs);
    MinAdjFaces sel = minimally_adjacent_faces(rot, comp, fs, labeling);
    auto [label, sep] = classify_case(sel.path, comp, rot, fs[sel.f1], fs[sel.f2]);

    CaseRecord rec;
    rec.depth = depth;
    rec.label = label;
    rec.u_desc = vertex_desc(comp, taxa, sep.u);
    rec.v_desc = vertex_desc(comp, taxa, sep.v);
    if (sep.taxon_on_path) rec.t_desc = vertex_desc(comp, taxa, *sep.taxon_on_path);
    trace.push_back(rec);
    log_debug(std::string("case ") + to_string(label) + " at depth " + std::to_string(depth) +
              " separator " + rec.u_desc + "," + rec.v_desc);

    PhyloTree s = (label == CaseLabel::InternalEdge)
                      ? solve_cut(comp, images, sel, sep, rot, fs, depth, comp_n)
                      : solve_meta(images, label, sep, comp, depth, comp_n);
    for (const auto& img : images)
      internal_check(displays(s, img.image), "component supertree fails to display an image");
    return s;
  }

  // Cases with a removable taxon (the leaf endpoint, or the taxon on the
  // path): contract each side to a meta-taxon, solve both, glue, re-attach.
  PhyloTree solve_meta(const std::vector<TreeImage>& images, CaseLabel label,
                       const SeparatorInfo& sep, const DisplayGraph& comp, int depth,
                       int comp_taxa) {
    int removed_vertex = (label == CaseLabel::LeafInner) ? sep.u : *sep.taxon_on_path;
    TaxonId removed = comp.verts[removed_vertex].taxon;
    internal_check(removed != kNoTaxon, "meta case removable vertex is not a taxon");

    std::vector<PhyloTree> restricted;
    for (const auto& img : images) {
      if (img.image.has_taxon(removed)) {
        std::vector<TaxonId> keep;
        for (TaxonId t : img.image.taxa())
          if (t != removed) keep.push_back(t);
        restricted.push_back(restrict_to(img.image, keep));
      } else {
        restricted.push_back(img.image);
      }
    }
    internal_check(split_respected(restricted, sep.side1, sep.side2),
                   "input tree crosses the separator split");

    TaxonId w1 = taxa.fresh("_W");
    TaxonId w2 = taxa.fresh("_W");
    std::vector<PhyloTree> first, second;
    for (const auto& t : restricted) {
      first.push_back(contract_metataxon(t, sep.side2, w2));
      second.push_back(contract_metataxon(t, sep.side1, w1));
    }
    PhyloTree s1 = rec_instance(first, depth + 1, comp_taxa);
    PhyloTree s2 = rec_instance(second, depth + 1, comp_taxa);
    PhyloTree joined = glue_at_edge_image(s1, s2, w2, w1);
    return attach_on_split_edge(joined, removed, sep.side1, sep.side2);
  }

  // Both endpoints internal in the same tree: cut that tree transversally
  // along the two faces, solve the two sides, and join at the edge image.
  PhyloTree solve_cut(const DisplayGraph& comp, const std::vector<TreeImage>& images,
                      const MinAdjFaces& sel, const SeparatorInfo& sep, const RotationSystem& rot,
                      const std::vector<Face>& fs, int depth, int comp_taxa) {
    int u = sel.path.u, v = sel.path.v;
    int d_edge = display_edge_between(comp, u, v);
    int cut_tree = comp.edges[d_edge].tree;

    // boundary edges at u and v besides the shared edge, per face
    auto other_edge = [&](const Face& f, int vertex) {
      auto es = face_edges_at(rot, f, vertex);
      internal_check(es.size() == 2, "boundary walk does not pass the separator vertex once");
      for (int e : es) {
        auto [a, b] = rot.edge_vx[e];
        if (!((a == u && b == v) || (a == v && b == u))) return e;
      }
      internal_check(false, "face boundary at separator vertex has only the shared edge");
      return -1;
    };
    auto far_end = [&](int redge, int from) {
      auto [a, b] = rot.edge_vx[redge];
      return a == from ? b : a;
    };
    int g1 = far_end(other_edge(fs[sel.f1], u), u);
    int h1 = far_end(other_edge(fs[sel.f1], v), v);
    int g2 = far_end(other_edge(fs[sel.f2], u), u);
    int h2 = far_end(other_edge(fs[sel.f2], v), v);

    // taxa of the four subtrees of the cut tree hanging off u and v
    auto subtree_taxa = [&](int start) {
      std::vector<char> seen(comp.vertex_count(), 0);
      seen[u] = seen[v] = 1;
      std::vector<TaxonId> out;
      std::queue<int> q;
      q.push(start);
      seen[start] = 1;
      while (!q.empty()) {
        int x = q.front();
        q.pop();
        if (comp.is_taxon(x)) out.push_back(comp.verts[x].taxon);
        for (int e : comp.inc[x]) {
          if (comp.edges[e].tree != cut_tree) continue;
          int w = comp.other_end(e, x);
          if (!seen[w]) {
            seen[w] = 1;
            q.push(w);
          }
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    auto a1 = subtree_taxa(g1), b1 = subtree_taxa(h1);
    auto a2 = subtree_taxa(g2), b2 = subtree_taxa(h2);
    internal_check(subset_of(a1, sep.side1) && subset_of(b1, sep.side1),
                   "first-face subtrees leak outside side1");
    internal_check(subset_of(a2, sep.side2) && subset_of(b2, sep.side2),
                   "second-face subtrees leak outside side2");

    const TreeImage* cut_image = nullptr;
    for (const auto& img : images)
      if (img.tree == cut_tree) cut_image = &img;
    internal_check(cut_image != nullptr, "cut tree has no image");
    {
      std::vector<TaxonId> uni;
      std::set_union(a1.begin(), a1.end(), b1.begin(), b1.end(), std::back_inserter(uni));
      std::vector<TaxonId> uni2;
      std::set_union(a2.begin(), a2.end(), b2.begin(), b2.end(), std::back_inserter(uni2));
      std::vector<TaxonId> whole;
      std::set_union(uni.begin(), uni.end(), uni2.begin(), uni2.end(), std::back_inserter(whole));
      internal_check(whole == cut_image->image.taxa(),
                     "cut subtrees do not cover the cut tree's taxa");
    }

    TaxonId p1 = taxa.fresh("_port");
    TaxonId p2 = taxa.fresh("_port");
    std::vector<TaxonId> side1_taxa;
    std::set_union(a1.begin(), a1.end(), b1.begin(), b1.end(), std::back_inserter(side1_taxa));
    std::vector<TaxonId> side2_taxa;
    std::set_union(a2.begin(), a2.end(), b2.begin(), b2.end(), std::back_inserter(side2_taxa));
    PhyloTree t1 = attach_on_split_edge(restrict_to(cut_image->image, side1_taxa), p1, a1, b1);
    PhyloTree t2 = attach_on_split_edge(restrict_to(cut_image->image, side2_taxa), p2, a2, b2);

    std::vector<PhyloTree> inst1{t1}, inst2{t2};
    for (const auto& img : images) {
      if (img.tree == cut_tree) continue;
      if (subset_of(img.image.taxa(), sep.side1))
        inst1.push_back(img.image);
      else if (subset_of(img.image.taxa(), sep.side2))
        inst2.push_back(img.image);
      else
        internal_check(false, "non-cut tree straddles the separator sides");
    }
    PhyloTree s1 = rec_instance(inst1, depth + 1, comp_taxa);
    PhyloTree s2 = rec_instance(inst2, depth + 1, comp_taxa);
    PhyloTree s = join_cut_halves(s1, s2, p1, p2, a1, a2);
    internal_check(displays(s, cut_image->image), "cut-join result does not display the cut tree");
    return s;
  }

  PhyloTree join_disjoint(const PhyloTree& s1, const PhyloTree& s2) {
    if (s1.taxon_count() == 1) return add_leaf_anywhere(s2, s1.taxa()[0]);
    if (s2.taxon_count() == 1) return add_leaf_anywhere(s1, s2.taxa()[0]);
    TaxonId p1 = taxa.fresh("_port");
    TaxonId p2 = taxa.fresh("_port");
    return glue_at_edge_image(add_leaf_on_edge(s1, p1, s1.edges()[0]),
                              add_leaf_on_edge(s2, p2, s2.edges()[0]), p1, p2);
  }

  // Replays cleanup events backwards, re-attaching removed taxa so the
  // result also displays the trees (and parts of trees) the cleanup dropped.
  void restore_cleaned_taxa(const std::vector<PhyloTree>& trees, const CleanupTrace& ctrace,
                            std::optional<PhyloTree>& s) {
    struct Annotated {
      const CleanupEvent* ev;
      std::vector<TaxonId> tree_taxa;  // taxa of the affected tree after/at the event
    };
    std::vector<Annotated> ann;
    std::vector<std::set<TaxonId>> current(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i)
      current[i] = {trees[i].taxa().begin(), trees[i].taxa().end()};
    for (const CleanupEvent& ev : ctrace.events) {
      Annotated a{&ev, {}};
      switch (ev.kind) {
        case CleanupEvent::Kind::RemovedDegree1Taxon:
          current[ev.tree].erase(ev.taxon);
          a.tree_taxa.assign(current[ev.tree].begin(), current[ev.tree].end());
          break;
        case CleanupEvent::Kind::RemovedSmallTree:
          a.tree_taxa.assign(current[ev.tree].begin(), current[ev.tree].end());
          break;
        case CleanupEvent::Kind::SuppressedDegree2Internal:
          break;
      }
      ann.push_back(std::move(a));
    }

    for (auto it = ann.rbegin(); it != ann.rend(); ++it) {
      const CleanupEvent& ev = *it->ev;
      switch (ev.kind) {
        case CleanupEvent::Kind::SuppressedDegree2Internal:
          break;
        case CleanupEvent::Kind::RemovedSmallTree:
          // a tree below four taxa adds no topology; its taxa only need to
          // be present
          for (TaxonId z : it->tree_taxa) {
            if (!s)
              s = PhyloTree::single_leaf(z);
            else if (!s->has_taxon(z))
              s = add_leaf_anywhere(*s, z);
          }
          break;
        case CleanupEvent::Kind::RemovedDegree1Taxon: {
          internal_check(s.has_value(), "taxon re-attachment with no partial supertree");
          const std::vector<TaxonId>& after = it->tree_taxa;
          if (after.size() <= 2) {
            if (!s->has_taxon(ev.taxon)) s = add_leaf_anywhere(*s, ev.taxon);
            break;
          }
          // locate the attachment split of the removed taxon in its tree
          std::vector<TaxonId> with;
          std::set_union(after.begin(), after.end(), &ev.taxon, &ev.taxon + 1,
                         std::back_inserter(with));
          PhyloTree r = restrict_to(trees[ev.tree], with);
          int leaf = r.vertex_of(ev.taxon);
          int w = r.neighbors(leaf)[0];
          internal_check(r.degree(w) == 3, "attachment vertex of removed taxon is not ternary");
          std::vector<int> rest;
          for (int x : r.neighbors(w))
            if (x != leaf) rest.push_back(x);
          auto side_a = side_taxa(r, rest[0], w);
          std::vector<TaxonId> side_b;
          std::set_difference(after.begin(), after.end(), side_a.begin(), side_a.end(),
                              std::back_inserter(side_b));
          s = attach_on_split_edge(*s, ev.taxon, side_a, side_b);
          break;
        }
      }
    }
  }
};

}  // namespace

SupertreeResult supertree_tw2(const std::vector<PhyloTree>& trees, TaxonTable& taxa) {
  if (trees.empty()) throw std::invalid_argument("supertree_tw2: empty input");
  for (const auto& t : trees)
    if (!t.is_binary()) throw std::invalid_argument("supertree_tw2: input trees must be binary");

  DisplayGraph d = build_display(trees);
  auto [cleaned, ctrace] = cleanup(d);
  SimpleGraph g = graph_of(cleaned);
  auto [ok, rtrace] = is_tw_le_2(g);
  SupertreeResult result;
  if (!ok) {
    result.outcome = SupertreeResult::Outcome::NotApplicable;
    result.witness = k4_witness(g);
    WitnessReport report;
    for (int i = 0; i < 4; ++i)
      for (int v : result.witness->branch_sets[i])
        report.branch_sets[i].push_back(vertex_desc(cleaned, taxa, v));
    result.witness_report = std::move(report);
    return result;
  }

  Solver solver{taxa, {}, static_cast<int>(sorted_union(trees).size()) + 3};
  PhyloTree s = solver.rec_instance(trees, 0, -1);
  for (const auto& t : trees)
    internal_check(displays(s, t), "final supertree fails to display an input tree");
  result.outcome = SupertreeResult::Outcome::Supertree;
  result.supertree = std::move(s);
  result.case_trace = std::move(solver.trace);
  return result;
}

}  // namespace sptw
