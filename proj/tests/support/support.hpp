#pragma once

// Shared helpers for the test suites: random trees and instances, and a
// canonical-form check that decides label-isomorphism independently of the
// split machinery under test.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sptw/newick.hpp"
#include "sptw/tree.hpp"

namespace support {

inline sptw::PhyloTree t(const std::string& newick, sptw::TaxonTable& taxa) {
  return sptw::parse_newick(newick, taxa);
}

// Random binary tree by inserting taxa on uniformly chosen edges.
inline sptw::PhyloTree random_binary_tree(const std::vector<sptw::TaxonId>& taxa,
                                          std::mt19937& rng) {
  if (taxa.size() == 1) return sptw::PhyloTree::single_leaf(taxa[0]);
  if (taxa.size() <= 3) return sptw::unique_topology(taxa);
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}};
  std::vector<std::pair<int, sptw::TaxonId>> leaves{{1, taxa[0]}, {2, taxa[1]}, {3, taxa[2]}};
  int vertices = 4;
  for (std::size_t i = 3; i < taxa.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    auto [u, v] = edges[pick(rng)];
    edges.erase(std::find(edges.begin(), edges.end(), std::pair{u, v}));
    int mid = vertices++;
    int leaf = vertices++;
    edges.push_back({u, mid});
    edges.push_back({mid, v});
    edges.push_back({mid, leaf});
    leaves.emplace_back(leaf, taxa[i]);
  }
  return sptw::PhyloTree::from_edges(vertices, edges, leaves);
}

// Canonical form: minimum over all rootings of a sorted rooted serialization.
// Equal strings iff the trees are label-isomorphic.
inline std::string canonical_rooted(const sptw::PhyloTree& t, int v, int parent) {
  if (t.is_leaf(v)) return "L" + std::to_string(t.taxon_of(v));
  std::vector<std::string> parts;
  for (int w : t.neighbors(v))
    if (w != parent) parts.push_back(canonical_rooted(t, w, v));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p + ",";
  out += ")";
  return out;
}

inline std::string canonical_form(const sptw::PhyloTree& t) {
  std::string best;
  for (int v = 0; v < t.vertex_count(); ++v) {
    std::string s = canonical_rooted(t, v, -1);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

inline bool label_isomorphic(const sptw::PhyloTree& a, const sptw::PhyloTree& b) {
  return a.taxa() == b.taxa() && canonical_form(a) == canonical_form(b);
}

// Instance sampled as restrictions of one random supertree: compatible by
// construction.
struct Instance {
  sptw::PhyloTree supertree;
  std::vector<sptw::PhyloTree> trees;
};

inline Instance random_instance(const std::vector<sptw::TaxonId>& taxa, int k, int min_subset,
                                std::mt19937& rng) {
  Instance inst{random_binary_tree(taxa, rng), {}};
  int n = static_cast<int>(taxa.size());
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> size_pick(min_subset, n);
    int m = size_pick(rng);
    std::vector<sptw::TaxonId> subset = taxa;
    std::shuffle(subset.begin(), subset.end(), rng);
    subset.resize(m);
    std::sort(subset.begin(), subset.end());
    inst.trees.push_back(sptw::restrict_to(inst.supertree, subset));
  }
  return inst;
}

// n fresh taxa labeled t0..t{n-1}.
inline std::vector<sptw::TaxonId> fresh_taxa(int n, sptw::TaxonTable& taxa,
                                             const std::string& stem = "t") {
  std::vector<sptw::TaxonId> out;
  for (int i = 0; i < n; ++i) out.push_back(taxa.intern(stem + std::to_string(i)));
  return out;
}

// Erdos-Renyi-ish random simple graph.
inline sptw::SimpleGraph random_graph(int n, double p, std::mt19937& rng) {
  sptw::SimpleGraph g;
  g.n = n;
  std::bernoulli_distribution flip(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (flip(rng)) g.edges.emplace_back(u, v);
  return g;
}

}  // namespace support
