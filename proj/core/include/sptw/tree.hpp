#pragma once

#include <array>
#include <compare>
#include <span>
#include <utility>
#include <vector>

#include "sptw/taxon_table.hpp"

namespace sptw {

/// Unrooted phylogenetic tree over interned taxon ids.
///
/// Invariants (validated on construction):
///   - connected and acyclic;
///   - a vertex carries a taxon iff its degree is 1 (degree 0 only for the
///     single-vertex tree);
///   - no internal vertex of degree 2 (suppressed form is canonical);
///   - taxon ids are pairwise distinct.
/// Binary means every internal vertex has degree exactly 3; non-binary trees
/// are valid values, operations that need binarity check it themselves.
class PhyloTree {
 public:
  PhyloTree() = default;

  static PhyloTree from_edges(int vertex_count,
                              const std::vector<std::pair<int, int>>& edges,
                              const std::vector<std::pair<int, TaxonId>>& leaf_taxa);
  static PhyloTree single_leaf(TaxonId t);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const;
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  TaxonId taxon_of(int v) const { return vertex_taxon_[v]; }
  bool is_leaf(int v) const { return vertex_taxon_[v] != kNoTaxon; }
  /// Vertex carrying taxon t, or -1.
  int vertex_of(TaxonId t) const;
  bool has_taxon(TaxonId t) const { return vertex_of(t) >= 0; }

  /// Sorted taxon ids of the tree.
  const std::vector<TaxonId>& taxa() const { return taxa_; }
  int taxon_count() const { return static_cast<int>(taxa_.size()); }

  bool is_binary() const;

  /// Edges as (min,max) vertex pairs, sorted; canonical iteration order.
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<TaxonId> vertex_taxon_;
  std::vector<TaxonId> taxa_;
};

/// Bipartition of a tree's taxa induced by an edge.
/// Canonical form: both sides sorted, side_a holds the smallest taxon.
struct Split {
  std::vector<TaxonId> side_a;
  std::vector<TaxonId> side_b;

  static Split make(std::vector<TaxonId> a, std::vector<TaxonId> b);
  bool operator==(const Split&) const = default;
  auto operator<=>(const Split&) const = default;
};

/// Four-taxon topology ab|cd. Canonical form: each pair sorted, pair holding
/// the smallest taxon first.
struct Quartet {
  std::array<TaxonId, 2> pair_1;
  std::array<TaxonId, 2> pair_2;

  static Quartet make(TaxonId a, TaxonId b, TaxonId c, TaxonId d);
  bool operator==(const Quartet&) const = default;
  auto operator<=>(const Quartet&) const = default;
};

/// T|X': minimal subtree spanning X' with degree-2 vertices suppressed.
/// Throws std::invalid_argument if X' is empty or contains unknown taxa.
PhyloTree restrict_to(const PhyloTree& t, std::span<const TaxonId> subset);

/// One split per edge, sorted canonically. Requires >= 2 taxa.
std::vector<Split> splits(const PhyloTree& t);

/// All C(n,4) quartets of a binary tree with n >= 4 leaves.
std::vector<Quartet> quartet_set(const PhyloTree& t);

/// Topology induced on four taxa of (any) tree, via the four-point condition
/// on path lengths. Independent of restrict_to.
Quartet quartet_topology(const PhyloTree& t, TaxonId a, TaxonId b, TaxonId c, TaxonId d);

/// True iff s restricted to taxa(t) is label-isomorphic to t.
/// Throws std::invalid_argument if taxa(t) is not a subset of taxa(s).
bool displays(const PhyloTree& s, const PhyloTree& t);

/// The unique unrooted topology on 1..3 taxa (leaf, edge, star).
PhyloTree unique_topology(std::span<const TaxonId> taxa);

}  // namespace sptw
