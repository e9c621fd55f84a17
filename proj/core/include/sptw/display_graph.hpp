#pragma once

#include <span>
#include <vector>

#include "sptw/tree.hpp"

namespace sptw {

/// Union of a tree set with same-labeled taxa identified into one vertex.
/// Taxon vertices list the trees containing them in `owners`; internal
/// vertices belong to exactly one tree. Every edge is tagged with its tree.
struct DisplayGraph {
  struct Vertex {
    TaxonId taxon = kNoTaxon;   // kNoTaxon => internal vertex
    int tree = -1;              // owning tree for internal vertices
    std::vector<int> owners;    // trees containing this vertex (sorted)
  };
  struct Edge {
    int u = -1, v = -1;
    int tree = -1;
  };

  int tree_count = 0;
  std::vector<Vertex> verts;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> inc;  // vertex -> incident edge ids

  int vertex_count() const { return static_cast<int>(verts.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(inc[v].size()); }
  bool is_taxon(int v) const { return verts[v].taxon != kNoTaxon; }
  int other_end(int edge, int v) const {
    const Edge& e = edges[edge];
    return e.u == v ? e.v : e.u;
  }
  /// Sorted taxon ids present in the graph.
  std::vector<TaxonId> taxa() const;
};

DisplayGraph build_display(std::span<const PhyloTree> trees);

/// One cleanup event. Vertex ids refer to the graph the cleanup ran on.
struct CleanupEvent {
  enum class Kind { RemovedDegree1Taxon, SuppressedDegree2Internal, RemovedSmallTree };
  Kind kind;
  int vertex = -1;        // removed taxon / suppressed internal
  TaxonId taxon = kNoTaxon;
  int tree = -1;          // owner of a removed taxon, or the removed tree
};

struct CleanupTrace {
  std::vector<CleanupEvent> events;
};

/// Pop order for pending work of one kind. Kind priority is fixed
/// (small-tree removal, then suppression, then taxon removal); the discipline
/// only varies the order within a kind. ById is the default and is what the
/// documented deterministic behaviour refers to.
enum class CleanupOrder { ById, Fifo, Lifo };

/// Iterates the three reduction rules to their fixed point: no degree-1
/// taxa, no degree-2 internal vertices, and no surviving tree with fewer
/// than four surviving taxa. Result vertex ids are compacted; the trace
/// refers to input ids.
std::pair<DisplayGraph, CleanupTrace> cleanup(const DisplayGraph& d,
                                              CleanupOrder order = CleanupOrder::ById);

/// Applies a recorded trace to the graph it was recorded on. Used to check
/// that traces replay to the cleaned graph.
DisplayGraph replay_cleanup(const DisplayGraph& d, const CleanupTrace& trace);

/// Connected components with induced metadata, vertex ids compacted.
std::vector<DisplayGraph> components(const DisplayGraph& d);

/// A surviving tree read back out of a display graph.
struct TreeImage {
  int tree = -1;
  PhyloTree image;
  std::vector<int> to_display;  // image vertex -> display-graph vertex
};

/// Per-tree images (suppressed form). On a cleaned graph these are exactly
/// the surviving >= 4-taxon trees.
std::vector<TreeImage> extract_trees(const DisplayGraph& d);

}  // namespace sptw
