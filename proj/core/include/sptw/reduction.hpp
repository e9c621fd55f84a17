#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sptw/display_graph.hpp"

namespace sptw {

/// Plain undirected graph without parallel edges or loops; the substrate for
/// treewidth-2 recognition and small-graph oracles.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Projection of a display graph (vertex ids preserved, parallel edges of
/// degenerate <3-taxon trees merged).
SimpleGraph graph_of(const DisplayGraph& d);

/// One step of the degree-<=2 reduction. Bypass contracts a degree-2 vertex
/// onto the edge joining its two neighbors; `merged` records whether that
/// edge already existed (the parallel copy was merged away).
struct ReductionStep {
  enum class Kind { DropIsolated, DropPendant, Bypass };
  Kind kind;
  int v = -1;
  int a = -1;       // pendant neighbor / first bypass neighbor
  int b = -1;       // second bypass neighbor
  bool merged = false;
  int anchor = -1;  // pendant: far end of the neighbor's lowest other edge
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

/// True iff repeatedly deleting isolated and pendant vertices and bypassing
/// degree-2 vertices empties the graph, i.e. treewidth <= 2. Priority is
/// isolated > pendant > bypass, lowest vertex id first. On failure the trace
/// holds the steps taken before the reduction stalled on a kernel of minimum
/// degree >= 3.
std::pair<bool, ReductionTrace> is_tw_le_2(const SimpleGraph& g);

/// Four disjoint connected branch sets pairwise joined by an edge,
/// certifying treewidth >= 3.
struct K4Witness {
  std::array<std::vector<int>, 4> branch_sets;
};

bool verify_k4_witness(const SimpleGraph& g, const K4Witness& w);

/// Extracts a verifier-checked witness from a graph on which is_tw_le_2
/// returned false. Works by shrinking the stalled kernel to a minor-minimal
/// treewidth->=3 graph, which is necessarily K4, while tracking branch sets.
/// Throws std::invalid_argument when the graph reduces (treewidth <= 2).
K4Witness k4_witness(const SimpleGraph& g);

}  // namespace sptw
