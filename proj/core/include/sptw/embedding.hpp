#pragma once

#include <vector>

#include "sptw/display_graph.hpp"
#include "sptw/reduction.hpp"

namespace sptw {

/// Combinatorial embedding: a cyclic order of edge ends (darts) per vertex.
/// Edge e owns darts 2e (at edge_vx[e].first) and 2e+1 (at .second).
struct RotationSystem {
  int n = 0;
  std::vector<std::pair<int, int>> edge_vx;
  std::vector<std::vector<int>> rot;

  int edge_count() const { return static_cast<int>(edge_vx.size()); }
  int dart_edge(int d) const { return d >> 1; }
  int dart_origin(int d) const {
    return (d & 1) ? edge_vx[d >> 1].second : edge_vx[d >> 1].first;
  }
  int dart_target(int d) const { return dart_origin(d ^ 1); }
};

/// Builds a planar embedding of a connected treewidth-<=2 graph by replaying
/// a successful reduction trace in reverse: pendants are re-inserted next to
/// a recorded anchor, a bypassed vertex re-expands onto the edge joining its
/// neighbors, and a merged parallel edge is restored flush against its twin.
/// Euler's formula is checked before returning; a trace that does not match
/// the graph raises std::invalid_argument.
RotationSystem embed(const SimpleGraph& g, const ReductionTrace& trace);

/// One face of an embedding, as the closed walk of darts on its boundary.
struct Face {
  std::vector<int> darts;
  bool is_outer = false;
  int boundary_length() const { return static_cast<int>(darts.size()); }
};

/// All faces via next-dart traversal. The outer face is the one of maximum
/// boundary length (ties: smallest contained vertex id, then smallest index).
std::vector<Face> faces(const RotationSystem& r);

/// BFS distances from the outer face in the dual graph.
struct FaceLabeling {
  std::vector<int> labels;
  int outer_face = -1;
};
FaceLabeling face_labels(const RotationSystem& r, const std::vector<Face>& fs);

/// B(F1) n B(F2) for the selected pair: a simple path with >= 1 edge whose
/// endpoints have degree >= 3 and whose interior vertices have degree 2.
struct SharedBoundaryPath {
  int u = -1, v = -1;
  std::vector<int> interior;  // ordered from u to v
  std::vector<int> edges;     // rotation-system edge ids, ordered from u to v
};

struct MinAdjFaces {
  int f1 = -1, f2 = -1;
  SharedBoundaryPath path;
};

/// Selects two minimally adjacent bounded faces: F1 of maximum label k, F2
/// adjacent to a label-k face with the largest label among such neighbors,
/// lexicographically smallest (face, face) pair on ties. The returned pair is
/// verified (single shared path, degree conditions, neither face outer);
/// verification failure raises std::logic_error, absence of any qualifying
/// pair raises std::invalid_argument.
MinAdjFaces minimally_adjacent_faces(const RotationSystem& r, const DisplayGraph& d);
MinAdjFaces minimally_adjacent_faces(const RotationSystem& r, const DisplayGraph& d,
                                     const std::vector<Face>& fs, const FaceLabeling& labeling);

}  // namespace sptw
