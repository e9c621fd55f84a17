#pragma once

#include <array>
#include <optional>
#include <string>

#include "sptw/embedding.hpp"
#include "sptw/reduction.hpp"
#include "sptw/taxon_table.hpp"
#include "sptw/tree.hpp"

namespace sptw {

/// How the separator endpoints of the selected shared boundary path look.
/// Both endpoints being leaves cannot happen after cleanup and is a hard
/// internal error.
enum class CaseLabel {
  LeafInner,     // one endpoint a taxon, the other an internal vertex
  TaxonOnPath,   // both internal (different trees), one taxon inside the path
  InternalEdge,  // both internal (same tree), path is a single edge
};
const char* to_string(CaseLabel label);

/// Separator {u,v} (and the optional path taxon) with the taxon sets of the
/// two sides it cuts the display graph into.
struct SeparatorInfo {
  int u = -1;
  int v = -1;
  std::optional<int> taxon_on_path;  // display-graph vertex id
  std::vector<TaxonId> side1;
  std::vector<TaxonId> side2;
};

struct CaseRecord {
  int depth = 0;
  CaseLabel label{};
  std::string u_desc, v_desc, t_desc;  // t_desc only for TaxonOnPath
};

struct WitnessReport {
  std::array<std::vector<std::string>, 4> branch_sets;
};

struct SupertreeResult {
  enum class Outcome { Supertree, Incompatible, NotApplicable };
  Outcome outcome{};
  std::optional<PhyloTree> supertree;
  std::optional<K4Witness> witness;          // over the cleaned display graph
  std::optional<WitnessReport> witness_report;
  std::vector<CaseRecord> case_trace;
};

/// Compatibility of two binary trees by quartet comparison on the common
/// taxa: compatible iff no 4-subset resolves differently in the two
/// restrictions. Instances sharing at most 3 taxa are trivially compatible.
bool two_tree_compatible(const PhyloTree& t1, const PhyloTree& t2);

/// The same decision through the display graph: both trees restricted to the
/// common taxa, compatible iff the display graph has treewidth <= 2.
/// Must agree with two_tree_compatible on every input.
bool theorem1_check(const PhyloTree& t1, const PhyloTree& t2);

/// Builds the display graph, cleans it up, and either constructs a verified
/// supertree (treewidth <= 2) or reports a K4 witness (NotApplicable).
/// Every constructed supertree is checked with displays() against every
/// input before return; failure of that gate is a hard std::logic_error.
/// The table is used to mint placeholder taxa and to describe vertices.
SupertreeResult supertree_tw2(const std::vector<PhyloTree>& trees, TaxonTable& taxa);

/// Replaces the subtree spanning side n taxa(t) by a single leaf `label`.
/// Degenerate cases: empty intersection returns t, full intersection the
/// single leaf. Throws std::invalid_argument when no edge separates the
/// intersection from the rest.
PhyloTree contract_metataxon(const PhyloTree& t, std::span<const TaxonId> side, TaxonId label);

/// True iff every tree restricted to X1 u X2 has an edge inducing A|B with
/// A inside X1 and B inside X2. Trees touching only one side pass trivially.
bool split_respected(std::span<const PhyloTree> trees, std::span<const TaxonId> x1,
                     std::span<const TaxonId> x2);

/// Subdivides an edge of s inducing a split that places X1 and X2 on
/// opposite sides, and hangs `leaf` off the subdivision vertex.
PhyloTree attach_on_split_edge(const PhyloTree& s, TaxonId leaf, std::span<const TaxonId> x1,
                               std::span<const TaxonId> x2);

/// Deletes each port leaf and joins the two attachment points by an edge.
/// Port taxa vanish from the result; the remaining taxon sets must be
/// disjoint.
PhyloTree glue_at_edge_image(const PhyloTree& s1, const PhyloTree& s2, TaxonId port1,
                             TaxonId port2);

/// Classifies the selected shared boundary path and computes the separator
/// sides: side1 holds the taxa of the component carrying F1's boundary
/// remainder, side2 everything else. Hard std::logic_error on states the
/// cleanup invariants exclude (two leaf endpoints, internal path vertices,
/// two or more path taxa).
std::pair<CaseLabel, SeparatorInfo> classify_case(const SharedBoundaryPath& path,
                                                  const DisplayGraph& d, const RotationSystem& r,
                                                  const Face& f1, const Face& f2);

}  // namespace sptw
