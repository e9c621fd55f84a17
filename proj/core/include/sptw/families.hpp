#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sptw/tree.hpp"

namespace sptw {

/// Built-in instance families: the two conflicting quartets whose display
/// graph carries a K4 minor, and for every k >= 3 a compatible and an
/// incompatible k-tree instance whose display graphs have treewidth exactly 3.
enum class FamilyKind { ConflictingQuartets, CompatibleTw3, IncompatibleTw3 };

struct FamilySpec {
  FamilyKind kind;
  int k = 2;  // tree count; >= 3 required for the treewidth-3 kinds
};

const char* to_string(FamilyKind kind);
std::optional<FamilyKind> family_kind_from_string(std::string_view name);

/// The trees of the requested instance. Deterministic for a given spec:
/// the treewidth-3 families chain caterpillar-window quartets behind a core
/// whose display graph contains a K4 minor (three trees pairwise sharing an
/// anchor taxon for the compatible family, a directly conflicting quartet
/// pair for the incompatible one).
std::vector<PhyloTree> generate(const FamilySpec& spec, TaxonTable& taxa);

/// A tree displaying every generated tree of a CompatibleTw3 spec (the
/// spine caterpillar). Throws std::invalid_argument for other kinds.
PhyloTree witness_supertree(const FamilySpec& spec, TaxonTable& taxa);

}  // namespace sptw
