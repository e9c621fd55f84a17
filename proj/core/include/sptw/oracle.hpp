#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "sptw/reduction.hpp"
#include "sptw/tree.hpp"

namespace sptw {

/// Streams every unrooted binary topology on a fixed taxon set exactly once,
/// by inserting taxa one at a time on every edge of every smaller tree
/// (canonical order: sorted taxa, edges in sorted-pair order).
/// Guard: 3 <= |X| <= 9, (2*9-5)!! = 135135 trees being the practical ceiling.
class TreeEnumeration {
 public:
  explicit TreeEnumeration(std::vector<TaxonId> taxa);
  std::optional<PhyloTree> next();

 private:
  std::vector<TaxonId> taxa_;
  std::vector<int> choice_;  // edge picked when inserting taxon i (i >= 3)
  bool done_ = false;
  bool first_ = true;

  PhyloTree build() const;
  bool advance();
};

/// (2n-5)!! for n >= 3; 1 for n in {1,2}.
std::uint64_t num_binary_topologies(int n);

/// First enumerated supertree displaying every input, or nullopt.
/// Throws std::invalid_argument when the union of taxa exceeds 9.
std::optional<PhyloTree> brute_force_compatible(std::span<const PhyloTree> trees);

/// Exact treewidth by dynamic programming over elimination orderings.
/// Guard: |V| <= 20. Empty graph yields -1, a single vertex 0.
int exact_treewidth(const SimpleGraph& g);

}  // namespace sptw
