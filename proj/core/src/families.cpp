#include "sptw/families.hpp"

#include <stdexcept>
#include <string>

namespace sptw {

namespace {

PhyloTree quartet(TaxonId a, TaxonId b, TaxonId c, TaxonId d) {
  return PhyloTree::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}},
                               {{2, a}, {3, b}, {4, c}, {5, d}});
}

PhyloTree caterpillar(const std::vector<TaxonId>& leaves) {
  int m = static_cast<int>(leaves.size());
  if (m <= 3) return unique_topology(leaves);
  // internals 0..m-3 form the spine; leaves m-2..2m-3
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, TaxonId>> lv;
  int spine = m - 2;
  for (int i = 0; i + 1 < spine; ++i) edges.emplace_back(i, i + 1);
  auto leaf_vertex = [&](int j) { return spine + j; };
  edges.emplace_back(0, leaf_vertex(0));
  edges.emplace_back(0, leaf_vertex(1));
  for (int j = 2; j < m - 1; ++j) edges.emplace_back(j - 1, leaf_vertex(j));
  edges.emplace_back(spine - 1, leaf_vertex(m - 1));
  for (int j = 0; j < m; ++j) lv.emplace_back(leaf_vertex(j), leaves[j]);
  return PhyloTree::from_edges(spine + m, edges, lv);
}

// Spine label at a position: a fixed prefix, then s1, s2, ...
TaxonId spine_taxon(const std::vector<const char*>& base, int index, TaxonTable& taxa) {
  if (index < static_cast<int>(base.size())) return taxa.intern(base[index]);
  return taxa.intern("s" + std::to_string(index - static_cast<int>(base.size()) + 1));
}

const std::vector<const char*> kCompatibleBase{"p", "a", "b", "z", "c", "q", "r"};
const std::vector<const char*> kIncompatibleBase{"a", "b", "z", "c", "q", "r"};

}  // namespace

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ConflictingQuartets:
      return "conflicting_quartets";
    case FamilyKind::CompatibleTw3:
      return "compatible_tw3";
    case FamilyKind::IncompatibleTw3:
      return "incompatible_tw3";
  }
  return "?";
}

std::optional<FamilyKind> family_kind_from_string(std::string_view name) {
  if (name == "conflicting_quartets") return FamilyKind::ConflictingQuartets;
  if (name == "compatible_tw3") return FamilyKind::CompatibleTw3;
  if (name == "incompatible_tw3") return FamilyKind::IncompatibleTw3;
  return std::nullopt;
}

std::vector<PhyloTree> generate(const FamilySpec& spec, TaxonTable& taxa) {
  switch (spec.kind) {
    case FamilyKind::ConflictingQuartets: {
      TaxonId a = taxa.intern("a"), b = taxa.intern("b"), c = taxa.intern("c"),
              d = taxa.intern("d");
      return {quartet(a, b, c, d), quartet(a, c, b, d)};
    }
    case FamilyKind::CompatibleTw3: {
      if (spec.k < 3) throw std::invalid_argument("compatible_tw3 needs k >= 3");
      auto at = [&](int i) { return spine_taxon(kCompatibleBase, i, taxa); };
      // anchor taxon z sits in the first three trees, giving the K4 minor;
      // each later tree hangs off the previous one by a two-taxon interface,
      // a series composition that cannot raise the treewidth past 3
      std::vector<PhyloTree> out;
      out.push_back(quartet(at(0), at(1), at(2), at(3)));  // p a | b z
      out.push_back(quartet(at(2), at(3), at(4), at(5)));  // b z | c q
      out.push_back(quartet(at(1), at(3), at(4), at(6)));  // a z | c r
      if (spec.k >= 4) out.push_back(quartet(at(4), at(5), at(7), at(8)));  // c q | s1 s2
      for (int j = 5; j <= spec.k; ++j) {
        int base = 7 + 2 * (j - 5);
        out.push_back(quartet(at(base), at(base + 1), at(base + 2), at(base + 3)));
      }
      return out;
    }
    case FamilyKind::IncompatibleTw3: {
      if (spec.k < 3) throw std::invalid_argument("incompatible_tw3 needs k >= 3");
      auto at = [&](int i) { return spine_taxon(kIncompatibleBase, i, taxa); };
      // the first two trees conflict outright; the tail is the same
      // two-taxon-interface chain as in the compatible family
      std::vector<PhyloTree> out;
      out.push_back(quartet(at(0), at(1), at(3), at(2)));  // a b | c z
      out.push_back(quartet(at(0), at(3), at(1), at(2)));  // a c | b z
      if (spec.k >= 3) out.push_back(quartet(at(3), at(2), at(4), at(5)));  // c z | q r
      for (int j = 4; j <= spec.k; ++j) {
        int base = 4 + 2 * (j - 4);
        out.push_back(quartet(at(base), at(base + 1), at(base + 2), at(base + 3)));
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown family kind");
}

PhyloTree witness_supertree(const FamilySpec& spec, TaxonTable& taxa) {
  if (spec.kind != FamilyKind::CompatibleTw3)
    throw std::invalid_argument("witness_supertree is defined for compatible_tw3 only");
  if (spec.k < 3) throw std::invalid_argument("compatible_tw3 needs k >= 3");
  int last = spec.k == 3 ? 6 : 6 + 2 * (spec.k - 3);
  std::vector<TaxonId> spine;
  for (int i = 0; i <= last; ++i) spine.push_back(spine_taxon(kCompatibleBase, i, taxa));
  return caterpillar(spine);
}

}  // namespace sptw
