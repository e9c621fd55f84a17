#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sptw {

/// Dense id for an interned taxon label. Ids are assigned per TaxonTable,
/// so trees sharing a table identify equal labels by id equality.
using TaxonId = int;
inline constexpr TaxonId kNoTaxon = -1;

/// Instance-level label interner. One table per problem instance; every tree
/// of the instance is parsed against it so that cross-tree taxon
/// identification is O(1).
class TaxonTable {
 public:
  TaxonId intern(std::string_view label);
  std::optional<TaxonId> find(std::string_view label) const;
  const std::string& label(TaxonId id) const;
  int size() const { return static_cast<int>(labels_.size()); }

  /// Mints a label of the form "<stem><n>" that is not yet interned.
  /// Used for meta-taxa and gluing ports; never emitted to the user.
  TaxonId fresh(std::string_view stem);

 private:
  std::vector<std::string> labels_;
  std::map<std::string, TaxonId, std::less<>> index_;
  int fresh_counter_ = 0;
};

}  // namespace sptw
