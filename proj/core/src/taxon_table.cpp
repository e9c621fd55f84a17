#include "sptw/taxon_table.hpp"

#include <stdexcept>

namespace sptw {

TaxonId TaxonTable::intern(std::string_view label) {
  if (label.empty()) throw std::invalid_argument("taxon label must be nonempty");
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  TaxonId id = static_cast<TaxonId>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<TaxonId> TaxonTable::find(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& TaxonTable::label(TaxonId id) const {
  if (id < 0 || id >= size()) throw std::invalid_argument("unknown taxon id");
  return labels_[id];
}

TaxonId TaxonTable::fresh(std::string_view stem) {
  for (;;) {
    std::string candidate = std::string(stem) + std::to_string(fresh_counter_++);
    if (!index_.contains(candidate)) return intern(candidate);
  }
}

}  // namespace sptw
