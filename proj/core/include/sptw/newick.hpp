#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sptw/tree.hpp"

namespace sptw {

/// Newick syntax or semantic error, with the 0-based offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses one Newick expression terminated by ';'. Labels are bare
/// [A-Za-z0-9_.|-]+ or single-quoted with '' escaping; optional :length
/// suffixes and internal labels are accepted and discarded. Rooted input is
/// unrooted (degree-2 roots suppressed). Taxa are interned into `taxa`.
PhyloTree parse_newick(std::string_view text, TaxonTable& taxa);

/// Deterministic inverse of parse_newick: the result re-parses to a tree
/// label-isomorphic to `t`.
std::string write_newick(const PhyloTree& t, const TaxonTable& taxa);

/// One tree per line; blank lines and lines starting with '#' are skipped.
/// Parse errors are rethrown with "line N: " prepended.
std::vector<PhyloTree> read_newick_lines(std::istream& in, TaxonTable& taxa);
std::vector<PhyloTree> read_newick_file(const std::string& path, TaxonTable& taxa);

}  // namespace sptw
