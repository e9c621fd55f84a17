#include "sptw/newick.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <queue>
#include <set>
#include <sstream>

namespace sptw {

namespace {

bool is_bare_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '|' || c == '-';
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  TaxonTable& taxa;

  // raw parse tree
  std::vector<std::string> label;
  std::vector<std::size_t> label_pos;
  std::vector<std::vector<int>> children;

  explicit Parser(std::string_view t, TaxonTable& tab) : text(t), taxa(tab) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  int new_node() {
    label.emplace_back();
    label_pos.push_back(pos);
    children.emplace_back();
    return static_cast<int>(label.size()) - 1;
  }

  std::string parse_label() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && text[pos] == '\'') {
      ++pos;
      std::string out;
      for (;;) {
        if (pos >= text.size()) fail("unterminated quoted label");
        char c = text[pos++];
        if (c == '\'') {
          if (pos < text.size() && text[pos] == '\'') {
            out.push_back('\'');
            ++pos;
          } else {
            break;
          }
        } else {
          out.push_back(c);
        }
      }
      if (out.empty()) throw ParseError("empty quoted label", start);
      return out;
    }
    std::string out;
    while (pos < text.size() && is_bare_label_char(text[pos])) out.push_back(text[pos++]);
    return out;
  }

  void skip_branch_length() {
    if (peek() == ':') {
      ++pos;
      skip_ws();
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == 'e' || text[pos] == 'E' || text[pos] == '+' || text[pos] == '-'))
        ++pos;
      if (pos == start) fail("expected branch length after ':'");
    }
  }

  int parse_subtree() {
    skip_ws();
    int node = new_node();
    if (peek() == '(') {
      ++pos;
      int child = parse_subtree();  // recursion may grow `children`
      children[node].push_back(child);
      while (peek() == ',') {
        ++pos;
        child = parse_subtree();
        children[node].push_back(child);
      }
      if (peek() != ')') fail("expected ')' or ','");
      ++pos;
      label_pos[node] = pos;
      label[node] = parse_label();  // internal label, discarded later
      skip_branch_length();
    } else {
      label_pos[node] = pos;
      label[node] = parse_label();
      if (label[node].empty()) fail("expected leaf label or '('");
      skip_branch_length();
    }
    return node;
  }

  PhyloTree run() {
    skip_ws();
    if (pos >= text.size() || text[pos] == ';') fail("empty Newick expression");
    int root = parse_subtree();
    if (peek() != ';') fail("expected ';'");
    ++pos;
    skip_ws();
    if (pos != text.size()) fail("trailing characters after ';'");
    return normalize(root);
  }

  PhyloTree normalize(int /*root*/) {
    int n = static_cast<int>(label.size());
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v)
      for (int c : children[v]) {
        adj[v].push_back(c);
        adj[c].push_back(v);
      }

    // leaves keep their labels; labels on internal nodes are discarded
    std::vector<TaxonId> taxon(n, kNoTaxon);
    std::set<TaxonId> used;
    for (int v = 0; v < n; ++v) {
      if (!children[v].empty()) continue;
      TaxonId id = taxa.intern(label[v]);
      if (!used.insert(id).second)
        throw ParseError("duplicate taxon label '" + label[v] + "'", label_pos[v]);
      taxon[v] = id;
    }

    // drop dangling unlabeled vertices, then suppress unlabeled degree-2 ones
    std::vector<int> deg(n);
    std::vector<char> alive(n, 1);
    std::queue<int> q;
    for (int v = 0; v < n; ++v) {
      deg[v] = static_cast<int>(adj[v].size());
      if (taxon[v] == kNoTaxon && deg[v] <= 1) q.push(v);
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (!alive[v] || taxon[v] != kNoTaxon || deg[v] > 1) continue;
      alive[v] = 0;
      for (int w : adj[v])
        if (alive[w] && --deg[w] <= 1 && taxon[w] == kNoTaxon) q.push(w);
    }

    std::vector<int> new_id(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v)
      if (alive[v] && (taxon[v] != kNoTaxon || deg[v] >= 3)) new_id[v] = next++;
    if (next == 0) throw ParseError("expression has no taxa", 0);

    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, TaxonId>> leaves;
    for (int v = 0; v < n; ++v) {
      if (new_id[v] < 0) continue;
      if (taxon[v] != kNoTaxon) leaves.emplace_back(new_id[v], taxon[v]);
      for (int w : adj[v]) {
        if (!alive[w]) continue;
        int prev = v, cur = w;
        while (new_id[cur] < 0) {
          int nxt = -1;
          for (int x : adj[cur])
            if (alive[x] && x != prev) {
              nxt = x;
              break;
            }
          prev = cur;
          cur = nxt;
        }
        if (new_id[v] < new_id[cur]) edges.emplace_back(new_id[v], new_id[cur]);
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return PhyloTree::from_edges(next, edges, leaves);
  }
};

std::string quoted_if_needed(const std::string& label) {
  bool bare = !label.empty() && std::all_of(label.begin(), label.end(), is_bare_label_char);
  if (bare) return label;
  std::string out = "'";
  for (char c : label) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

// Returns (serialization, smallest leaf label) of the subtree away from `parent`.
std::pair<std::string, std::string> serialize(const PhyloTree& t, const TaxonTable& taxa, int v,
                                              int parent) {
  if (t.is_leaf(v)) {
    const std::string& l = taxa.label(t.taxon_of(v));
    return {quoted_if_needed(l), l};
  }
  std::vector<std::pair<std::string, std::string>> parts;  // (min label, repr)
  for (int w : t.neighbors(v)) {
    if (w == parent) continue;
    auto [repr, min_label] = serialize(t, taxa, w, v);
    parts.emplace_back(std::move(min_label), std::move(repr));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(',');
    out += parts[i].second;
  }
  out.push_back(')');
  return {std::move(out), parts.front().first};
}

}  // namespace

PhyloTree parse_newick(std::string_view text, TaxonTable& taxa) {
  Parser p(text, taxa);
  return p.run();
}

std::string write_newick(const PhyloTree& t, const TaxonTable& taxa) {
  if (t.taxon_count() == 1) return quoted_if_needed(taxa.label(t.taxa()[0])) + ";";
  if (t.taxon_count() == 2) {
    std::string a = taxa.label(t.taxa()[0]);
    std::string b = taxa.label(t.taxa()[1]);
    if (b < a) std::swap(a, b);
    return "(" + quoted_if_needed(a) + "," + quoted_if_needed(b) + ");";
  }
  // root at the internal vertex next to the lexicographically smallest label
  int best_leaf = -1;
  std::string best_label;
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) continue;
    const std::string& l = taxa.label(t.taxon_of(v));
    if (best_leaf < 0 || l < best_label) {
      best_leaf = v;
      best_label = l;
    }
  }
  int root = t.neighbors(best_leaf)[0];
  return serialize(t, taxa, root, -1).first + ";";
}

std::vector<PhyloTree> read_newick_lines(std::istream& in, TaxonTable& taxa) {
  std::vector<PhyloTree> trees;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = line.find_first_not_of(" \t\r\n");
    if (i == std::string::npos || line[i] == '#') continue;
    try {
      trees.push_back(parse_newick(line, taxa));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.position());
    }
  }
  return trees;
}

std::vector<PhyloTree> read_newick_file(const std::string& path, TaxonTable& taxa) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  try {
    return read_newick_lines(in, taxa);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position());
  }
}

}  // namespace sptw
