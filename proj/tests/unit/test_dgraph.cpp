#include <random>

#include "doctest.h"
#include "sptw/display_graph.hpp"
#include "sptw/newick.hpp"
#include "sptw/oracle.hpp"
#include "support/support.hpp"

using namespace sptw;
using support::t;

namespace {

// Label-isomorphism of display graphs: same taxa and the same per-tree
// images (as labeled trees), which determines the graph.
bool display_isomorphic(const DisplayGraph& a, const DisplayGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  if (a.taxa() != b.taxa()) return false;
  auto ia = extract_trees(a), ib = extract_trees(b);
  if (ia.size() != ib.size()) return false;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    if (ia[k].tree != ib[k].tree) return false;
    if (!support::label_isomorphic(ia[k].image, ib[k].image)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("dgraph");

TEST_CASE("build single quartet") {
  TaxonTable tab;
  DisplayGraph d = build_display(std::vector{t("((a,b),(c,d));", tab)});
  CHECK(d.vertex_count() == 6);
  CHECK(d.edge_count() == 5);
  auto images = extract_trees(d);
  REQUIRE(images.size() == 1);
  CHECK(support::label_isomorphic(images[0].image, t("((a,b),(c,d));", tab)));
}

TEST_CASE("build conflicting quartet pair") {
  TaxonTable tab;
  DisplayGraph d =
      build_display(std::vector{t("((a,b),(c,d));", tab), t("((a,c),(b,d));", tab)});
  CHECK(d.vertex_count() == 8);  // 4 taxa + 4 internal
  CHECK(d.edge_count() == 10);
  for (int v = 0; v < d.vertex_count(); ++v)
    if (d.is_taxon(v)) CHECK(d.degree(v) == 2);
}

TEST_CASE("disjoint trees give two components") {
  TaxonTable tab;
  DisplayGraph d =
      build_display(std::vector{t("((a,b),(c,d));", tab), t("((e,f),(g,h));", tab)});
  CHECK(components(d).size() == 2);
  DisplayGraph connected = build_display(std::vector{t("((a,b),(c,d));", tab)});
  CHECK(components(connected).size() == 1);
}

TEST_CASE("empty input rejected") {
  CHECK_THROWS_AS(build_display(std::vector<PhyloTree>{}), std::invalid_argument);
}

TEST_CASE("taxon degree equals number of owner trees") {
  TaxonTable tab;
  std::mt19937 rng(42);
  for (int it = 0; it < 30; ++it) {
    auto taxa = support::fresh_taxa(8, tab);
    auto inst = support::random_instance(taxa, 3, 4, rng);
    DisplayGraph d = build_display(inst.trees);
    for (int v = 0; v < d.vertex_count(); ++v) {
      if (!d.is_taxon(v)) continue;
      int owners = 0;
      for (const auto& tr : inst.trees)
        if (tr.has_taxon(d.verts[v].taxon)) ++owners;
      REQUIRE(d.degree(v) == owners);
      REQUIRE(static_cast<int>(d.verts[v].owners.size()) == owners);
    }
  }
}

TEST_CASE("cleanup of a single tree cascades to nothing") {
  TaxonTable tab;
  DisplayGraph d = build_display(std::vector{t("((a,b),(c,(d,e)));", tab)});
  auto [cleaned, trace] = cleanup(d);
  CHECK(cleaned.vertex_count() == 0);
  CHECK(cleaned.edge_count() == 0);
  CHECK(!trace.events.empty());
}

TEST_CASE("cleanup keeps the conflicting pair untouched") {
  TaxonTable tab;
  DisplayGraph d =
      build_display(std::vector{t("((a,b),(c,d));", tab), t("((a,c),(b,d));", tab)});
  auto [cleaned, trace] = cleanup(d);
  CHECK(cleaned.vertex_count() == 8);
  CHECK(cleaned.edge_count() == 10);
  CHECK(trace.events.empty());
}

TEST_CASE("a tree that falls below four taxa is deleted whole") {
  TaxonTable tab;
  // two stable quartets plus a three-taxon star that must vanish
  std::vector<PhyloTree> trees{t("((a,b),(c,d));", tab), t("((a,b),(c,d));", tab),
                               t("(a,b,x);", tab)};
  DisplayGraph d = build_display(trees);
  auto [cleaned, trace] = cleanup(d);
  CHECK(cleaned.vertex_count() == 8);
  CHECK(cleaned.edge_count() == 10);
  bool saw_tree_removal = false;
  for (const auto& ev : trace.events)
    if (ev.kind == CleanupEvent::Kind::RemovedSmallTree && ev.tree == 2) saw_tree_removal = true;
  CHECK(saw_tree_removal);
  for (TaxonId x : cleaned.taxa()) CHECK(x != *tab.find("x"));
}

TEST_CASE("chained quartets clean away entirely") {
  TaxonTable tab;
  DisplayGraph d =
      build_display(std::vector{t("((a,b),(c,d));", tab), t("((c,d),(e,f));", tab)});
  auto [cleaned, trace] = cleanup(d);
  CHECK(cleaned.vertex_count() == 0);
}

TEST_CASE("replaying a trace reproduces the cleaned graph") {
  TaxonTable tab;
  std::mt19937 rng(99);
  for (int it = 0; it < 50; ++it) {
    auto taxa = support::fresh_taxa(7, tab);
    auto inst = support::random_instance(taxa, 3, 4, rng);
    DisplayGraph d = build_display(inst.trees);
    auto [cleaned, trace] = cleanup(d);
    DisplayGraph replayed = replay_cleanup(d, trace);
    REQUIRE(display_isomorphic(cleaned, replayed));
  }
}

TEST_CASE("cleanup is confluent across worklist disciplines") {
  TaxonTable tab;
  std::mt19937 rng(123);
  for (int it = 0; it < 500; ++it) {
    std::uniform_int_distribution<int> n_pick(5, 9), k_pick(2, 4);
    auto taxa = support::fresh_taxa(n_pick(rng), tab);
    auto inst = support::random_instance(taxa, k_pick(rng), 4, rng);
    DisplayGraph d = build_display(inst.trees);
    DisplayGraph by_id = cleanup(d, CleanupOrder::ById).first;
    DisplayGraph fifo = cleanup(d, CleanupOrder::Fifo).first;
    DisplayGraph lifo = cleanup(d, CleanupOrder::Lifo).first;
    REQUIRE(display_isomorphic(by_id, fifo));
    REQUIRE(display_isomorphic(by_id, lifo));
  }
}

TEST_CASE("cleanup preserves compatibility") {
  TaxonTable tab;
  std::mt19937 rng(7);
  for (int it = 0; it < 40; ++it) {
    std::uniform_int_distribution<int> n_pick(5, 8), k_pick(2, 3);
    auto taxa = support::fresh_taxa(n_pick(rng), tab);
    // mix compatible and scrambled instances
    std::vector<PhyloTree> trees;
    if (it % 2 == 0) {
      trees = support::random_instance(taxa, k_pick(rng), 4, rng).trees;
    } else {
      for (int j = 0; j < k_pick(rng); ++j) {
        auto subset = taxa;
        std::shuffle(subset.begin(), subset.end(), rng);
        subset.resize(4 + (it % 3));
        std::sort(subset.begin(), subset.end());
        trees.push_back(support::random_binary_tree(subset, rng));
      }
    }
    bool before = brute_force_compatible(trees).has_value();
    auto [cleaned, trace] = cleanup(build_display(trees));
    bool after = true;
    if (cleaned.vertex_count() > 0) {
      std::vector<PhyloTree> survivors;
      for (auto& img : extract_trees(cleaned)) survivors.push_back(img.image);
      after = brute_force_compatible(survivors).has_value();
    }
    REQUIRE(before == after);
  }
}

TEST_CASE("cleanup never grows the graph or its treewidth") {
  TaxonTable tab;
  std::mt19937 rng(17);
  for (int it = 0; it < 40; ++it) {
    auto taxa = support::fresh_taxa(6, tab);
    std::vector<PhyloTree> trees;
    for (int j = 0; j < 2; ++j) {
      auto subset = taxa;
      std::shuffle(subset.begin(), subset.end(), rng);
      subset.resize(4);
      std::sort(subset.begin(), subset.end());
      trees.push_back(support::random_binary_tree(subset, rng));
    }
    DisplayGraph d = build_display(trees);
    auto [cleaned, trace] = cleanup(d);
    REQUIRE(cleaned.vertex_count() <= d.vertex_count());
    REQUIRE(cleaned.edge_count() <= d.edge_count());
    if (d.vertex_count() <= 12)
      REQUIRE(exact_treewidth(graph_of(cleaned)) <= exact_treewidth(graph_of(d)));
  }
}

TEST_SUITE_END();
