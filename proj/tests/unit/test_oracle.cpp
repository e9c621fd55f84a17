#include <random>
#include <set>

#include "doctest.h"
#include "sptw/display_graph.hpp"
#include "sptw/newick.hpp"
#include "sptw/oracle.hpp"
#include "support/support.hpp"

using namespace sptw;
using support::t;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("enumeration counts match the double factorial") {
  TaxonTable tab;
  CHECK(num_binary_topologies(4) == 3);
  CHECK(num_binary_topologies(5) == 15);
  CHECK(num_binary_topologies(6) == 105);
  CHECK(num_binary_topologies(7) == 945);
  CHECK(num_binary_topologies(8) == 10395);
  for (int n = 3; n <= 7; ++n) {
    TreeEnumeration en(support::fresh_taxa(n, tab, "n" + std::to_string(n) + "_"));
    std::uint64_t count = 0;
    while (en.next()) ++count;
    REQUIRE(count == num_binary_topologies(n));
  }
}

TEST_CASE("enumeration yields pairwise distinct trees") {
  TaxonTable tab;
  TreeEnumeration en(support::fresh_taxa(6, tab));
  std::set<std::string> canon;
  while (auto s = en.next()) {
    REQUIRE(s->is_binary());
    REQUIRE(canon.insert(support::canonical_form(*s)).second);
  }
  CHECK(canon.size() == 105);
}

TEST_CASE("enumeration guards its range") {
  TaxonTable tab;
  CHECK_THROWS_AS(TreeEnumeration(support::fresh_taxa(2, tab, "small")), std::invalid_argument);
  CHECK_THROWS_AS(TreeEnumeration(support::fresh_taxa(10, tab, "big")), std::invalid_argument);
}

TEST_CASE("brute force on the spec fixtures") {
  TaxonTable tab;
  auto conflict = std::vector{t("((a,b),(c,d));", tab), t("((a,c),(b,d));", tab)};
  CHECK_FALSE(brute_force_compatible(conflict).has_value());

  auto single = std::vector{t("((a,b),(c,d));", tab)};
  auto s1 = brute_force_compatible(single);
  REQUIRE(s1.has_value());
  CHECK(displays(*s1, single[0]));

  auto chain = std::vector{t("((a,b),(c,d));", tab), t("((c,d),(e,f));", tab)};
  auto s2 = brute_force_compatible(chain);
  REQUIRE(s2.has_value());
  CHECK(displays(*s2, chain[0]));
  CHECK(displays(*s2, chain[1]));
}

TEST_CASE("brute force is order independent") {
  TaxonTable tab;
  std::mt19937 rng(21);
  for (int it = 0; it < 10; ++it) {
    auto taxa = support::fresh_taxa(6, tab);
    std::vector<PhyloTree> trees;
    for (int j = 0; j < 3; ++j) {
      auto subset = taxa;
      std::shuffle(subset.begin(), subset.end(), rng);
      subset.resize(4);
      std::sort(subset.begin(), subset.end());
      trees.push_back(support::random_binary_tree(subset, rng));
    }
    bool base = brute_force_compatible(trees).has_value();
    for (int perm = 0; perm < 3; ++perm) {
      std::shuffle(trees.begin(), trees.end(), rng);
      REQUIRE(brute_force_compatible(trees).has_value() == base);
    }
  }
}

TEST_CASE("brute force enforces the taxa ceiling") {
  TaxonTable tab;
  std::mt19937 rng(23);
  auto big = support::random_binary_tree(support::fresh_taxa(10, tab), rng);
  CHECK_THROWS_AS(brute_force_compatible(std::vector{big}), std::invalid_argument);
}

TEST_CASE("exact treewidth on known graphs") {
  TaxonTable tab;
  SUBCASE("empty and single vertex") {
    CHECK(exact_treewidth(SimpleGraph{}) == -1);
    SimpleGraph one;
    one.n = 1;
    CHECK(exact_treewidth(one) == 0);
  }
  SUBCASE("trees have treewidth 1") {
    std::mt19937 rng(3);
    for (int it = 0; it < 20; ++it) {
      auto tree = support::random_binary_tree(support::fresh_taxa(8, tab), rng);
      SimpleGraph g;
      g.n = tree.vertex_count();
      g.edges = tree.edges();
      REQUIRE(exact_treewidth(g) == 1);
    }
  }
  SUBCASE("cycles have treewidth 2, K4 has 3") {
    for (int n : {3, 5, 9}) {
      SimpleGraph g;
      g.n = n;
      for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
      REQUIRE(exact_treewidth(g) == 2);
    }
    SimpleGraph k4;
    k4.n = 4;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) k4.edges.emplace_back(i, j);
    CHECK(exact_treewidth(k4) == 3);
  }
  SUBCASE("the conflicting-pair display graph has treewidth exactly 3") {
    DisplayGraph d =
        build_display(std::vector{t("((a,b),(c,d));", tab), t("((a,c),(b,d));", tab)});
    CHECK(exact_treewidth(graph_of(d)) == 3);
  }
  SUBCASE("size ceiling") {
    SimpleGraph g;
    g.n = 21;
    CHECK_THROWS_AS(exact_treewidth(g), std::invalid_argument);
  }
}

TEST_CASE("treewidth is minor-monotone under contractions") {
  std::mt19937 rng(29);
  for (int it = 0; it < 30; ++it) {
    SimpleGraph g = support::random_graph(8, 0.4, rng);
    if (g.edges.empty()) continue;
    int before = exact_treewidth(g);
    std::uniform_int_distribution<std::size_t> e_pick(0, g.edges.size() - 1);
    auto [u, v] = g.edges[e_pick(rng)];
    SimpleGraph h;
    h.n = g.n;
    std::set<std::pair<int, int>> es;
    for (auto [x, y] : g.edges) {
      if (x == v) x = u;
      if (y == v) y = u;
      if (x != y) es.insert(std::minmax(x, y));
    }
    h.edges.assign(es.begin(), es.end());
    REQUIRE(exact_treewidth(h) <= before);
  }
}

TEST_SUITE_END();
