#include <random>
#include <set>

#include "doctest.h"
#include "sptw/newick.hpp"
#include "sptw/oracle.hpp"
#include "sptw/tree.hpp"
#include "support/support.hpp"

using namespace sptw;
using support::t;

TEST_SUITE_BEGIN("phylo");

TEST_CASE("parse quartet") {
  TaxonTable tab;
  PhyloTree q = t("((a,b),(c,d));", tab);
  CHECK(q.vertex_count() == 6);
  CHECK(q.edge_count() == 5);
  CHECK(q.is_binary());
  CHECK(q.taxon_count() == 4);
}

TEST_CASE("parse star") {
  TaxonTable tab;
  PhyloTree s = t("(a,b,c);", tab);
  CHECK(s.vertex_count() == 4);
  CHECK(s.is_binary());  // one internal vertex of degree 3
  int internals = 0;
  for (int v = 0; v < s.vertex_count(); ++v)
    if (!s.is_leaf(v)) {
      ++internals;
      CHECK(s.degree(v) == 3);
    }
  CHECK(internals == 1);
}

TEST_CASE("parse errors") {
  TaxonTable tab;
  CHECK_THROWS_AS(t("((a,b),(a,c));", tab), ParseError);  // duplicate label
  CHECK_THROWS_AS(t("((a,b);", tab), ParseError);
  CHECK_THROWS_AS(t(";", tab), ParseError);
  CHECK_THROWS_AS(t("(a,b),c;", tab), ParseError);
  CHECK_THROWS_AS(t("();", tab), ParseError);
  CHECK_THROWS_AS(t("(a,'b);", tab), ParseError);
}

TEST_CASE("parse tolerates lengths, internal labels, quotes, rooted input") {
  TaxonTable tab;
  PhyloTree a = t("((a:1.5,b:2)x:0.1,(c:1,d:0.5)y);", tab);
  PhyloTree b = t("((a,b),(c,d));", tab);
  CHECK(splits(a) == splits(b));  // root suppressed, labels/lengths dropped

  PhyloTree q = t("('taxon one',b,'it''s');", tab);
  CHECK(q.taxon_count() == 3);
  CHECK(tab.find("taxon one").has_value());
  CHECK(tab.find("it's").has_value());

  PhyloTree unary = t("((a));", tab);
  CHECK(unary.vertex_count() == 1);
  CHECK(unary.taxon_count() == 1);
}

TEST_CASE("write round-trips the degenerate trees") {
  TaxonTable tab;
  CHECK(write_newick(t("a;", tab), tab) == "a;");
  CHECK(write_newick(t("(b,a);", tab), tab) == "(a,b);");
  PhyloTree star = t("(c,a,b);", tab);
  CHECK(support::label_isomorphic(parse_newick(write_newick(star, tab), tab), star));
  PhyloTree q = t("((a,b),(c,d));", tab);
  CHECK(support::label_isomorphic(parse_newick(write_newick(q, tab), tab), q));
}

TEST_CASE("newick round-trip on 1000 random trees") {
  TaxonTable tab;
  std::mt19937 rng(20250809);
  for (int it = 0; it < 1000; ++it) {
    std::uniform_int_distribution<int> size_pick(2, 20);
    auto taxa = support::fresh_taxa(size_pick(rng), tab);
    PhyloTree tree = support::random_binary_tree(taxa, rng);
    PhyloTree back = parse_newick(write_newick(tree, tab), tab);
    REQUIRE(support::label_isomorphic(tree, back));
  }
}

TEST_CASE("restrict examples") {
  TaxonTable tab;
  PhyloTree q = t("((a,b),(c,d));", tab);
  SUBCASE("three-taxon restriction is the star") {
    PhyloTree r = restrict_to(q, std::vector{*tab.find("a"), *tab.find("b"), *tab.find("c")});
    CHECK(support::label_isomorphic(r, t("(a,b,c);", tab)));
  }
  SUBCASE("caterpillar restriction drops the middle leaf") {
    PhyloTree cat = t("((a,b),c,(d,e));", tab);
    std::vector<TaxonId> keep{*tab.find("a"), *tab.find("b"), *tab.find("d"), *tab.find("e")};
    PhyloTree r = restrict_to(cat, keep);
    // four-point check on the original tree, independently of restrict_to
    Quartet expect = quartet_topology(cat, keep[0], keep[1], keep[2], keep[3]);
    CHECK(expect == Quartet::make(keep[0], keep[1], keep[2], keep[3]));  // ab|de
    CHECK(support::label_isomorphic(r, t("((a,b),(d,e));", tab)));
  }
  SUBCASE("identity restriction") {
    CHECK(support::label_isomorphic(restrict_to(q, q.taxa()), q));
  }
  SUBCASE("small restrictions") {
    PhyloTree leaf = restrict_to(q, std::vector{*tab.find("a")});
    CHECK(leaf.taxon_count() == 1);
    PhyloTree edge = restrict_to(q, std::vector{*tab.find("a"), *tab.find("c")});
    CHECK(edge.vertex_count() == 2);
    CHECK(edge.edge_count() == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(restrict_to(q, std::vector<TaxonId>{}), std::invalid_argument);
    CHECK_THROWS_AS(restrict_to(q, std::vector{tab.intern("zzz")}), std::invalid_argument);
  }
}

TEST_CASE("restriction composes") {
  TaxonTable tab;
  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    auto taxa = support::fresh_taxa(10, tab);
    PhyloTree tree = support::random_binary_tree(taxa, rng);
    std::shuffle(taxa.begin(), taxa.end(), rng);
    std::vector<TaxonId> larger(taxa.begin(), taxa.begin() + 7);
    std::vector<TaxonId> smaller(taxa.begin(), taxa.begin() + 4);
    std::sort(larger.begin(), larger.end());
    std::sort(smaller.begin(), smaller.end());
    PhyloTree once = restrict_to(tree, smaller);
    PhyloTree twice = restrict_to(restrict_to(tree, larger), smaller);
    REQUIRE(support::label_isomorphic(once, twice));
  }
}

TEST_CASE("splits") {
  TaxonTable tab;
  PhyloTree q = t("((a,b),(c,d));", tab);
  auto is_trivial = [](const Split& s) { return s.side_a.size() == 1 || s.side_b.size() == 1; };

  auto sq = splits(q);
  CHECK(sq.size() == 5);  // 2n-3
  int nontrivial = 0;
  for (const auto& s : sq)
    if (!is_trivial(s)) ++nontrivial;
  CHECK(nontrivial == 1);

  auto ss = splits(t("(a,b,c);", tab));
  CHECK(ss.size() == 3);
  for (const auto& s : ss) CHECK(is_trivial(s));

  auto sb = splits(t("((a,b),(c,d),(e,f));", tab));
  CHECK(sb.size() == 9);
  nontrivial = 0;
  for (const auto& s : sb)
    if (!is_trivial(s)) ++nontrivial;
  CHECK(nontrivial == 3);
}

TEST_CASE("quartet sets") {
  TaxonTable tab;
  PhyloTree q = t("((a,b),(c,d));", tab);
  auto qs = quartet_set(q);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0] == Quartet::make(*tab.find("a"), *tab.find("b"), *tab.find("c"), *tab.find("d")));

  PhyloTree cat = t("((a,b),c,(d,e));", tab);
  auto qc = quartet_set(cat);
  TaxonId a = *tab.find("a"), b = *tab.find("b"), c = *tab.find("c"), d = *tab.find("d"),
          e = *tab.find("e");
  std::vector<Quartet> expect{Quartet::make(a, b, c, d), Quartet::make(a, b, c, e),
                              Quartet::make(a, b, d, e), Quartet::make(a, c, d, e),
                              Quartet::make(b, c, d, e)};
  std::sort(expect.begin(), expect.end());
  CHECK(qc == expect);

  std::mt19937 rng(3);
  PhyloTree six = support::random_binary_tree(support::fresh_taxa(6, tab), rng);
  CHECK(quartet_set(six).size() == 15);  // C(6,4)
}

TEST_CASE("displays") {
  TaxonTable tab;
  PhyloTree q = t("((a,b),(c,d));", tab);
  CHECK(displays(q, q));
  PhyloTree six = t("((a,b),(c,d),(e,f));", tab);
  CHECK(displays(six, q));
  PhyloTree conflict = t("((a,c),(b,d));", tab);
  CHECK_FALSE(displays(q, conflict));
  PhyloTree other = t("((a,b),(c,x));", tab);
  CHECK_THROWS_AS(displays(q, other), std::invalid_argument);
}

TEST_CASE("displays agrees with quartet containment on all small trees") {
  TaxonTable tab;
  auto taxa5 = support::fresh_taxa(5, tab);
  TreeEnumeration outer(taxa5);
  while (auto s = outer.next()) {
    // all 4- and 5-subsets, all topologies on them
    std::vector<std::vector<TaxonId>> subsets;
    for (int skip = -1; skip < 5; ++skip) {
      std::vector<TaxonId> xs;
      for (int i = 0; i < 5; ++i)
        if (i != skip) xs.push_back(taxa5[i]);
      subsets.push_back(xs);
    }
    for (const auto& xs : subsets) {
      TreeEnumeration inner(xs);
      while (auto cand = inner.next()) {
        bool by_restriction = displays(*s, *cand);
        auto sub = quartet_set(*cand);
        auto super = quartet_set(restrict_to(*s, cand->taxa()));
        bool by_quartets = std::includes(super.begin(), super.end(), sub.begin(), sub.end());
        REQUIRE(by_restriction == by_quartets);
      }
    }
  }
}

TEST_CASE("split sets determine the tree") {
  TaxonTable tab;
  auto taxa6 = support::fresh_taxa(6, tab);
  std::vector<PhyloTree> trees;
  TreeEnumeration en(taxa6);
  while (auto s = en.next()) trees.push_back(*s);
  REQUIRE(trees.size() == 105);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      bool same_splits = splits(trees[i]) == splits(trees[j]);
      bool isomorphic = support::label_isomorphic(trees[i], trees[j]);
      REQUIRE(same_splits == isomorphic);
      REQUIRE_FALSE(same_splits);  // enumeration never repeats
    }

  // sampled check at n = 7
  std::mt19937 rng(11);
  auto taxa7 = support::fresh_taxa(7, tab);
  for (int it = 0; it < 200; ++it) {
    PhyloTree x = support::random_binary_tree(taxa7, rng);
    PhyloTree y = support::random_binary_tree(taxa7, rng);
    REQUIRE((splits(x) == splits(y)) == support::label_isomorphic(x, y));
  }
}

TEST_SUITE_END();
