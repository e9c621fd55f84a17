// Microbenchmarks for the hot paths: Newick I/O, the treewidth-2 reduction,
// the exact-treewidth oracle, and the full supertree pipeline.

#include <benchmark/benchmark.h>

#include <random>

#include "sptw/families.hpp"
#include "sptw/newick.hpp"
#include "sptw/oracle.hpp"
#include "sptw/supertree.hpp"

namespace {

std::vector<sptw::TaxonId> fresh_taxa(int n, sptw::TaxonTable& taxa) {
  std::vector<sptw::TaxonId> out;
  for (int i = 0; i < n; ++i) out.push_back(taxa.intern("t" + std::to_string(i)));
  return out;
}

sptw::PhyloTree random_tree(const std::vector<sptw::TaxonId>& taxa, std::mt19937& rng) {
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}};
  std::vector<std::pair<int, sptw::TaxonId>> leaves{{1, taxa[0]}, {2, taxa[1]}, {3, taxa[2]}};
  int vertices = 4;
  for (std::size_t i = 3; i < taxa.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    auto [u, v] = edges[pick(rng)];
    edges.erase(std::find(edges.begin(), edges.end(), std::pair{u, v}));
    int mid = vertices++;
    int leaf = vertices++;
    edges.push_back({u, mid});
    edges.push_back({mid, v});
    edges.push_back({mid, leaf});
    leaves.emplace_back(leaf, taxa[i]);
  }
  return sptw::PhyloTree::from_edges(vertices, edges, leaves);
}

void BM_newick_roundtrip(benchmark::State& state) {
  sptw::TaxonTable taxa;
  std::mt19937 rng(1);
  sptw::PhyloTree tree = random_tree(fresh_taxa(static_cast<int>(state.range(0)), taxa), rng);
  for (auto _ : state) {
    std::string s = sptw::write_newick(tree, taxa);
    benchmark::DoNotOptimize(sptw::parse_newick(s, taxa));
  }
}
BENCHMARK(BM_newick_roundtrip)->Arg(16)->Arg(64)->Arg(256);

void BM_tw2_reduction(benchmark::State& state) {
  sptw::TaxonTable taxa;
  sptw::FamilySpec spec{sptw::FamilyKind::CompatibleTw3, static_cast<int>(state.range(0))};
  auto trees = sptw::generate(spec, taxa);
  sptw::SimpleGraph g = sptw::graph_of(sptw::build_display(trees));
  for (auto _ : state) benchmark::DoNotOptimize(sptw::is_tw_le_2(g));
}
BENCHMARK(BM_tw2_reduction)->Arg(3)->Arg(8)->Arg(16);

void BM_exact_treewidth(benchmark::State& state) {
  std::mt19937 rng(2);
  int n = static_cast<int>(state.range(0));
  sptw::SimpleGraph g;
  g.n = n;
  std::bernoulli_distribution flip(0.3);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (flip(rng)) g.edges.emplace_back(u, v);
  for (auto _ : state) benchmark::DoNotOptimize(sptw::exact_treewidth(g));
}
BENCHMARK(BM_exact_treewidth)->Arg(8)->Arg(12)->Arg(16);

void BM_supertree_pipeline(benchmark::State& state) {
  sptw::TaxonTable taxa;
  std::mt19937 rng(3);
  auto xs = fresh_taxa(static_cast<int>(state.range(0)), taxa);
  sptw::PhyloTree parent = random_tree(xs, rng);
  std::vector<sptw::PhyloTree> trees;
  for (int i = 0; i < 3; ++i) {
    auto subset = xs;
    std::shuffle(subset.begin(), subset.end(), rng);
    subset.resize(subset.size() - 2);
    std::sort(subset.begin(), subset.end());
    trees.push_back(sptw::restrict_to(parent, subset));
  }
  for (auto _ : state) {
    sptw::TaxonTable scratch = taxa;
    benchmark::DoNotOptimize(sptw::supertree_tw2(trees, scratch));
  }
}
BENCHMARK(BM_supertree_pipeline)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
