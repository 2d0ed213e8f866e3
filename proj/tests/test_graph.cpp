// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#include "homcount/graph.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "homcount/hom.hpp"
#include "homcount/pattern.hpp"
#include "oracle.hpp"

namespace homcount {
namespace {

using testing::naive_hom;
using testing::random_graph;
using testing::random_permutation;

TEST(BuildGraph, Triangle) {
  auto g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(BuildGraph, SingleVertex) {
  auto g = build_graph(1, {});
  EXPECT_EQ(g.num_vertices(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(BuildGraph, ParallelEdgesCollapse) {
  auto g = build_graph(3, {{0, 1}, {1, 0}});
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(BuildGraph, Rejects) {
  EXPECT_THROW(build_graph(2, {{1, 1}}), DomainError);
  EXPECT_THROW(build_graph(2, {{0, 2}}), IndexError);
}

TEST(BuildGraph, InvariantsHoldOnRandomInput) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto g = random_graph(rng, 12, 0.3);
    std::size_t sum = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      sum += g.degree(v);
      for (Vertex u : g.neighbors(v)) {
        EXPECT_NE(u, v);
        EXPECT_TRUE(g.has_edge(u, v));
      }
    }
    EXPECT_EQ(sum, 2 * g.num_edges());
  }
}

TEST(Permute, CompleteGraphIsClosed) {
  auto k3 = complete_graph(3);
  EXPECT_EQ(permute(k3, VertexPermutation({2, 0, 1})), k3);
}

TEST(Permute, PathReversal) {
  auto p = path_graph(3);
  EXPECT_EQ(permute(p, VertexPermutation({2, 1, 0})), p);
}

TEST(Permute, LengthMismatch) {
  EXPECT_THROW(permute(path_graph(3), VertexPermutation({1, 0})), DimensionError);
}

TEST(Permute, NotAPermutation) { EXPECT_THROW(VertexPermutation({0, 0}), DomainError); }

TEST(Permute, DegreeSequenceAndInverse) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto g = random_graph(rng, 6, 0.5);
    auto s = random_permutation(rng, 6);
    auto pg = permute(g, s);
    EXPECT_EQ(degree_sequence(pg), degree_sequence(g));
    EXPECT_EQ(permute(pg, s.inverse()), g);
  }
}

TEST(PermuteFeatured, IdentityAndSwap) {
  auto p2 = path_graph(2);
  FeaturedGraph fg(p2, FeatureMatrix(2, 1, {0.0, 1.0}));
  EXPECT_EQ(permute_featured(fg, VertexPermutation::identity(2)), fg);
  auto swapped = permute_featured(fg, VertexPermutation({1, 0}));
  EXPECT_EQ(swapped.features()(0, 0), 1.0);
  EXPECT_EQ(swapped.features()(1, 0), 0.0);
}

TEST(PermuteFeatured, WeightedTreeHomUnchanged) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto trees = enumerate_trees(4);
  for (int t = 0; t < 20; ++t) {
    auto g = random_graph(rng, 7, 0.4);
    FeatureMatrix x(7, 2);
    for (std::size_t r = 0; r < 7; ++r) {
      x(r, 0) = unit(rng);
      x(r, 1) = unit(rng);
    }
    FeaturedGraph fg(g, x);
    auto pfg = permute_featured(fg, random_permutation(rng, 7));
    for (const auto& phi : {Phi::coordinate(0), Phi::coordinate(1), Phi::affine({0.5, 2.0}, 0.1)}) {
      for (const auto& tree : trees) {
        const double a = hom(tree, fg, phi).to_double();
        const double b = hom(tree, pfg, phi).to_double();
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST(FeaturedGraph, RejectsOutOfRange) {
  EXPECT_THROW(FeaturedGraph(path_graph(2), FeatureMatrix(2, 1, {0.5, 1.5})), DomainError);
  EXPECT_THROW(FeaturedGraph(path_graph(2), FeatureMatrix(3, 1, 0.0)), DimensionError);
  EXPECT_THROW(FeaturedGraph::weighted(path_graph(2), {1.0, -1.0}), DomainError);
}

TEST(Bipartite, Basics) {
  EXPECT_TRUE(is_bipartite(cycle_graph(6)));
  EXPECT_FALSE(is_bipartite(complete_graph(3)));
  auto coloring = two_coloring(cycle_graph(6));
  ASSERT_TRUE(coloring);
  for (auto [u, v] : cycle_graph(6).edges()) EXPECT_NE((*coloring)[u], (*coloring)[v]);
}

TEST(Bipartite, CslSkipTwoHasTriangle) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < 41; ++i) {
    es.emplace_back(i, (i + 1) % 41);
    es.emplace_back(i, (i + 2) % 41);
  }
  auto g = Graph::from_edges(41, es);
  EXPECT_TRUE(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
  EXPECT_FALSE(is_bipartite(g));
}

// Bipartite iff no closed walk of odd length, checked via C_k counts.
TEST(Bipartite, AgreesWithOddCycleHoms) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    auto g = random_graph(rng, 2 + t % 8, 0.35);
    bool odd_free = true;
    for (std::size_t k = 3; k <= 9; k += 2) {
      if (hom_cycle(k, g).count() != 0) odd_free = false;
    }
    EXPECT_EQ(is_bipartite(g), odd_free);
  }
}

TEST(DegreeSequence, Examples) {
  EXPECT_EQ(degree_sequence(star_graph(3)), (std::vector<std::size_t>{1, 1, 1, 3}));
  EXPECT_EQ(degree_sequence(complete_graph(3)), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(TwinReduce, StarLeavesMerge) {
  auto fg = FeaturedGraph::weighted(star_graph(2), {1.0, 1.0, 1.0});
  auto r = twin_reduce(fg);
  EXPECT_EQ(r.graph(), path_graph(2));
  EXPECT_EQ(r.scalar_weights(), (std::vector<double>{1.0, 2.0}));
  // hom preserved, checked by literal enumeration on both sides.
  for (const auto& f : {path_graph(2), path_graph(3), star_graph(3)}) {
    EXPECT_EQ(naive_hom(f, fg.graph(), fg.scalar_weights()), naive_hom(f, r.graph(), r.scalar_weights()));
  }
}

TEST(TwinReduce, TriangleHasNoOpenTwins) {
  // Every pair of K3 vertices has distinct open neighborhoods.
  auto k3 = complete_graph(3);
  for (Vertex u = 0; u < 3; ++u) {
    for (Vertex v = u + 1; v < 3; ++v) {
      auto a = k3.neighbors(u), b = k3.neighbors(v);
      EXPECT_FALSE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
  }
  auto fg = FeaturedGraph::weighted(k3, {1.0, 1.0, 1.0});
  EXPECT_EQ(twin_reduce(fg), fg);
}

TEST(TwinReduce, DropsZeroWeightVertex) {
  auto g = build_graph(3, {{0, 1}});
  auto r = twin_reduce(FeaturedGraph::weighted(g, {1.0, 2.0, 0.0}));
  EXPECT_EQ(r.graph().num_vertices(), 2u);
  EXPECT_EQ(r.scalar_weights(), (std::vector<double>{1.0, 2.0}));
}

TEST(TwinReduce, RejectsVectorFeatures) {
  FeaturedGraph fg(path_graph(2), FeatureMatrix(2, 2, 0.5));
  EXPECT_THROW(twin_reduce(fg), UnsupportedError);
}

TEST(TwinReduce, IsIdempotentAndTwinFree) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> wd(0, 3);
  for (int t = 0; t < 30; ++t) {
    auto g = random_graph(rng, 9, 0.3);
    std::vector<double> w(9);
    for (auto& x : w) x = wd(rng);
    auto r = twin_reduce(FeaturedGraph::weighted(g, w));
    EXPECT_EQ(twin_reduce(r), r);
    for (double x : r.scalar_weights()) EXPECT_GT(x, 0.0);
  }
}

}  // namespace
}  // namespace homcount
