// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#include "homcount/embed.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"

namespace homcount {
namespace {

const std::filesystem::path kData = HOMCOUNT_TEST_DATA;

DatasetBundle random_featured_bundle(std::uint64_t seed, std::size_t count, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DatasetBundle b;
  b.name = "R";
  b.features.emplace();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 3 + rng() % 8;
    b.graphs.push_back(testing::random_graph(rng, n, 0.4));
    FeatureMatrix x(n, dim);
    for (double& v : x.data()) v = unit(rng);
    b.features->push_back(std::move(x));
    b.labels.push_back(static_cast<int>(i % 2));
  }
  return b;
}

TEST(Embed, Dimensions) {
  const auto csl = gen_csl({}, 1);
  EXPECT_EQ(embed(csl, {FamilySpec::trees(6), {}, {}}).cols(), 13u);
  const auto m = embed(csl, {FamilySpec::cycles(8), {}, {}});
  EXPECT_EQ(m.cols(), 7u);
  EXPECT_EQ(m.rows(), 150u);
  EXPECT_EQ(m.column_meta.front().name(), "C2@one");
  EXPECT_EQ(m.labels, csl.labels);
}

TEST(Embed, DefaultPhisFollowLabelColumns) {
  const auto toy = parse_tud(kData / "TOY", "TOY");
  const auto phis = default_phis(toy);
  ASSERT_EQ(phis.size(), 4u);
  EXPECT_EQ(phis[3].id(), "x2");
  const auto m = embed(toy, {FamilySpec::trees(6), {}, {}});
  EXPECT_EQ(m.cols(), 52u);
  // Triangle, labels (0, 1, 0): hom(edge; x0) = sum over ordered edges of
  // x0(u) x0(v) = 2 for the single 0-0 edge.
  std::size_t col = 0;
  while (m.column_meta[col].name() != "T2_0@x0") ++col;
  EXPECT_EQ(m.values(0, col), 2.0);
}

TEST(Embed, CoordinatePhiNeedsFeatures) {
  const auto csl = gen_csl({}, 1);
  EXPECT_THROW(embed(csl, {FamilySpec::trees(4), {Phi::coordinate(0)}, {}}), ConfigError);
  const auto r = random_featured_bundle(3, 4, 2);
  EXPECT_THROW(embed(r, {FamilySpec::trees(4), {Phi::coordinate(2)}, {}}), ConfigError);
  EXPECT_NO_THROW(embed(r, {FamilySpec::trees(4), {Phi::coordinate(1)}, {}}));
}

TEST(Embed, PermutationInvariant) {
  auto b = random_featured_bundle(17, 12, 3);
  DatasetBundle p = b;
  Rng rng(99);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto perm = rng.permutation(b.graphs[i].num_vertices());
    auto fg = permute_featured(b.featured(i), perm);
    p.graphs[i] = fg.graph();
    (*p.features)[i] = fg.features();
  }
  const EmbedConfig cfg{FamilySpec::trees(5), {Phi::constant_one(), Phi::coordinate(0), Phi::coordinate(2)}, {}};
  const auto a = embed(b, cfg), c = embed(p, cfg);
  ASSERT_EQ(a.cols(), c.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double x = a.values(r, k), y = c.values(r, k);
      EXPECT_LE(std::abs(x - y), 1e-12 * std::max(1.0, std::abs(x)));
    }
  }
  // Integer columns agree exactly.
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(a.values(r, k), c.values(r, k));
  }
}

TEST(Embed, ThreadCountDoesNotChangeResult) {
  const auto b = random_featured_bundle(5, 40, 2);
  EmbedConfig one{FamilySpec::trees(6), {Phi::constant_one(), Phi::coordinate(1)}, {}};
  one.options.threads = 1;
  EmbedConfig many = one;
  many.options.threads = 7;
  EXPECT_EQ(embed(b, one).values, embed(b, many).values);
}

TEST(Embed, DensityInUnitInterval) {
  const auto b = random_featured_bundle(8, 20, 2);
  EmbedConfig cfg{FamilySpec::cycles(6), {Phi::constant_one(), Phi::coordinate(0)}, {}};
  cfg.options.density = true;
  const auto m = embed(b, cfg);
  for (double v : m.values.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_TRUE(m.column_meta[0].density);
}

TEST(Embed, Log1pAppliedLast) {
  const auto csl = gen_csl({}, 2);
  EmbedConfig cfg{FamilySpec::cycles(4), {}, {}};
  const auto raw = embed(csl, cfg);
  cfg.options.log1p = true;
  const auto lg = embed(csl, cfg);
  for (std::size_t i = 0; i < raw.values.data().size(); ++i) {
    EXPECT_DOUBLE_EQ(lg.values.data()[i], std::log1p(raw.values.data()[i]));
  }
}

TEST(Embed, PromotionFlagged) {
  DatasetBundle b;
  b.name = "K";
  b.graphs = {complete_graph(60)};
  b.labels = {0};
  std::vector<Pattern> ps{cycle_pattern(3), cycle_pattern(40)};
  const auto m = embed(b, ps, {Phi::constant_one()});
  EXPECT_FALSE(m.column_meta[0].promoted);
  EXPECT_TRUE(m.column_meta[1].promoted);
}

TEST(Embed, StarsSeeOnlyDegrees) {
  DatasetBundle b;
  b.name = "W";
  b.graphs = {cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))};
  b.labels = {0, 1};
  const auto stars = embed(b, {FamilySpec{FamilySpec::Kind::stars, 6, {}, {}}, {}, {}});
  for (std::size_t c = 0; c < stars.cols(); ++c) EXPECT_EQ(stars.values(0, c), stars.values(1, c));
  const auto cycles = embed(b, {FamilySpec::cycles(3), {}, {}});
  EXPECT_NE(cycles.values(0, 1), cycles.values(1, 1));
}

TEST(Embed, EmptyPatternSet) {
  const auto csl = gen_csl({}, 1);
  const auto m = embed(csl, std::span<const Pattern>{}, {Phi::constant_one()});
  EXPECT_EQ(m.rows(), 150u);
  EXPECT_EQ(m.cols(), 0u);
}

TEST(Family, ParseAndPrint) {
  EXPECT_EQ(parse_family("trees:6").patterns().size(), 13u);
  EXPECT_EQ(parse_family("cycles:8").to_string(), "cycles:8");
  EXPECT_THROW(parse_family("trees"), ConfigError);
  EXPECT_THROW(parse_family("blobs:3"), ConfigError);
  EXPECT_THROW(parse_family("trees:6x"), ConfigError);
  EXPECT_EQ(parse_phi("x12").id(), "x12");
  EXPECT_THROW(parse_phi("y"), ConfigError);
}

TEST(Standardizer, ConstantColumnBecomesZero) {
  Matrix x(4, 2, {0.1, 1.0, 0.1, 2.0, 0.1, 3.0, 0.1, 4.0});
  const auto s = fit_standardizer(x);
  EXPECT_EQ(s.stddev[0], 1.0);
  const auto y = apply_standardizer(x, s);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(y(r, 0), 0.0);
}

TEST(Standardizer, FitSetHasZeroMeanUnitStd) {
  std::mt19937_64 rng(12);
  std::lognormal_distribution<double> dist(3.0, 2.0);
  Matrix x(57, 5);
  for (double& v : x.data()) v = dist(rng);
  const auto y = apply_standardizer(x, fit_standardizer(x));
  for (std::size_t c = 0; c < 5; ++c) {
    double mu = 0.0, ss = 0.0;
    for (std::size_t r = 0; r < 57; ++r) mu += y(r, c);
    mu /= 57.0;
    for (std::size_t r = 0; r < 57; ++r) ss += (y(r, c) - mu) * (y(r, c) - mu);
    EXPECT_LT(std::abs(mu), 1e-9);
    EXPECT_NEAR(std::sqrt(ss / 57.0), 1.0, 1e-9);
  }
}

TEST(Standardizer, Errors) {
  EXPECT_THROW(fit_standardizer(Matrix(0, 3)), DomainError);
  const auto s = fit_standardizer(Matrix(2, 2, 1.0));
  EXPECT_THROW(apply_standardizer(Matrix(2, 3), s), DimensionError);
}

TEST(EmbeddingCsv, RoundTrip) {
  const auto b = random_featured_bundle(21, 9, 2);
  const auto m = embed(b, {FamilySpec::trees(4), {Phi::constant_one(), Phi::coordinate(1)}, {}});
  std::stringstream ss;
  write_embedding_csv(m, ss);
  const auto back = read_embedding_csv(ss);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.labels, m.labels);
  ASSERT_EQ(back.column_meta.size(), m.column_meta.size());
  for (std::size_t c = 0; c < m.cols(); ++c) EXPECT_EQ(back.column_meta[c].name(), m.column_meta[c].name());
}

TEST(EmbeddingCsv, BadRowReportsLine) {
  std::istringstream in("graph_id,label,a@one\n0,1,2.5\n1,0\n");
  try {
    read_embedding_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

}  // namespace
}  // namespace homcount
