// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#include "homcount/eval.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

namespace homcount {
namespace {

std::vector<int> repeat_labels(std::size_t classes, std::size_t each) {
  std::vector<int> y;
  for (std::size_t c = 0; c < classes; ++c) y.insert(y.end(), each, static_cast<int>(c));
  return y;
}

TEST(Kfold, PartitionAndStratification) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t classes = 2 + rng() % 5, k = 2 + rng() % 9;
    std::vector<int> y;
    for (std::size_t c = 0; c < classes; ++c) y.insert(y.end(), k + rng() % 30, static_cast<int>(c));
    std::shuffle(y.begin(), y.end(), rng);
    const auto folds = stratified_kfold(y, k, rng());
    ASSERT_EQ(folds.size(), k);
    std::vector<int> seen(y.size(), 0);
    for (const auto& f : folds) {
      EXPECT_EQ(f.train.size() + f.test.size(), y.size());
      for (std::size_t i : f.test) ++seen[i];
      std::vector<bool> in_test(y.size(), false);
      for (std::size_t i : f.test) in_test[i] = true;
      for (std::size_t i : f.train) EXPECT_FALSE(in_test[i]);
      std::map<int, std::size_t> per;
      for (std::size_t i : f.test) ++per[y[i]];
      for (std::size_t c = 0; c < classes; ++c) {
        const auto total = static_cast<double>(std::count(y.begin(), y.end(), static_cast<int>(c)));
        EXPECT_LE(std::abs(static_cast<double>(per[static_cast<int>(c)]) - total / static_cast<double>(k)), 1.0);
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(Kfold, CslShape) {
  const auto y = repeat_labels(10, 15);
  for (const auto& f : stratified_kfold(y, 10, 3)) {
    EXPECT_EQ(f.test.size(), 15u);
    std::map<int, int> per;
    for (std::size_t i : f.test) ++per[y[i]];
    for (auto [c, n] : per) {
      EXPECT_GE(n, 1);
      EXPECT_LE(n, 2);
    }
  }
}

TEST(Kfold, BinaryHalves) {
  const auto y = repeat_labels(2, 50);
  for (const auto& f : stratified_kfold(y, 2, 9)) {
    EXPECT_EQ(std::count_if(f.test.begin(), f.test.end(), [&](std::size_t i) { return y[i] == 1; }), 25);
  }
}

TEST(Kfold, DeterministicAndErrors) {
  const auto y = repeat_labels(3, 12);
  const auto a = stratified_kfold(y, 4, 77), b = stratified_kfold(y, 4, 77), c = stratified_kfold(y, 4, 78);
  for (std::size_t f = 0; f < 4; ++f) EXPECT_EQ(a[f].test, b[f].test);
  bool differs = false;
  for (std::size_t f = 0; f < 4; ++f) differs = differs || a[f].test != c[f].test;
  EXPECT_TRUE(differs);
  EXPECT_THROW(stratified_kfold(y, 1, 0), ParameterError);
  EXPECT_THROW(stratified_kfold(y, 37, 0), ParameterError);
}

TEST(Kfold, SmallClassFallsBack) {
  std::vector<int> y{0, 0, 0, 0, 0, 0, 1, 1};
  const auto folds = stratified_kfold(y, 4, 1);
  std::size_t total = 0;
  for (const auto& f : folds) total += f.test.size();
  EXPECT_EQ(total, y.size());
}

TEST(Classifier, SeparableToy) {
  Matrix x(6, 2, {0, 0, 0.2, 0.1, 0.1, 0.3, 2, 2, 2.2, 1.9, 1.8, 2.1});
  std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto m = train_classifier(x, y, 2);
  EXPECT_EQ(predict(m, x), y);
}

TEST(Classifier, NoSignalGivesMajority) {
  Matrix x(10, 3, 0.0);
  std::vector<int> y{0, 1, 1, 1, 2, 1, 0, 1, 2, 1};
  const auto m = train_classifier(x, y, 3);
  EXPECT_DOUBLE_EQ(accuracy(predict(m, x), y), 0.6);
}

TEST(Classifier, SolversReachSameOptimum) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix x(40, 3);
  std::vector<int> y;
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = nd(rng);
    y.push_back(x(i, 0) + 0.5 * nd(rng) > 0 ? 1 : (x(i, 1) > 0.5 ? 2 : 0));
  }
  ClassifierHyper lb;
  lb.l2 = 0.1;
  ClassifierHyper gd = lb;
  gd.solver = ClassifierHyper::Solver::gradient_descent;
  gd.lr = 0.5;
  gd.epochs = 20000;
  const auto a = train_classifier(x, y, 3, lb), b = train_classifier(x, y, 3, gd);
  EXPECT_LT(a.iterations, lb.epochs);
  for (std::size_t t = 0; t < a.weights.size(); ++t) EXPECT_NEAR(a.weights[t], b.weights[t], 1e-6);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a.bias[c], b.bias[c], 1e-6);
  EXPECT_EQ(to_json(gd)["solver"], "gradient_descent");
}

TEST(Classifier, DimensionErrors) {
  Matrix x(3, 2);
  std::vector<int> y{0, 1};
  EXPECT_THROW(train_classifier(x, y, 2), DimensionError);
  std::vector<int> y3{0, 1, 0};
  const auto m = train_classifier(x, y3, 2);
  EXPECT_THROW(predict(m, Matrix(1, 3)), DimensionError);
}

TEST(CrossValidate, CslCyclesPerfect) {
  const auto csl = gen_csl({}, 7);
  const auto r = cross_validate(csl, {FamilySpec::cycles(8), {}, {}}, {}, {10, 2, 7, 0});
  ASSERT_EQ(r.fold_accuracies.size(), 20u);
  EXPECT_EQ(r.mean, 1.0);
  EXPECT_EQ(r.stddev, 0.0);
  EXPECT_EQ(r.config["embedding"]["family"], "cycles:8");
}

TEST(CrossValidate, DeterministicAcrossThreadCounts) {
  const auto b = gen_bipartite_er({60, 20, 30, 0.2, 0.1}, 3);
  const EmbedConfig cfg{FamilySpec::trees(4), {}, {}};
  const auto a = cross_validate(b, cfg, {}, {5, 3, 11, 1});
  const auto c = cross_validate(b, cfg, {}, {5, 3, 11, 6});
  EXPECT_EQ(a.fold_accuracies, c.fold_accuracies);
  EXPECT_EQ(a.mean, c.mean);
  for (double acc : a.fold_accuracies) {
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
  EXPECT_GE(a.stddev, 0.0);
}

TEST(CrossValidate, StandardizerUsesTrainRowsOnly) {
  // Each fold's scaler matches a hand recomputation over its train rows.
  const auto b = gen_bipartite_er({40, 20, 30, 0.2, 0.1}, 8);
  const auto m = embed(b, {FamilySpec::cycles(5), {}, {}});
  for (const auto& f : stratified_kfold(m.labels, 4, 5)) {
    const auto train = select_rows(m, f.train);
    const auto s = fit_standardizer(train.values);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double mu = 0.0;
      for (std::size_t i : f.train) mu += m.values(i, c);
      mu /= static_cast<double>(f.train.size());
      EXPECT_NEAR(s.mean[c], mu, 1e-9 * std::max(1.0, std::abs(mu)));
    }
    const auto full = fit_standardizer(m.values);
    EXPECT_NE(full.mean, s.mean);
  }
}

TEST(Bench, EmptyPatternSet) {
  const auto csl = gen_csl({}, 1);
  FamilySpec none{FamilySpec::Kind::custom, 0, {}, "none"};
  const auto r = bench_runtime(csl, {none, {}, {}}, {}, {10, 1, 0, 0});
  EXPECT_EQ(r.cols, 0u);
  EXPECT_LT(r.embed_seconds, 0.5);
  EXPECT_GE(r.total_seconds, r.embed_seconds);
}

}  // namespace
}  // namespace homcount
