// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "homcount/dataset.hpp"
#include "homcount/embed.hpp"
#include "homcount/errors.hpp"
#include "homcount/random.hpp"
#include "json.hpp"

namespace homcount {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffles each class with a seeded generator, then deals the members
/// round-robin into k folds with one counter shared across classes, so fold
/// sizes and per-class counts differ by at most one. Classes smaller than k
/// are dealt the same way and reported on stderr.
inline std::vector<Fold> stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("stratified_kfold: k must be at least 2");
  if (k > labels.size()) {
    throw ParameterError("stratified_kfold: k = " + std::to_string(k) + " exceeds " + std::to_string(labels.size()) +
                         " samples");
  }
  int max_label = -1;
  for (int y : labels) {
    if (y < 0) throw ParameterError("stratified_kfold: negative label");
    max_label = std::max(max_label, y);
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t deal = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& m = members[c];
    if (!m.empty() && m.size() < k) {
      std::cerr << "warning: class " << c << " has " << m.size() << " members, fewer than k = " << k << '\n';
    }
    rng.shuffle(m);
    for (std::size_t i : m) fold_of[i] = deal++ % k;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

struct ClassifierHyper {
  enum class Solver { lbfgs, gradient_descent };
  double l2 = 1e-5;
  /// Step size; gradient descent only.
  double lr = 0.1;
  /// Iteration cap for either solver.
  std::size_t epochs = 500;
  Solver solver = Solver::lbfgs;
  /// L-BFGS stops once the largest gradient entry falls below this.
  double tol = 1e-10;
};

/// Multinomial logistic regression: weights (classes x features) and biases.
struct LogisticModel {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  /// Iterations the solver actually ran.
  std::size_t iterations = 0;

  /// Class scores of one sample.
  std::vector<double> logits(std::span<const double> x) const {
    std::vector<double> z(bias);
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double* w = weights.data() + c * num_features;
      for (std::size_t j = 0; j < num_features; ++j) z[c] += w[j] * x[j];
    }
    return z;
  }
};

namespace detail {

/// Mean cross-entropy plus (l2 / 2) |W|^2 over parameters laid out as
/// [W row-major, b]. Writes the gradient into `g`.
class LogisticObjective {
 public:
  LogisticObjective(const Matrix& x, std::span<const int> y, std::size_t k, double l2)
      : x_(x), y_(y), k_(k), d_(x.cols()), l2_(l2) {}

  std::size_t size() const { return k_ * d_ + k_; }

  double operator()(const std::vector<double>& theta, std::vector<double>& g) const {
    const std::size_t n = x_.rows(), wsize = k_ * d_;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::fill(g.begin(), g.end(), 0.0);
    double loss = 0.0;
    std::vector<double> z(k_);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = x_.row(i);
      for (std::size_t c = 0; c < k_; ++c) {
        double v = theta[wsize + c];
        const double* w = theta.data() + c * d_;
        for (std::size_t j = 0; j < d_; ++j) v += w[j] * row[j];
        z[c] = v;
      }
      const auto yi = static_cast<std::size_t>(y_[i]);
      const double mx = *std::max_element(z.begin(), z.end());
      double s = 0.0;
      for (double& v : z) s += (v = std::exp(v - mx));
      loss += std::log(s) - std::log(z[yi]);
      for (std::size_t c = 0; c < k_; ++c) {
        const double r = (z[c] / s - (c == yi ? 1.0 : 0.0)) * inv_n;
        g[wsize + c] += r;
        double* gw = g.data() + c * d_;
        for (std::size_t j = 0; j < d_; ++j) gw[j] += r * row[j];
      }
    }
    loss *= inv_n;
    for (std::size_t t = 0; t < wsize; ++t) {
      loss += 0.5 * l2_ * theta[t] * theta[t];
      g[t] += l2_ * theta[t];
    }
    return loss;
  }

 private:
  const Matrix& x_;
  std::span<const int> y_;
  std::size_t k_, d_;
  double l2_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Limited-memory BFGS (history 10) with Armijo backtracking.
inline std::size_t minimize_lbfgs(const LogisticObjective& f, std::vector<double>& theta, std::size_t max_iter,
                                  double tol) {
  constexpr std::size_t kHistory = 10;
  const std::size_t p = theta.size();
  std::vector<double> g(p), g_new(p), dir(p), trial(p);
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  double fx = f(theta, g);
  std::size_t it = 0;
  for (; it < max_iter && max_abs(g) > tol; ++it) {
    // Two-loop recursion for dir = -H g.
    dir = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t h = s_hist.size(); h-- > 0;) {
      alpha[h] = rho_hist[h] * dot(s_hist[h], dir);
      for (std::size_t t = 0; t < p; ++t) dir[t] -= alpha[h] * y_hist[h][t];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : dir) v *= gamma;
    } else {
      const double gn = std::sqrt(dot(g, g));
      for (double& v : dir) v /= std::max(gn, 1.0);
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      const double beta = rho_hist[h] * dot(y_hist[h], dir);
      for (std::size_t t = 0; t < p; ++t) dir[t] += s_hist[h][t] * (alpha[h] - beta);
    }
    for (double& v : dir) v = -v;
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t t = 0; t < p; ++t) dir[t] = -g[t];
      slope = -dot(g, g);
    }
    double step = 1.0, f_new = fx;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      for (std::size_t t = 0; t < p; ++t) trial[t] = theta[t] + step * dir[t];
      f_new = f(trial, g_new);
      if (f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    std::vector<double> sv(p), yv(p);
    for (std::size_t t = 0; t < p; ++t) {
      sv[t] = trial[t] - theta[t];
      yv[t] = g_new[t] - g[t];
    }
    const double sy = dot(sv, yv);
    if (sy > 1e-12 * std::sqrt(dot(sv, sv) * dot(yv, yv))) {
      if (s_hist.size() == kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(sv));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }
    theta.swap(trial);
    g.swap(g_new);
    fx = f_new;
  }
  return it;
}

}  // namespace detail

/// Fits from zero weights on mean cross-entropy plus (l2 / 2) |W|^2; biases
/// are not penalized. Both solvers are deterministic.
inline LogisticModel train_classifier(const Matrix& x, std::span<const int> y, std::size_t num_classes,
                                      const ClassifierHyper& hp = {}) {
  if (x.rows() != y.size()) {
    throw DimensionError("train_classifier: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                         " labels");
  }
  if (x.rows() == 0) throw DomainError("train_classifier: no training samples");
  if (!(hp.lr > 0.0) || !(hp.l2 >= 0.0)) throw ParameterError("train_classifier: need lr > 0 and l2 >= 0");
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw DomainError("train_classifier: label " + std::to_string(label) + " outside class range");
    }
  }
  const std::size_t d = x.cols(), k = num_classes;
  const detail::LogisticObjective f(x, y, k, hp.l2);
  std::vector<double> theta(f.size(), 0.0);
  std::size_t iterations = 0;
  if (hp.solver == ClassifierHyper::Solver::lbfgs) {
    iterations = detail::minimize_lbfgs(f, theta, hp.epochs, hp.tol);
  } else {
    std::vector<double> g(theta.size());
    for (; iterations < hp.epochs; ++iterations) {
      f(theta, g);
      for (std::size_t t = 0; t < theta.size(); ++t) theta[t] -= hp.lr * g[t];
    }
  }
  LogisticModel m{k, d, std::vector<double>(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k * d)),
                  std::vector<double>(theta.begin() + static_cast<std::ptrdiff_t>(k * d), theta.end()), iterations};
  return m;
}

/// Arg-max class per row; ties go to the lowest class index.
inline std::vector<int> predict(const LogisticModel& m, const Matrix& x) {
  if (x.cols() != m.num_features) {
    throw DimensionError("predict: model has " + std::to_string(m.num_features) + " features, input has " +
                         std::to_string(x.cols()));
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto z = m.logits(x.row(i));
    out.push_back(static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin()));
  }
  return out;
}

inline double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw DimensionError("accuracy: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

struct CVOptions {
  std::size_t k = 10;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  /// Fold workers; 0 means one per hardware thread.
  std::size_t threads = 0;
};

struct CVReport {
  /// repeats * k entries, repeat-major.
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  /// Population standard deviation of fold_accuracies.
  double stddev = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  double embed_seconds = 0.0;
  double wall_time_seconds = 0.0;
};

inline nlohmann::json to_json(const CVReport& r) {
  return {{"fold_accuracies", r.fold_accuracies}, {"mean", r.mean},
          {"stddev", r.stddev},                   {"seed", r.seed},
          {"config", r.config},                   {"embed_seconds", r.embed_seconds},
          {"wall_time_seconds", r.wall_time_seconds}};
}

inline nlohmann::json to_json(const ClassifierHyper& h) {
  nlohmann::json j{{"model", "logistic_regression"}, {"l2", h.l2}, {"epochs", h.epochs}};
  if (h.solver == ClassifierHyper::Solver::lbfgs) {
    j["solver"] = "lbfgs";
    j["tol"] = h.tol;
  } else {
    j["solver"] = "gradient_descent";
    j["lr"] = h.lr;
  }
  return j;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct FoldOutcome {
  double accuracy = 0.0;
  double train_seconds = 0.0;
};

/// Standardizer fitted on the train rows only, then train and score.
inline FoldOutcome run_fold(const EmbeddingMatrix& m, const Fold& fold, std::size_t num_classes,
                            const ClassifierHyper& hp) {
  const auto t0 = Clock::now();
  const auto train = select_rows(m, fold.train);
  const auto test = select_rows(m, fold.test);
  Matrix xtr = train.values, xte = test.values;
  if (m.cols() > 0) {
    const auto scaler = fit_standardizer(train.values);
    xtr = apply_standardizer(train.values, scaler);
    xte = apply_standardizer(test.values, scaler);
  }
  const auto model = train_classifier(xtr, train.labels, num_classes, hp);
  const double acc = accuracy(predict(model, xte), test.labels);
  return {acc, seconds_since(t0)};
}

inline void summarize(CVReport& r) {
  const double n = static_cast<double>(r.fold_accuracies.size());
  r.mean = std::accumulate(r.fold_accuracies.begin(), r.fold_accuracies.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : r.fold_accuracies) ss += (a - r.mean) * (a - r.mean);
  r.stddev = std::sqrt(ss / n);
}

inline std::vector<FoldOutcome> run_cv(const EmbeddingMatrix& m, const ClassifierHyper& hp, const CVOptions& opt) {
  if (opt.repeats == 0) throw ParameterError("cross_validate: repeats must be positive");
  if (m.labels.size() != m.rows()) throw DimensionError("cross_validate: labels do not match rows");
  const std::size_t num_classes =
      m.labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(m.labels.begin(), m.labels.end())) + 1;
  std::vector<Fold> folds;
  for (std::size_t r = 0; r < opt.repeats; ++r) {
    auto f = stratified_kfold(m.labels, opt.k, mix_seed(opt.seed, r));
    folds.insert(folds.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
  }
  std::vector<FoldOutcome> out(folds.size());
  parallel_for(folds.size(), opt.threads, [&](std::size_t i) { out[i] = run_fold(m, folds[i], num_classes, hp); });
  return out;
}

}  // namespace detail

/// Repeated stratified k-fold CV of the classifier on fixed embeddings.
/// Repeat r draws its folds from mix_seed(seed, r).
inline CVReport cross_validate(const EmbeddingMatrix& m, const ClassifierHyper& hp = {}, const CVOptions& opt = {}) {
  const auto t0 = detail::Clock::now();
  CVReport r;
  r.seed = opt.seed;
  for (const auto& o : detail::run_cv(m, hp, opt)) r.fold_accuracies.push_back(o.accuracy);
  detail::summarize(r);
  r.config = {{"classifier", to_json(hp)}, {"k", opt.k}, {"repeats", opt.repeats}, {"seed", opt.seed}};
  r.wall_time_seconds = detail::seconds_since(t0);
  return r;
}

/// Embeds the bundle once, then cross-validates.
inline CVReport cross_validate(const DatasetBundle& b, const EmbedConfig& cfg, const ClassifierHyper& hp = {},
                               const CVOptions& opt = {}) {
  const auto t0 = detail::Clock::now();
  EmbedConfig ec = cfg;
  if (ec.options.threads == 0) ec.options.threads = opt.threads;
  const auto m = embed(b, ec);
  const double embed_seconds = detail::seconds_since(t0);
  CVReport r = cross_validate(m, hp, opt);
  r.config["dataset"] = {{"name", b.name}, {"provenance", detail::provenance_json(b.provenance)}};
  r.config["embedding"] = to_json(cfg, &b);
  r.embed_seconds = embed_seconds;
  r.wall_time_seconds = detail::seconds_since(t0);
  return r;
}

struct BenchReport {
  double embed_seconds = 0.0;
  /// Summed over all folds (train and predict).
  double train_seconds = 0.0;
  double total_seconds = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double mean_accuracy = 0.0;
  nlohmann::json config = nlohmann::json::object();
};

inline nlohmann::json to_json(const BenchReport& r) {
  return {{"embed_seconds", r.embed_seconds}, {"train_seconds", r.train_seconds}, {"total_seconds", r.total_seconds},
          {"rows", r.rows},                   {"cols", r.cols},                   {"mean_accuracy", r.mean_accuracy},
          {"config", r.config}};
}

/// Wall-clock split of one embed plus repeated CV. Folds run sequentially so
/// train_seconds is not inflated by contention.
inline BenchReport bench_runtime(const DatasetBundle& b, const EmbedConfig& cfg, const ClassifierHyper& hp = {},
                                 CVOptions opt = {}) {
  const auto t0 = detail::Clock::now();
  const auto m = embed(b, cfg);
  BenchReport r;
  r.embed_seconds = detail::seconds_since(t0);
  r.rows = m.rows();
  r.cols = m.cols();
  opt.threads = 1;
  const auto outcomes = detail::run_cv(m, hp, opt);
  for (const auto& o : outcomes) {
    r.train_seconds += o.train_seconds;
    r.mean_accuracy += o.accuracy / static_cast<double>(outcomes.size());
  }
  r.total_seconds = detail::seconds_since(t0);
  r.config = {{"dataset", b.name},      {"embedding", to_json(cfg, &b)}, {"classifier", to_json(hp)},
              {"k", opt.k},             {"repeats", opt.repeats},        {"seed", opt.seed}};
  return r;
}

}  // namespace homcount
