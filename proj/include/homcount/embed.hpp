// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <istream>
#include <ostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "homcount/dataset.hpp"
#include "homcount/errors.hpp"
#include "homcount/hom.hpp"
#include "homcount/pattern.hpp"
#include "homcount/phi.hpp"
#include "json.hpp"

namespace homcount {

/// Row-major dense matrix of doubles.
using Matrix = FeatureMatrix;

/// Which patterns make up the embedding coordinates.
struct FamilySpec {
  enum class Kind { trees, cycles, stars, paths, custom };
  Kind kind = Kind::trees;
  std::size_t max_size = 6;
  /// Only for `custom`.
  std::vector<Pattern> custom;
  std::string custom_source;

  static FamilySpec trees(std::size_t k) { return {Kind::trees, k, {}, {}}; }
  static FamilySpec cycles(std::size_t k) { return {Kind::cycles, k, {}, {}}; }

  std::vector<Pattern> patterns() const {
    switch (kind) {
      case Kind::trees: return enumerate_trees(max_size);
      case Kind::cycles: return enumerate_cycles(max_size);
      case Kind::stars: return enumerate_stars(max_size);
      case Kind::paths: return enumerate_paths(max_size);
      case Kind::custom: return custom;
    }
    return {};
  }

  /// "trees:6", "cycles:8", "stars:5", "paths:5" or "custom:<file>".
  std::string to_string() const {
    switch (kind) {
      case Kind::trees: return "trees:" + std::to_string(max_size);
      case Kind::cycles: return "cycles:" + std::to_string(max_size);
      case Kind::stars: return "stars:" + std::to_string(max_size);
      case Kind::paths: return "paths:" + std::to_string(max_size);
      case Kind::custom: return "custom:" + custom_source;
    }
    return "?";
  }
};

/// Inverse of FamilySpec::to_string. Custom families load their pattern file.
inline FamilySpec parse_family(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("family must look like 'trees:6', got '" + text + "'");
  const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
  FamilySpec f;
  if (kind == "custom") {
    f.kind = FamilySpec::Kind::custom;
    f.custom_source = arg;
    f.custom = load_patterns(arg);
    return f;
  }
  if (kind == "trees") {
    f.kind = FamilySpec::Kind::trees;
  } else if (kind == "cycles") {
    f.kind = FamilySpec::Kind::cycles;
  } else if (kind == "stars") {
    f.kind = FamilySpec::Kind::stars;
  } else if (kind == "paths") {
    f.kind = FamilySpec::Kind::paths;
  } else {
    throw ConfigError("unknown pattern family '" + kind + "'");
  }
  std::size_t used = 0;
  try {
    f.max_size = std::stoul(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != arg.size()) throw ConfigError("family size must be an integer, got '" + arg + "'");
  return f;
}

/// "one" or "x<i>".
inline Phi parse_phi(const std::string& text) {
  if (text == "one") return Phi::constant_one();
  if (text.size() > 1 && text[0] == 'x' && text.find_first_not_of("0123456789", 1) == std::string::npos) {
    return Phi::coordinate(std::stoul(text.substr(1)));
  }
  throw ConfigError("unknown phi '" + text + "' (expected 'one' or 'x<i>')");
}

/// Constant one, plus one coordinate per one-hot node label column.
inline std::vector<Phi> default_phis(const DatasetBundle& b) {
  std::vector<Phi> out{Phi::constant_one()};
  for (std::size_t i = 0; i < b.label_columns; ++i) out.push_back(Phi::coordinate(i));
  return out;
}

struct EmbedOptions {
  bool density = false;
  /// log(1 + x) applied to every cell after counting.
  bool log1p = false;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 0;
};

struct EmbedConfig {
  FamilySpec family;
  /// Empty selects default_phis.
  std::vector<Phi> phis;
  EmbedOptions options;
};

struct ColumnMeta {
  std::string pattern;
  std::string phi;
  bool density = false;
  /// Some cell overflowed exact arithmetic and was recomputed in double.
  bool promoted = false;

  std::string name() const { return pattern + "@" + phi; }
};

struct EmbeddingMatrix {
  Matrix values;
  std::vector<ColumnMeta> column_meta;
  std::vector<int> labels;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
};

namespace detail {

inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  threads = std::min(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Column (F, phi) of row i holds hom(F, G_i; phi). Columns are ordered
/// phi-major, pattern-minor.
inline EmbeddingMatrix embed(const DatasetBundle& bundle, std::span<const Pattern> patterns,
                             const std::vector<Phi>& phis, const EmbedOptions& opt = {}) {
  if (phis.empty() && !patterns.empty()) throw ConfigError("embed: empty phi set");
  const std::size_t p = bundle.feature_dim();
  for (const auto& phi : phis) {
    if (phi.kind() != Phi::Kind::constant_one && !bundle.features) {
      throw ConfigError("embed: phi '" + phi.id() + "' needs node features, but bundle '" + bundle.name +
                        "' has none");
    }
    if (bundle.features) {
      try {
        phi.check_dim(p);
      } catch (const Error& e) {
        throw ConfigError(std::string("embed: ") + e.what());
      }
    }
  }

  EmbeddingMatrix m;
  m.labels = bundle.labels;
  for (const auto& phi : phis) {
    for (const auto& f : patterns) m.column_meta.push_back({f.name, phi.id(), opt.density, false});
  }
  const std::size_t d = m.column_meta.size();
  m.values = Matrix(bundle.size(), d);
  std::vector<char> promoted(bundle.size() * d, 0);

  detail::parallel_for(bundle.size(), opt.threads, [&](std::size_t i) {
    const FeaturedGraph fg = bundle.featured(i);
    std::size_t c = 0;
    for (const auto& phi : phis) {
      for (const auto& h : hom_values(patterns, fg, phi, {opt.density})) {
        double v = h.to_double();
        if (opt.log1p) v = std::log1p(v);
        if (!std::isfinite(v)) {
          throw DomainError("embed: graph " + std::to_string(i) + " column " + m.column_meta[c].name() +
                            " is not finite; try density or log1p");
        }
        m.values(i, c) = v;
        promoted[i * d + c] = h.promoted();
        ++c;
      }
    }
  });
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c) m.column_meta[c].promoted = m.column_meta[c].promoted || promoted[i * d + c];
  }
  return m;
}

inline EmbeddingMatrix embed(const DatasetBundle& bundle, const EmbedConfig& cfg) {
  const auto patterns = cfg.family.patterns();
  return embed(bundle, patterns, cfg.phis.empty() ? default_phis(bundle) : cfg.phis, cfg.options);
}

inline nlohmann::json to_json(const EmbedConfig& cfg, const DatasetBundle* bundle = nullptr) {
  nlohmann::json j;
  j["family"] = cfg.family.to_string();
  std::vector<std::string> ids;
  const auto phis = cfg.phis.empty() && bundle ? default_phis(*bundle) : cfg.phis;
  for (const auto& phi : phis) ids.push_back(phi.id());
  j["phis"] = ids;
  j["density"] = cfg.options.density;
  j["log1p"] = cfg.options.log1p;
  return j;
}

/// Rows `idx` of `m`, in that order.
inline EmbeddingMatrix select_rows(const EmbeddingMatrix& m, std::span<const std::size_t> idx) {
  EmbeddingMatrix out;
  out.column_meta = m.column_meta;
  out.values = Matrix(idx.size(), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= m.rows()) throw IndexError("row " + std::to_string(idx[r]) + " out of range");
    auto src = m.values.row(idx[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) out.values(r, c) = src[c];
    if (!m.labels.empty()) out.labels.push_back(m.labels[idx[r]]);
  }
  return out;
}

struct ScalerParams {
  std::vector<double> mean;
  /// Population standard deviation; constant columns get 1.
  std::vector<double> stddev;
};

inline ScalerParams fit_standardizer(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) throw DomainError("fit_standardizer: empty matrix");
  const std::size_t n = x.rows(), d = x.cols();
  ScalerParams s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t c = 0; c < d; ++c) {
    double lo = x(0, c), hi = x(0, c), sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      lo = std::min(lo, x(r, c));
      hi = std::max(hi, x(r, c));
      sum += x(r, c);
    }
    // A constant column maps to exact zeros, untouched by rounding in the sum.
    if (lo == hi) {
      s.mean[c] = lo;
      s.stddev[c] = 1.0;
      continue;
    }
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (x(r, c) - mu) * (x(r, c) - mu);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.mean[c] = mu;
    s.stddev[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

inline ScalerParams fit_standardizer(const EmbeddingMatrix& m) { return fit_standardizer(m.values); }

inline Matrix apply_standardizer(const Matrix& x, const ScalerParams& s) {
  if (s.mean.size() != x.cols()) {
    throw DimensionError("standardizer fitted on " + std::to_string(s.mean.size()) + " columns, got " +
                         std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - s.mean[c]) / s.stddev[c];
  }
  return out;
}

inline EmbeddingMatrix apply_standardizer(const EmbeddingMatrix& m, const ScalerParams& s) {
  EmbeddingMatrix out = m;
  out.values = apply_standardizer(m.values, s);
  return out;
}

inline nlohmann::json to_json(const ColumnMeta& c) {
  return {{"name", c.name()}, {"pattern", c.pattern}, {"phi", c.phi}, {"density", c.density}, {"promoted", c.promoted}};
}

/// Header `graph_id,label,<column names>`, then one row per graph.
inline void write_embedding_csv(const EmbeddingMatrix& m, std::ostream& out) {
  out << "graph_id,label";
  for (const auto& c : m.column_meta) out << ',' << c.name();
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << r << ',' << (m.labels.empty() ? 0 : m.labels[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << detail::format_real(m.values(r, c));
    out << '\n';
  }
}

/// Reads what write_embedding_csv wrote. Column names split at the last '@'
/// into pattern and phi; density and promoted flags are not in the CSV.
inline EmbeddingMatrix read_embedding_csv(std::istream& in, const std::string& source = "<csv>") {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = detail::split_commas(line);
  if (head.size() < 2 || head[0] != "graph_id" || head[1] != "label") {
    throw ParseError(source, 1, "header must start with 'graph_id,label'");
  }
  EmbeddingMatrix m;
  for (std::size_t i = 2; i < head.size(); ++i) {
    const std::string name(head[i]);
    const auto at = name.rfind('@');
    m.column_meta.push_back(at == std::string::npos ? ColumnMeta{name, "", false, false}
                                                    : ColumnMeta{name.substr(0, at), name.substr(at + 1), false, false});
  }
  const std::size_t d = m.column_meta.size();
  std::vector<double> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto toks = detail::split_commas(line);
    if (toks.size() != d + 2) throw ParseError(source, line_no, "expected " + std::to_string(d + 2) + " fields");
    const auto label = detail::parse_int(toks[1], source, line_no);
    if (label < 0) throw ParseError(source, line_no, "negative label");
    m.labels.push_back(static_cast<int>(label));
    for (std::size_t c = 0; c < d; ++c) data.push_back(detail::parse_real(toks[c + 2], source, line_no));
  }
  m.values = Matrix(m.labels.size(), d, std::move(data));
  return m;
}

}  // namespace homcount
