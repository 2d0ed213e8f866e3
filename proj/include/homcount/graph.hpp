// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homcount/errors.hpp"

namespace homcount {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph in compressed adjacency form.
///
/// Neighbor lists are sorted and duplicate free, there are no self-loops and
/// adjacency is symmetric. Instances are immutable once built; every
/// transform returns a new Graph.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds from an edge list. Parallel edges collapse; (u, v) and (v, u)
  /// are the same edge.
  static Graph from_edges(std::size_t num_vertices, std::span<const Edge> edges) {
    std::vector<std::vector<Vertex>> lists(num_vertices);
    for (const auto& [u, v] : edges) {
      if (u >= num_vertices || v >= num_vertices) {
        throw IndexError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                         ") has an endpoint outside [0, " + std::to_string(num_vertices) + ")");
      }
      if (u == v) throw DomainError("graph is not simple: self-loop at vertex " + std::to_string(u));
      lists[u].push_back(v);
      lists[v].push_back(u);
    }
    return from_lists(std::move(lists));
  }

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Each edge once as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < num_vertices(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static Graph from_lists(std::vector<std::vector<Vertex>> lists) {
    Graph g;
    g.offsets_.assign(lists.size() + 1, 0);
    for (std::size_t v = 0; v < lists.size(); ++v) {
      auto& l = lists[v];
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      g.offsets_[v + 1] = g.offsets_[v] + l.size();
    }
    g.neighbors_.reserve(g.offsets_.back());
    for (const auto& l : lists) g.neighbors_.insert(g.neighbors_.end(), l.begin(), l.end());
    return g;
  }

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

inline Graph build_graph(std::size_t num_vertices, std::span<const Edge> edges) {
  return Graph::from_edges(num_vertices, edges);
}

inline Graph build_graph(std::size_t num_vertices, std::initializer_list<Edge> edges) {
  return Graph::from_edges(num_vertices, std::span<const Edge>(edges.begin(), edges.size()));
}

/// Dense row-major real matrix, used for vertex features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("feature buffer size does not match shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A graph with one feature row per vertex, entries in [0, 1].
///
/// Scalar vertex weights (p = 1) outside the unit interval appear after twin
/// reduction; those go through `weighted`, which only requires finite,
/// non-negative entries.
class FeaturedGraph {
 public:
  FeaturedGraph(Graph graph, FeatureMatrix features) : graph_(std::move(graph)), features_(std::move(features)) {
    check_shape();
    for (double x : features_.data()) {
      if (!(x >= 0.0 && x <= 1.0)) throw DomainError("vertex feature outside [0, 1]");
    }
  }

  static FeaturedGraph weighted(Graph graph, std::vector<double> weights) {
    const std::size_t n = weights.size();
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw DomainError("vertex weight must be finite and non-negative");
    }
    FeaturedGraph fg(std::move(graph), FeatureMatrix(n, 1, std::move(weights)), Unchecked{});
    fg.check_shape();
    return fg;
  }

  /// All-ones scalar weights: the feature-less case.
  static FeaturedGraph unit(Graph graph) {
    const std::size_t n = graph.num_vertices();
    return FeaturedGraph(std::move(graph), FeatureMatrix(n, 1, 1.0));
  }

  const Graph& graph() const noexcept { return graph_; }
  const FeatureMatrix& features() const noexcept { return features_; }
  std::size_t dim() const noexcept { return features_.cols(); }

  /// Column 0 as a weight vector; only meaningful for p = 1.
  std::vector<double> scalar_weights() const {
    if (dim() != 1) throw UnsupportedError("scalar weights need exactly one feature column");
    return features_.data();
  }

  friend bool operator==(const FeaturedGraph&, const FeaturedGraph&) = default;

 private:
  struct Unchecked {};
  FeaturedGraph(Graph graph, FeatureMatrix features, Unchecked)
      : graph_(std::move(graph)), features_(std::move(features)) {}

  void check_shape() const {
    if (features_.rows() != graph_.num_vertices()) {
      throw DimensionError("feature rows (" + std::to_string(features_.rows()) + ") != vertices (" +
                           std::to_string(graph_.num_vertices()) + ")");
    }
  }

  Graph graph_;
  FeatureMatrix features_;
};

/// Bijection on {0..n-1}; vertex u moves to mapping[u].
class VertexPermutation {
 public:
  explicit VertexPermutation(std::vector<Vertex> mapping) : map_(std::move(mapping)) {
    std::vector<bool> hit(map_.size(), false);
    for (Vertex v : map_) {
      if (v >= map_.size() || hit[v]) throw DomainError("mapping is not a permutation");
      hit[v] = true;
    }
  }

  static VertexPermutation identity(std::size_t n) {
    std::vector<Vertex> m(n);
    std::iota(m.begin(), m.end(), Vertex{0});
    return VertexPermutation(std::move(m));
  }

  std::size_t size() const noexcept { return map_.size(); }
  Vertex operator[](Vertex u) const { return map_[u]; }
  const std::vector<Vertex>& mapping() const noexcept { return map_; }

  VertexPermutation inverse() const {
    std::vector<Vertex> inv(map_.size());
    for (Vertex u = 0; u < map_.size(); ++u) inv[map_[u]] = u;
    return VertexPermutation(std::move(inv));
  }

 private:
  std::vector<Vertex> map_;
};

/// G^sigma: edge (u, v) becomes (sigma(u), sigma(v)).
inline Graph permute(const Graph& g, const VertexPermutation& sigma) {
  if (sigma.size() != g.num_vertices()) {
    throw DimensionError("permutation length " + std::to_string(sigma.size()) + " != vertex count " +
                         std::to_string(g.num_vertices()));
  }
  auto es = g.edges();
  for (auto& [u, v] : es) {
    u = sigma[u];
    v = sigma[v];
  }
  return Graph::from_edges(g.num_vertices(), es);
}

/// (G^sigma, x^sigma) with x^sigma(sigma(u)) = x(u).
inline FeaturedGraph permute_featured(const FeaturedGraph& fg, const VertexPermutation& sigma) {
  Graph pg = permute(fg.graph(), sigma);
  const auto& x = fg.features();
  FeatureMatrix px(x.rows(), x.cols());
  for (Vertex u = 0; u < x.rows(); ++u) {
    auto src = x.row(u);
    std::copy(src.begin(), src.end(), px.row(sigma[u]).begin());
  }
  if (fg.dim() == 1) return FeaturedGraph::weighted(std::move(pg), px.data());
  return FeaturedGraph(std::move(pg), std::move(px));
}

/// Proper 2-coloring (0/1 per vertex) if one exists.
inline std::optional<std::vector<std::uint8_t>> two_coloring(const Graph& g) {
  constexpr std::uint8_t kUnset = 2;
  std::vector<std::uint8_t> color(g.num_vertices(), kUnset);
  std::queue<Vertex> q;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (color[s] != kUnset) continue;
    color[s] = 0;
    q.push(s);
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex v : g.neighbors(u)) {
        if (color[v] == kUnset) {
          color[v] = color[u] ^ 1;
          q.push(v);
        } else if (color[v] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

inline bool is_bipartite(const Graph& g) { return two_coloring(g).has_value(); }

/// Vertex degrees in non-decreasing order.
inline std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> d(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) d[v] = g.degree(v);
  std::sort(d.begin(), d.end());
  return d;
}

/// Induced subgraph on `keep` (sorted, distinct); vertex keep[i] becomes i.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<std::int64_t> index(g.num_vertices(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> es;
  for (Vertex u : keep) {
    for (Vertex v : g.neighbors(u)) {
      if (u < v && index[v] >= 0) es.emplace_back(static_cast<Vertex>(index[u]), static_cast<Vertex>(index[v]));
    }
  }
  return Graph::from_edges(keep.size(), es);
}

/// Vertex-disjoint union; vertices of `b` are shifted by |V(a)|.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  auto es = a.edges();
  const auto shift = static_cast<Vertex>(a.num_vertices());
  for (auto [u, v] : b.edges()) es.emplace_back(u + shift, v + shift);
  return Graph::from_edges(a.num_vertices() + b.num_vertices(), es);
}

/// Twin reduction of a scalar-weighted graph.
///
/// Zero-weight vertices are dropped, then every class of vertices sharing
/// the same open neighborhood collapses onto its smallest member, which
/// receives the summed weight. Surviving vertices keep their relative order,
/// so the result does not depend on contraction order.
inline FeaturedGraph twin_reduce(const FeaturedGraph& fg) {
  if (fg.dim() != 1) throw UnsupportedError("twin reduction needs scalar weights (p = 1)");
  Graph g = fg.graph();
  std::vector<double> w = fg.features().data();
  for (double x : w) {
    if (x < 0.0) throw DomainError("twin reduction needs non-negative weights");
  }

  auto restrict_to = [&](const std::vector<Vertex>& keep) {
    std::vector<double> nw;
    nw.reserve(keep.size());
    for (Vertex v : keep) nw.push_back(w[v]);
    g = induced_subgraph(g, keep);
    w = std::move(nw);
  };

  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (w[v] != 0.0) keep.push_back(v);
  }
  restrict_to(keep);

  for (;;) {
    std::map<std::vector<Vertex>, Vertex> rep;
    keep.clear();
    bool merged = false;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      auto nb = g.neighbors(v);
      auto [it, fresh] = rep.try_emplace(std::vector<Vertex>(nb.begin(), nb.end()), v);
      if (fresh) {
        keep.push_back(v);
      } else {
        w[it->second] += w[v];
        merged = true;
      }
    }
    if (!merged) break;
    restrict_to(keep);
  }
  return FeaturedGraph::weighted(std::move(g), std::move(w));
}

}  // namespace homcount
