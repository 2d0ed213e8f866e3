// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homcount/decomposition.hpp"
#include "homcount/errors.hpp"
#include "homcount/graph.hpp"
#include "homcount/hom_value.hpp"
#include "homcount/pattern.hpp"
#include "homcount/phi.hpp"

namespace homcount {

/// Per-target-vertex weights; std::nullopt means every weight is 1.
using Weights = std::optional<std::span<const double>>;

/// hom_brute refuses when |V(G)|^|V(F)| exceeds this.
inline constexpr double kBruteForceLimit = 1e8;
/// hom_treedec refuses DP tables with more entries than this.
inline constexpr double kTableLimit = 1e8;

namespace detail {

inline void check_weights(const Graph& g, const Weights& w) {
  if (w && w->size() != g.num_vertices()) {
    throw DimensionError("weight vector length " + std::to_string(w->size()) + " != vertex count " +
                         std::to_string(g.num_vertices()));
  }
}

inline bool unit_weights(const Weights& w) {
  return !w || std::all_of(w->begin(), w->end(), [](double x) { return x == 1.0; });
}

template <class S>
std::vector<S> weight_vector(std::size_t n, const Weights& w) {
  std::vector<S> out(n, S(1.0));
  if (w) {
    for (std::size_t v = 0; v < n; ++v) out[v] = S((*w)[v]);
  }
  return out;
}

/// Runs `dp` with exact checked counts when every weight is 1 (64-bit, then
/// 128-bit), falling back to doubles (flagged as promoted) on overflow.
/// Weighted inputs run in double precision directly.
template <class Dp>
HomValue run_counting(const Weights& w, Dp&& dp) {
  if (unit_weights(w)) {
    try {
      return HomValue::exact(static_cast<Count>(dp.template operator()<CheckedCount64>().v));
    } catch (const CountOverflow&) {
    }
    try {
      return HomValue::exact(dp.template operator()<CheckedCount>().v);
    } catch (const CountOverflow&) {
      return HomValue::real(dp.template operator()<double>(), true);
    }
  }
  return HomValue::real(dp.template operator()<double>());
}

// Dense adjacency test for the enumerating algorithms.
class AdjacencyTest {
 public:
  explicit AdjacencyTest(const Graph& g) : g_(g), n_(g.num_vertices()) {
    if (n_ <= kDenseLimit) {
      bits_.assign(n_ * n_, 0);
      for (auto [u, v] : g.edges()) bits_[u * n_ + v] = bits_[v * n_ + u] = 1;
    }
  }
  bool operator()(Vertex u, Vertex v) const {
    return bits_.empty() ? g_.has_edge(u, v) : bits_[u * n_ + v] != 0;
  }

 private:
  static constexpr std::size_t kDenseLimit = 4096;
  const Graph& g_;
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace detail

/// hom(F, (G, w)) straight from the definition: every map V(F) -> V(G) that
/// preserves edges contributes the product of the weights of its image.
/// Maps are enumerated by extending partial assignments vertex by vertex and
/// dropping a branch as soon as an edge among assigned vertices breaks.
inline HomValue hom_brute(const Graph& f, const Graph& g, const Weights& w = std::nullopt) {
  detail::check_weights(g, w);
  const std::size_t k = f.num_vertices();
  const std::size_t n = g.num_vertices();
  if (std::pow(static_cast<double>(n), static_cast<double>(k)) > kBruteForceLimit) {
    throw SizeError("brute force over " + std::to_string(n) + "^" + std::to_string(k) + " maps exceeds the guard");
  }
  // Pattern neighbors of vertex i that precede it.
  std::vector<std::vector<Vertex>> back(k);
  for (auto [u, v] : f.edges()) back[std::max(u, v)].push_back(std::min(u, v));
  const detail::AdjacencyTest adjacent(g);

  return detail::run_counting(w, [&]<class S>() {
    const auto wt = detail::weight_vector<S>(n, w);
    if (k == 0) return S(1.0);
    std::vector<Vertex> image(k, 0);
    std::vector<S> partial(k + 1, S(1.0));
    S total{};
    std::size_t depth = 0;
    std::vector<std::size_t> next(k, 0);
    while (true) {
      if (next[depth] == n) {
        if (depth == 0) break;
        next[depth] = 0;
        --depth;
        continue;
      }
      const auto cand = static_cast<Vertex>(next[depth]++);
      bool ok = true;
      for (Vertex j : back[depth]) {
        if (!adjacent(image[j], cand)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      image[depth] = cand;
      partial[depth + 1] = partial[depth] * wt[cand];
      if (depth + 1 == k) {
        total += partial[k];
      } else {
        ++depth;
      }
    }
    return total;
  });
}

/// Tree DP: each pattern vertex holds a vector over V(G); a child's vector is
/// pushed through the adjacency (neighbor sums) and multiplied in
/// element-wise; the root's vector sums to the count. Linear in |V(G)| +
/// |E(G)| per pattern vertex. Processed leaves-up from pattern vertex 0
/// without recursion.
inline HomValue hom_tree(const Graph& f, const Graph& g, const Weights& w = std::nullopt) {
  if (!is_tree(f)) throw DomainError("hom_tree: pattern is not a tree");
  detail::check_weights(g, w);
  const std::size_t k = f.num_vertices();
  const std::size_t n = g.num_vertices();

  std::vector<Vertex> order{0};
  std::vector<Vertex> parent(k, 0);
  std::vector<bool> seen(k, false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex y : f.neighbors(order[i])) {
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = order[i];
        order.push_back(y);
      }
    }
  }

  return detail::run_counting(w, [&]<class S>() {
    std::vector<std::vector<S>> table(k);
    std::vector<S> aux(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Vertex x = *it;
      auto cur = detail::weight_vector<S>(n, w);
      for (Vertex y : f.neighbors(x)) {
        if (x != 0 && y == parent[x]) continue;
        const auto& child = table[y];
        for (Vertex i = 0; i < n; ++i) {
          S s{};
          for (Vertex j : g.neighbors(i)) s += child[j];
          aux[i] = s;
        }
        for (Vertex i = 0; i < n; ++i) cur[i] *= aux[i];
        table[y].clear();
        table[y].shrink_to_fit();
      }
      table[x] = std::move(cur);
    }
    S total{};
    for (const S& s : table[0]) total += s;
    return total;
  });
}

/// hom(C_k, (G, w)) as the weighted closed-walk count tr((W A)^k). For k = 2
/// this is the single-edge count 2|E(G)| (unweighted).
inline HomValue hom_cycle(std::size_t k, const Graph& g, const Weights& w = std::nullopt) {
  if (k < 2) throw ParameterError("hom_cycle: k must be at least 2");
  detail::check_weights(g, w);
  const std::size_t n = g.num_vertices();
  return detail::run_counting(w, [&]<class S>() {
    const auto wt = detail::weight_vector<S>(n, w);
    std::vector<S> walk(n), nxt(n);
    S total{};
    for (Vertex s = 0; s < n; ++s) {
      std::fill(walk.begin(), walk.end(), S{});
      walk[s] = S(1.0);
      for (std::size_t step = 0; step < k; ++step) {
        for (Vertex i = 0; i < n; ++i) {
          S acc{};
          for (Vertex j : g.neighbors(i)) acc += walk[j];
          nxt[i] = detail::is_zero(acc) ? acc : acc * wt[i];
        }
        std::swap(walk, nxt);
      }
      total += walk[s];
    }
    return total;
  });
}

/// Bounded-treewidth DP over a nice decomposition of `f`. Tables map each
/// assignment bag -> V(G) to a partial count. Introduce nodes filter out
/// assignments that break a pattern edge inside the bag, forget nodes sum the
/// forgotten vertex out (multiplying by its weight, so each pattern vertex is
/// weighted exactly once), join nodes multiply pointwise. Runs in
/// O(|V(G)|^(width+1)) per node.
inline HomValue hom_treedec(const Graph& f, const TreeDecomposition& td, const Graph& g,
                            const Weights& w = std::nullopt) {
  using Kind = TreeDecomposition::NodeKind;
  if (auto why = validate_decomposition(td, f); !why.empty()) {
    throw DomainError("hom_treedec: invalid decomposition: " + why);
  }
  detail::check_weights(g, w);
  const std::size_t n = g.num_vertices();
  if (std::pow(static_cast<double>(n), static_cast<double>(td.width() + 1)) > kTableLimit) {
    throw SizeError("hom_treedec: DP table of " + std::to_string(n) + "^" + std::to_string(td.width() + 1) +
                    " entries exceeds the guard");
  }
  const detail::AdjacencyTest adjacent(g);
  const auto order = td.post_order();

  return detail::run_counting(w, [&]<class S>() {
    const auto wt = detail::weight_vector<S>(n, w);
    std::vector<std::vector<S>> table(td.size());
    auto table_size = [&](std::size_t bag) {
      std::size_t s = 1;
      for (std::size_t i = 0; i < bag; ++i) s *= n;
      return s;
    };
    std::vector<Vertex> digits;
    for (std::size_t t : order) {
      const auto& nd = td.node(t);
      const auto& bag = nd.bag;
      std::vector<S> out;
      switch (nd.kind) {
        case Kind::leaf:
          out.assign(1, S(1.0));
          break;
        case Kind::introduce: {
          const auto& child = table[nd.children[0]];
          const auto pos = static_cast<std::size_t>(std::find(bag.begin(), bag.end(), nd.vertex) - bag.begin());
          std::vector<std::size_t> nbr_pos;
          for (std::size_t i = 0; i < bag.size(); ++i) {
            if (i != pos && f.has_edge(nd.vertex, bag[i])) nbr_pos.push_back(i);
          }
          out.assign(table_size(bag.size()), S{});
          digits.assign(bag.size(), 0);
          for (std::size_t idx = 0; idx < out.size(); ++idx) {
            if (idx > 0) {
              for (std::size_t i = 0; ++digits[i] == n; ++i) digits[i] = 0;
            }
            bool ok = true;
            for (std::size_t i : nbr_pos) {
              if (!adjacent(digits[pos], digits[i])) {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            std::size_t cidx = 0;
            for (std::size_t i = bag.size(); i-- > 0;) {
              if (i != pos) cidx = cidx * n + digits[i];
            }
            out[idx] = child[cidx];
          }
          break;
        }
        case Kind::forget: {
          const auto& child = table[nd.children[0]];
          const auto& cbag = td.node(nd.children[0]).bag;
          const auto pos = static_cast<std::size_t>(std::find(cbag.begin(), cbag.end(), nd.vertex) - cbag.begin());
          out.assign(table_size(bag.size()), S{});
          digits.assign(cbag.size(), 0);
          for (std::size_t idx = 0; idx < child.size(); ++idx) {
            if (idx > 0) {
              for (std::size_t i = 0; ++digits[i] == n; ++i) digits[i] = 0;
            }
            if (detail::is_zero(child[idx])) continue;
            std::size_t oidx = 0;
            for (std::size_t i = cbag.size(); i-- > 0;) {
              if (i != pos) oidx = oidx * n + digits[i];
            }
            out[oidx] += child[idx] * wt[digits[pos]];
          }
          break;
        }
        case Kind::join: {
          out = std::move(table[nd.children[0]]);
          const auto& other = table[nd.children[1]];
          for (std::size_t i = 0; i < out.size(); ++i) {
            if (!detail::is_zero(out[i])) out[i] *= other[i];
          }
          break;
        }
      }
      for (std::size_t c : nd.children) {
        table[c].clear();
        table[c].shrink_to_fit();
      }
      table[t] = std::move(out);
    }
    return table[td.root()].empty() ? S{} : table[td.root()][0];
  });
}

/// Picks the engine for a catalog pattern: tree DP for tree-shaped families,
/// closed walks for cycles, the decomposition DP for everything else.
inline HomValue hom(const Pattern& p, const Graph& g, const Weights& w = std::nullopt) {
  switch (p.family) {
    case PatternFamily::tree:
    case PatternFamily::star:
    case PatternFamily::path:
      return hom_tree(p.graph, g, w);
    case PatternFamily::cycle:
      return hom_cycle(p.size(), g, w);
    case PatternFamily::custom:
      if (p.decomposition) return hom_treedec(p.graph, *p.decomposition, g, w);
      return hom_tree(p.graph, g, w);
  }
  throw DomainError("unknown pattern family");
}

/// hom(F, G, x; phi): each mapped vertex weighted by phi(x(v)).
inline HomValue hom(const Pattern& p, const FeaturedGraph& fg, const Phi& phi) {
  const auto w = vertex_weights(fg, phi);
  return hom(p, fg.graph(), std::span<const double>(w));
}

inline HomValue hom_brute(const Pattern& p, const FeaturedGraph& fg, const Phi& phi) {
  const auto w = vertex_weights(fg, phi);
  return hom_brute(p.graph, fg.graph(), std::span<const double>(w));
}

/// t(F, G) = hom(F, G) / |V(G)|^|V(F)|.
inline double hom_density(const Pattern& p, const Graph& g) {
  if (g.num_vertices() == 0) throw DomainError("hom_density: target graph has no vertices");
  const long double denom = std::pow(static_cast<long double>(g.num_vertices()), static_cast<long double>(p.size()));
  return static_cast<double>(hom(p, g).to_long_double() / denom);
}

/// t(F, (G, x)) = hom(F, (G, x / sum(x))) for scalar weights x.
inline double hom_weighted_density(const Pattern& p, const FeaturedGraph& fg) {
  auto w = fg.scalar_weights();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("hom_weighted_density: total vertex weight is zero");
  for (double& x : w) x /= total;
  return hom(p, fg.graph(), std::span<const double>(w)).to_double();
}

struct HomVectorOptions {
  bool density = false;
};

/// One HomValue per pattern, in order. With `density`, values are divided by
/// |V(G)|^|V(F)| (unit phi) or computed on phi-weights normalized to sum 1;
/// an all-zero weighting yields density 0.
inline std::vector<HomValue> hom_values(std::span<const Pattern> patterns, const FeaturedGraph& fg, const Phi& phi,
                                        const HomVectorOptions& opt = {}) {
  std::vector<HomValue> out;
  out.reserve(patterns.size());
  auto w = vertex_weights(fg, phi);
  const bool unit = detail::unit_weights(std::span<const double>(w));
  if (opt.density) {
    if (fg.graph().num_vertices() == 0) throw DomainError("hom density of an empty target graph");
    if (unit) {
      for (const auto& p : patterns) out.push_back(HomValue::real(hom_density(p, fg.graph())));
      return out;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) {
      out.assign(patterns.size(), HomValue::real(0.0));
      return out;
    }
    for (double& x : w) x /= total;
  }
  const Weights ws = unit ? Weights{} : Weights{std::span<const double>(w)};
  for (const auto& p : patterns) out.push_back(hom(p, fg.graph(), ws));
  return out;
}

inline std::vector<double> hom_vector(std::span<const Pattern> patterns, const FeaturedGraph& fg, const Phi& phi,
                                      const HomVectorOptions& opt = {}) {
  std::vector<double> out;
  for (const auto& h : hom_values(patterns, fg, phi, opt)) out.push_back(h.to_double());
  return out;
}

inline std::vector<double> hom_vector(std::span<const Pattern> patterns, const Graph& g,
                                      const HomVectorOptions& opt = {}) {
  return hom_vector(patterns, FeaturedGraph::unit(g), Phi::constant_one(), opt);
}

}  // namespace homcount
