// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "homcount/errors.hpp"
#include "homcount/graph.hpp"

namespace homcount {

/// Exact treewidth is computed by a DP over vertex subsets.
inline constexpr std::size_t kMaxExactTreewidthVertices = 20;

struct EliminationResult {
  int width = 0;
  std::vector<Vertex> order;
};

namespace detail {

inline std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  if (g.num_vertices() > 64) throw SizeError("bitmask routines handle at most 64 vertices");
  std::vector<std::uint64_t> adj(g.num_vertices(), 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex u : g.neighbors(v)) adj[v] |= std::uint64_t{1} << u;
  }
  return adj;
}

inline void check_order(const Graph& g, std::span<const Vertex> order) {
  if (order.size() != g.num_vertices()) throw DomainError("elimination order length != vertex count");
  std::vector<bool> seen(order.size(), false);
  for (Vertex v : order) {
    if (v >= order.size() || seen[v]) throw DomainError("elimination order is not a permutation");
    seen[v] = true;
  }
}

}  // namespace detail

/// Width induced by eliminating vertices in `order`: the largest number of
/// not-yet-eliminated neighbors a vertex has in the fill-in graph.
inline int elimination_width(const Graph& g, std::span<const Vertex> order) {
  detail::check_order(g, order);
  auto adj = detail::adjacency_masks(g);
  std::uint64_t gone = 0;
  int width = 0;
  for (Vertex v : order) {
    const std::uint64_t later = adj[v] & ~gone & ~(std::uint64_t{1} << v);
    width = std::max(width, std::popcount(later));
    for (std::uint64_t rest = later; rest; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      adj[u] |= later & ~(std::uint64_t{1} << u);
    }
    gone |= std::uint64_t{1} << v;
  }
  return width;
}

/// Optimal treewidth and a witnessing elimination order.
///
/// tw[S] is the best width achievable when the vertices of S are eliminated
/// first; eliminating v last within S costs |Q(S \ {v}, v)|, the number of
/// vertices outside S reachable from v through S.
inline EliminationResult treewidth_exact(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExactTreewidthVertices) {
    throw SizeError("exact treewidth supports at most " + std::to_string(kMaxExactTreewidthVertices) +
                    " vertices, got " + std::to_string(n));
  }
  if (n == 0) return {};
  const auto adj = detail::adjacency_masks(g);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;

  auto q_size = [&](std::uint64_t s, int v) {
    std::uint64_t reach = adj[v];
    std::uint64_t inside = reach & s;
    std::uint64_t done = 0;
    while (inside & ~done) {
      const int u = std::countr_zero(inside & ~done);
      done |= std::uint64_t{1} << u;
      reach |= adj[u];
      inside = reach & s;
    }
    return std::popcount(reach & ~s & ~(std::uint64_t{1} << v));
  };

  std::vector<std::int8_t> tw(std::size_t{1} << n, std::numeric_limits<std::int8_t>::max());
  std::vector<std::int8_t> last(std::size_t{1} << n, -1);
  tw[0] = -1;
  for (std::uint64_t s = 1; s <= all; ++s) {
    for (std::uint64_t rest = s; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const std::uint64_t without = s & ~(std::uint64_t{1} << v);
      const int cost = std::max<int>(tw[without], q_size(without, v));
      if (cost < tw[s]) {
        tw[s] = static_cast<std::int8_t>(cost);
        last[s] = static_cast<std::int8_t>(v);
      }
    }
  }

  EliminationResult out;
  out.width = std::max<int>(tw[all], 0);
  out.order.resize(n);
  std::uint64_t s = all;
  for (std::size_t pos = n; pos-- > 0;) {
    const int v = last[s];
    out.order[pos] = static_cast<Vertex>(v);
    s &= ~(std::uint64_t{1} << v);
  }
  return out;
}

/// Nice tree decomposition rooted at a node with an empty bag.
///
/// Leaves have empty bags; introduce and forget nodes differ from their only
/// child by `vertex`; join nodes have two children with the same bag. Bags
/// are kept sorted.
class TreeDecomposition {
 public:
  enum class NodeKind { leaf, introduce, forget, join };

  struct Node {
    NodeKind kind = NodeKind::leaf;
    std::vector<Vertex> bag;
    std::vector<std::size_t> children;
    Vertex vertex = 0;  // introduced / forgotten vertex
  };

  TreeDecomposition() = default;
  TreeDecomposition(std::vector<Node> nodes, std::size_t root) : nodes_(std::move(nodes)), root_(root) {
    std::size_t widest = 0;
    for (const auto& n : nodes_) widest = std::max(widest, n.bag.size());
    width_ = widest == 0 ? 0 : static_cast<int>(widest) - 1;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t root() const noexcept { return root_; }
  int width() const noexcept { return width_; }

  /// The decomposition tree T as a Graph on node indices.
  Graph tree() const {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t c : nodes_[i].children) es.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(c));
    }
    return Graph::from_edges(nodes_.size(), es);
  }

  /// Node indices with every child listed before its parent.
  std::vector<std::size_t> post_order() const {
    std::vector<std::size_t> out;
    out.reserve(nodes_.size());
    std::vector<std::pair<std::size_t, bool>> stack{{root_, false}};
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        out.push_back(t);
        continue;
      }
      stack.emplace_back(t, true);
      for (std::size_t c : nodes_[t].children) stack.emplace_back(c, false);
    }
    return out;
  }

 private:
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  int width_ = 0;
};

/// Reason the decomposition is invalid for `pattern`, or empty when valid.
/// Checks coverage of vertices and edges, connectivity of each vertex's
/// occurrence set, and the nice-form shape rules.
inline std::string validate_decomposition(const TreeDecomposition& td, const Graph& pattern) {
  using Kind = TreeDecomposition::NodeKind;
  const auto& nodes = td.nodes();
  if (nodes.empty() || td.root() >= nodes.size()) return "no root node";
  if (!nodes[td.root()].bag.empty()) return "root bag must be empty";

  std::vector<int> parents(nodes.size(), 0);
  for (const auto& nd : nodes) {
    for (std::size_t c : nd.children) {
      if (c >= nodes.size()) return "child index out of range";
      ++parents[c];
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (parents[i] != (i == td.root() ? 0 : 1)) return "node " + std::to_string(i) + " does not have exactly one parent";
  }
  if (td.post_order().size() != nodes.size()) return "decomposition is not a tree";

  const std::size_t n = pattern.num_vertices();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    const auto& bag = nd.bag;
    if (!std::is_sorted(bag.begin(), bag.end()) || std::adjacent_find(bag.begin(), bag.end()) != bag.end()) {
      return "bag " + std::to_string(i) + " is not a sorted set";
    }
    if (!bag.empty() && bag.back() >= n) return "bag " + std::to_string(i) + " names a vertex outside the pattern";
    auto differs_by_one = [&](const std::vector<Vertex>& big, const std::vector<Vertex>& small, Vertex v) {
      if (big.size() != small.size() + 1 || !std::binary_search(big.begin(), big.end(), v)) return false;
      std::vector<Vertex> tmp;
      std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(tmp));
      return tmp.size() == 1 && tmp[0] == v;
    };
    switch (nd.kind) {
      case Kind::leaf:
        if (!nd.children.empty() || !bag.empty()) return "leaf " + std::to_string(i) + " must be childless with an empty bag";
        break;
      case Kind::introduce:
        if (nd.children.size() != 1 || !differs_by_one(bag, nodes[nd.children[0]].bag, nd.vertex)) {
          return "introduce node " + std::to_string(i) + " is malformed";
        }
        break;
      case Kind::forget:
        if (nd.children.size() != 1 || !differs_by_one(nodes[nd.children[0]].bag, bag, nd.vertex)) {
          return "forget node " + std::to_string(i) + " is malformed";
        }
        break;
      case Kind::join:
        if (nd.children.size() != 2 || nodes[nd.children[0]].bag != bag || nodes[nd.children[1]].bag != bag) {
          return "join node " + std::to_string(i) + " is malformed";
        }
        break;
    }
  }

  // Condition (1) and (3): occurrences of each vertex form one subtree.
  std::vector<std::size_t> occurrences(n, 0), links(n, 0);
  for (const auto& nd : nodes) {
    for (Vertex v : nd.bag) ++occurrences[v];
    for (std::size_t c : nd.children) {
      for (Vertex v : nd.bag) {
        const auto& cb = nodes[c].bag;
        if (std::binary_search(cb.begin(), cb.end(), v)) ++links[v];
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (occurrences[v] == 0) return "vertex " + std::to_string(v) + " is in no bag";
    if (links[v] + 1 != occurrences[v]) return "bags containing vertex " + std::to_string(v) + " are not connected";
  }
  // Condition (2).
  for (auto [u, v] : pattern.edges()) {
    bool covered = std::any_of(nodes.begin(), nodes.end(), [&](const auto& nd) {
      return std::binary_search(nd.bag.begin(), nd.bag.end(), u) && std::binary_search(nd.bag.begin(), nd.bag.end(), v);
    });
    if (!covered) return "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") is in no bag";
  }
  return {};
}

/// Nice tree decomposition whose width equals the elimination width of
/// `order`.
inline TreeDecomposition build_nice_decomposition(const Graph& g, std::span<const Vertex> order) {
  using Kind = TreeDecomposition::NodeKind;
  using Node = TreeDecomposition::Node;
  detail::check_order(g, order);
  const std::size_t n = g.num_vertices();

  // Elimination tree: bag(v) = {v} + later neighbors in the fill-in graph,
  // hung below the bag of the earliest-eliminated later neighbor.
  auto adj = detail::adjacency_masks(g);
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;
  std::vector<std::vector<Vertex>> bag(n);
  std::vector<std::vector<Vertex>> kids(n);
  std::vector<Vertex> tops;
  std::uint64_t gone = 0;
  for (Vertex v : order) {
    const std::uint64_t later = adj[v] & ~gone & ~(std::uint64_t{1} << v);
    bag[v].push_back(v);
    Vertex parent = v;
    for (std::uint64_t rest = later; rest; rest &= rest - 1) {
      const auto u = static_cast<Vertex>(std::countr_zero(rest));
      adj[u] |= later & ~(std::uint64_t{1} << u);
      bag[v].push_back(u);
      if (parent == v || position[u] < position[parent]) parent = u;
    }
    std::sort(bag[v].begin(), bag[v].end());
    if (parent == v) {
      tops.push_back(v);
    } else {
      kids[parent].push_back(v);
    }
    gone |= std::uint64_t{1} << v;
  }

  std::vector<Node> nodes;
  auto add = [&](Node nd) {
    nodes.push_back(std::move(nd));
    return nodes.size() - 1;
  };
  auto step = [&](std::size_t child, Kind kind, Vertex v) {
    Node nd;
    nd.kind = kind;
    nd.vertex = v;
    nd.children = {child};
    nd.bag = nodes[child].bag;
    if (kind == Kind::introduce) {
      nd.bag.insert(std::lower_bound(nd.bag.begin(), nd.bag.end(), v), v);
    } else {
      nd.bag.erase(std::find(nd.bag.begin(), nd.bag.end(), v));
    }
    return add(std::move(nd));
  };
  // Walks from `from`'s bag to `target`: forget first, then introduce.
  auto morph = [&](std::size_t from, const std::vector<Vertex>& target) {
    const std::vector<Vertex> have = nodes[from].bag;
    for (Vertex v : have) {
      if (!std::binary_search(target.begin(), target.end(), v)) from = step(from, Kind::forget, v);
    }
    for (Vertex v : target) {
      if (!std::binary_search(have.begin(), have.end(), v)) from = step(from, Kind::introduce, v);
    }
    return from;
  };
  auto join_all = [&](std::vector<std::size_t> parts) {
    while (parts.size() > 1) {
      Node nd;
      nd.kind = Kind::join;
      nd.bag = nodes[parts[parts.size() - 2]].bag;
      nd.children = {parts[parts.size() - 2], parts.back()};
      parts.pop_back();
      parts.back() = add(std::move(nd));
    }
    return parts.front();
  };

  // Children of every elimination-tree node appear earlier in `order`, so
  // one forward pass builds each subtree before its parent needs it.
  std::vector<std::size_t> built(n);
  for (Vertex v : order) {
    std::vector<std::size_t> parts;
    if (kids[v].empty()) {
      parts.push_back(morph(add(Node{}), bag[v]));
    } else {
      for (Vertex c : kids[v]) parts.push_back(morph(built[c], bag[v]));
    }
    built[v] = join_all(std::move(parts));
  }

  std::vector<std::size_t> roots;
  for (Vertex t : tops) roots.push_back(morph(built[t], {}));
  if (roots.empty()) roots.push_back(add(Node{}));
  const std::size_t root = join_all(std::move(roots));
  return TreeDecomposition(std::move(nodes), root);
}

}  // namespace homcount
