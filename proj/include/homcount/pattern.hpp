// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homcount/decomposition.hpp"
#include "homcount/errors.hpp"
#include "homcount/graph.hpp"

namespace homcount {

inline constexpr std::size_t kMaxTreeCatalogSize = 12;

enum class PatternFamily { tree, cycle, star, path, custom };

inline std::string_view to_string(PatternFamily f) {
  switch (f) {
    case PatternFamily::tree: return "tree";
    case PatternFamily::cycle: return "cycle";
    case PatternFamily::star: return "star";
    case PatternFamily::path: return "path";
    case PatternFamily::custom: return "custom";
  }
  return "custom";
}

/// A small pattern graph F together with what the counting engines need.
struct Pattern {
  Graph graph;
  PatternFamily family = PatternFamily::custom;
  std::string name;
  std::string canonical_code;
  /// Present for patterns that are not trees or cycles.
  std::optional<TreeDecomposition> decomposition;

  std::size_t size() const noexcept { return graph.num_vertices(); }
};

inline bool is_tree(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0 || g.num_edges() != n - 1) return false;
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

namespace detail {

// AHU encoding of the subtree below `root`, children sorted by code.
inline std::string rooted_code(const Graph& g, Vertex root) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> parent(n, root), order;
  order.reserve(n);
  std::vector<Vertex> stack{root};
  std::vector<bool> seen(n, false);
  seen[root] = true;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (Vertex v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  std::vector<std::vector<std::string>> child_codes(n);
  std::vector<std::string> code(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex u = *it;
    auto& kids = child_codes[u];
    std::sort(kids.begin(), kids.end());
    code[u] = "(";
    for (auto& k : kids) code[u] += k;
    code[u] += ")";
    if (u != root) child_codes[parent[u]].push_back(std::move(code[u]));
  }
  return code[root];
}

inline std::vector<Vertex> tree_centers(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n <= 2) {
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    return all;
  }
  std::vector<std::size_t> deg(n);
  std::vector<Vertex> layer;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] == 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<Vertex> next;
    for (Vertex leaf : layer) {
      for (Vertex v : g.neighbors(leaf)) {
        if (--deg[v] == 1) next.push_back(v);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

}  // namespace detail

/// Rooted-at-center AHU code; equal codes iff the trees are isomorphic.
inline std::string canonical_tree_code(const Graph& g) {
  if (!is_tree(g)) throw DomainError("canonical_tree_code: input is not a tree");
  std::string best;
  for (Vertex c : detail::tree_centers(g)) {
    std::string code = detail::rooted_code(g, c);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

/// Inverse of the AHU encoding: vertices numbered in preorder, root 0.
inline Graph tree_from_code(std::string_view code) {
  std::vector<Edge> edges;
  std::vector<Vertex> stack;
  Vertex next = 0;
  for (char ch : code) {
    if (ch == '(') {
      if (!stack.empty()) edges.emplace_back(stack.back(), next);
      stack.push_back(next++);
    } else if (ch == ')') {
      if (stack.empty()) throw DomainError("unbalanced tree code");
      stack.pop_back();
    } else {
      throw DomainError("tree code may only contain parentheses");
    }
  }
  if (!stack.empty() || next == 0) throw DomainError("unbalanced tree code");
  return Graph::from_edges(next, edges);
}

namespace detail {

// Leaves-first order of a tree (reverse BFS from vertex 0): width 1.
inline std::vector<Vertex> tree_elimination_order(const Graph& g) {
  std::vector<Vertex> bfs{0};
  std::vector<bool> seen(g.num_vertices(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (Vertex v : g.neighbors(bfs[i])) {
      if (!seen[v]) {
        seen[v] = true;
        bfs.push_back(v);
      }
    }
  }
  std::reverse(bfs.begin(), bfs.end());
  return bfs;
}

// Minimum upper-triangle adjacency string over all relabelings.
inline std::string brute_canonical_code(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::string best;
  do {
    std::string s(n * (n - 1) / 2, '0');
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        if (g.has_edge(perm[i], perm[j])) s[k] = '1';
      }
    }
    if (best.empty() || s > best) best = std::move(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::to_string(n) + ":" + best;
}

}  // namespace detail

/// Relabelings are tried exhaustively up to this size.
inline constexpr std::size_t kMaxBruteCanonicalVertices = 9;

/// Canonical code for an arbitrary pattern. Trees get their AHU code, small
/// graphs an adjacency code minimized over relabelings; anything larger keeps
/// its literal adjacency string (prefixed "raw:") and is not canonical.
inline std::string canonical_code(const Graph& g) {
  if (is_tree(g)) return canonical_tree_code(g);
  if (g.num_vertices() <= kMaxBruteCanonicalVertices) return detail::brute_canonical_code(g);
  std::string s = "raw:" + std::to_string(g.num_vertices());
  for (auto [u, v] : g.edges()) s += " " + std::to_string(u) + "-" + std::to_string(v);
  return s;
}

inline Pattern make_tree_pattern(Graph g, PatternFamily family, std::string name) {
  Pattern p;
  p.canonical_code = canonical_tree_code(g);
  p.graph = std::move(g);
  p.family = family;
  p.name = std::move(name);
  return p;
}

/// Pattern with family `custom`; trees dispatch to the tree DP, everything
/// else carries an optimal nice decomposition.
inline Pattern make_custom_pattern(Graph g, std::string name) {
  Pattern p;
  p.canonical_code = canonical_code(g);
  if (!is_tree(g)) {
    auto tw = treewidth_exact(g);
    p.decomposition = build_nice_decomposition(g, tw.order);
  }
  p.graph = std::move(g);
  p.family = PatternFamily::custom;
  p.name = std::move(name);
  return p;
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> es;
  for (Vertex i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph::from_edges(n, es);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw ParameterError("a simple cycle needs at least 3 vertices");
  std::vector<Edge> es;
  for (Vertex i = 0; i < n; ++i) es.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph::from_edges(n, es);
}

/// S_k: center 0 joined to k leaves.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> es;
  for (Vertex i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, es);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) es.emplace_back(i, j);
  }
  return Graph::from_edges(n, es);
}

/// The cycle C_k as a pattern (k >= 3). k = 2 yields the single edge, whose
/// count is the closed-walk number tr(A^2).
inline Pattern cycle_pattern(std::size_t k) {
  Pattern p;
  p.graph = k == 2 ? path_graph(2) : cycle_graph(k);
  p.family = PatternFamily::cycle;
  p.name = "C" + std::to_string(k);
  p.canonical_code = p.name;
  return p;
}

/// Every free tree with 2..max_size vertices, one per isomorphism class,
/// ordered by (size, canonical code).
inline std::vector<Pattern> enumerate_trees(std::size_t max_size) {
  if (max_size < 2) throw ParameterError("enumerate_trees: max_size must be at least 2");
  if (max_size > kMaxTreeCatalogSize) {
    throw ParameterError("enumerate_trees: max_size " + std::to_string(max_size) + " exceeds the limit of " +
                         std::to_string(kMaxTreeCatalogSize));
  }
  std::vector<Pattern> out;
  std::set<std::string> layer{canonical_tree_code(path_graph(2))};
  for (std::size_t size = 2;; ++size) {
    std::size_t idx = 0;
    for (const auto& code : layer) {
      out.push_back(make_tree_pattern(tree_from_code(code), PatternFamily::tree,
                                      "T" + std::to_string(size) + "_" + std::to_string(idx++)));
    }
    if (size == max_size) break;
    std::set<std::string> next;
    for (const auto& code : layer) {
      const Graph t = tree_from_code(code);
      auto es = t.edges();
      const auto leaf = static_cast<Vertex>(t.num_vertices());
      for (Vertex v = 0; v < t.num_vertices(); ++v) {
        es.emplace_back(v, leaf);
        next.insert(canonical_tree_code(Graph::from_edges(t.num_vertices() + 1, es)));
        es.pop_back();
      }
    }
    layer = std::move(next);
  }
  return out;
}

/// The single-edge pattern followed by C_3 .. C_max_size.
inline std::vector<Pattern> enumerate_cycles(std::size_t max_size) {
  if (max_size < 3) throw ParameterError("enumerate_cycles: max_size must be at least 3");
  std::vector<Pattern> out;
  for (std::size_t k = 2; k <= max_size; ++k) out.push_back(cycle_pattern(k));
  return out;
}

/// S_1 .. S_{max_size-1} (2..max_size vertices).
inline std::vector<Pattern> enumerate_stars(std::size_t max_size) {
  if (max_size < 2) throw ParameterError("enumerate_stars: max_size must be at least 2");
  std::vector<Pattern> out;
  for (std::size_t k = 1; k + 1 <= max_size; ++k) {
    out.push_back(make_tree_pattern(star_graph(k), PatternFamily::star, "S" + std::to_string(k)));
  }
  return out;
}

/// P_2 .. P_max_size, P_k having k vertices.
inline std::vector<Pattern> enumerate_paths(std::size_t max_size) {
  if (max_size < 2) throw ParameterError("enumerate_paths: max_size must be at least 2");
  std::vector<Pattern> out;
  for (std::size_t k = 2; k <= max_size; ++k) {
    out.push_back(make_tree_pattern(path_graph(k), PatternFamily::path, "P" + std::to_string(k)));
  }
  return out;
}

/// The one-vertex pattern; its hom count is the (weighted) vertex count.
inline Pattern single_vertex_pattern() { return make_custom_pattern(Graph::from_edges(1, {}), "K1"); }

/// Reads custom patterns: each block is a vertex count line followed by
/// `u v` edge lines (0-based); blocks are separated by blank lines. Lines
/// starting with '#' are ignored.
inline std::vector<Pattern> parse_patterns(std::istream& in, const std::string& source = "<patterns>") {
  std::vector<Pattern> out;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  auto flush = [&]() {
    if (!n) return;
    try {
      out.push_back(make_custom_pattern(Graph::from_edges(*n, edges), "F" + std::to_string(out.size())));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
    n.reset();
    edges.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!n) {
      if (!(ls >> a) || a < 0 || !(ls >> std::ws).eof()) throw ParseError(source, line_no, "expected a vertex count");
      n = static_cast<std::size_t>(a);
      continue;
    }
    if (!(ls >> a >> b) || !(ls >> std::ws).eof() || a < 0 || b < 0) {
      throw ParseError(source, line_no, "expected an edge 'u v'");
    }
    if (static_cast<std::size_t>(a) >= *n || static_cast<std::size_t>(b) >= *n) {
      throw ParseError(source, line_no, "edge endpoint out of range");
    }
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  flush();
  return out;
}

inline std::vector<Pattern> load_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pattern file " + path);
  return parse_patterns(in, path);
}

}  // namespace homcount
