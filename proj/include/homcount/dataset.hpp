// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homcount/errors.hpp"
#include "homcount/graph.hpp"
#include "homcount/hom.hpp"
#include "homcount/pattern.hpp"
#include "homcount/random.hpp"
#include "json.hpp"

namespace homcount {

struct Provenance {
  enum class Source { tud, generated };
  Source source = Source::tud;
  std::optional<std::uint64_t> seed;
  /// Generator name and parameters for generated bundles.
  nlohmann::json params = nlohmann::json::object();
};

/// Graphs, optional per-vertex features and 0-based class labels.
struct DatasetBundle {
  std::string name;
  std::vector<Graph> graphs;
  std::optional<std::vector<FeatureMatrix>> features;
  /// Leading feature columns that one-hot encode discrete node labels.
  std::size_t label_columns = 0;
  std::vector<int> labels;
  Provenance provenance;

  std::size_t size() const noexcept { return graphs.size(); }

  std::size_t num_classes() const {
    return labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
  }

  std::size_t feature_dim() const {
    if (!features || features->empty()) return 0;
    return features->front().cols();
  }

  double mean_num_vertices() const {
    if (graphs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& g : graphs) s += static_cast<double>(g.num_vertices());
    return s / static_cast<double>(graphs.size());
  }

  /// Graph i with its features, or unit scalar weights when feature-less.
  FeaturedGraph featured(std::size_t i) const {
    if (features) return FeaturedGraph(graphs[i], (*features)[i]);
    return FeaturedGraph::unit(graphs[i]);
  }

  /// Throws ValidationError unless labels are contiguous with no empty
  /// class and features line up with graphs.
  void validate() const {
    if (labels.size() != graphs.size()) throw ValidationError(name + ": label count != graph count");
    if (!features && label_columns > 0) throw ValidationError(name + ": label columns without features");
    if (features) {
      if (features->size() != graphs.size()) throw ValidationError(name + ": feature count != graph count");
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto& x = (*features)[i];
        if (x.rows() != graphs[i].num_vertices()) throw ValidationError(name + ": feature rows misaligned");
        if (x.cols() != feature_dim()) throw ValidationError(name + ": inconsistent feature dimension");
        if (label_columns > x.cols()) throw ValidationError(name + ": more label columns than features");
        for (double v : x.data()) {
          if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name + ": feature outside [0, 1]");
        }
      }
    }
    std::vector<std::size_t> per_class(num_classes(), 0);
    for (int y : labels) {
      if (y < 0) throw ValidationError(name + ": negative label");
      ++per_class[static_cast<std::size_t>(y)];
    }
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      if (per_class[c] == 0) throw ValidationError(name + ": class " + std::to_string(c) + " is empty");
    }
  }
};

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
  return lines;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline long long parse_int(std::string_view tok, const std::string& file, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(file, line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline double parse_real(std::string_view tok, const std::string& file, std::size_t line) {
  // from_chars for double is missing from older libstdc++; strtod on a copy.
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ParseError(file, line, "expected a real number, got '" + s + "'");
  }
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json provenance_json(const Provenance& p) {
  nlohmann::json j;
  j["source"] = p.source == Provenance::Source::tud ? "tud" : "generated";
  j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
  j["params"] = p.params;
  return j;
}

}  // namespace detail

/// Reads a TU-Dortmund dataset from `dir`.
///
/// Vertex ids shift from 1-based global to 0-based per graph; edges are
/// symmetrized and deduplicated (self-loops are dropped). Node labels become
/// one-hot columns, node attributes follow them; attribute columns that leave
/// [0, 1] are min-max scaled. Graph labels map to 0..C-1 in sorted order. A
/// `<name>_meta.json` sidecar, when present, restores the provenance.
inline DatasetBundle parse_tud(const std::filesystem::path& dir, const std::string& name) {
  namespace fs = std::filesystem;
  auto file = [&](const char* suffix) { return dir / (name + suffix); };

  DatasetBundle b;
  b.name = name;

  const auto ind_path = file("_graph_indicator.txt");
  const auto ind = detail::read_lines(ind_path);
  const std::size_t nv = ind.size();
  std::vector<std::size_t> graph_of(nv), local(nv);
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < nv; ++i) {
    const auto gid = detail::parse_int(detail::trim(ind[i]), ind_path.string(), i + 1);
    if (gid < 1) throw FormatError(ind_path.string(), i + 1, "graph ids are 1-based");
    const auto g = static_cast<std::size_t>(gid - 1);
    if (g >= sizes.size()) sizes.resize(g + 1, 0);
    graph_of[i] = g;
    local[i] = sizes[g]++;
  }

  const auto lab_path = file("_graph_labels.txt");
  const auto lab = detail::read_lines(lab_path);
  if (lab.size() < sizes.size()) {
    throw FormatError(lab_path.string(), lab.size(), "fewer graph labels than graphs");
  }
  sizes.resize(lab.size(), 0);
  std::vector<long long> raw_labels;
  for (std::size_t i = 0; i < lab.size(); ++i) {
    raw_labels.push_back(detail::parse_int(detail::trim(lab[i]), lab_path.string(), i + 1));
  }
  std::set<long long> distinct(raw_labels.begin(), raw_labels.end());
  std::map<long long, int> class_of;
  for (long long v : distinct) class_of.emplace(v, static_cast<int>(class_of.size()));
  for (long long v : raw_labels) b.labels.push_back(class_of.at(v));

  const auto a_path = file("_A.txt");
  const auto a = detail::read_lines(a_path);
  std::vector<std::vector<Edge>> edges(sizes.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto toks = detail::split_commas(a[i]);
    if (toks.size() != 2) throw ParseError(a_path.string(), i + 1, "expected 'u, v'");
    const auto u = detail::parse_int(toks[0], a_path.string(), i + 1);
    const auto v = detail::parse_int(toks[1], a_path.string(), i + 1);
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > nv || static_cast<std::size_t>(v) > nv) {
      throw FormatError(a_path.string(), i + 1, "vertex id out of range");
    }
    const auto uu = static_cast<std::size_t>(u - 1), vv = static_cast<std::size_t>(v - 1);
    if (graph_of[uu] != graph_of[vv]) throw FormatError(a_path.string(), i + 1, "edge crosses a graph boundary");
    if (uu == vv) continue;
    edges[graph_of[uu]].emplace_back(static_cast<Vertex>(local[uu]), static_cast<Vertex>(local[vv]));
  }
  for (std::size_t g = 0; g < sizes.size(); ++g) b.graphs.push_back(Graph::from_edges(sizes[g], edges[g]));

  // Per-vertex feature columns, global vertex order.
  std::vector<std::vector<double>> columns;
  if (const auto nl_path = file("_node_labels.txt"); fs::exists(nl_path)) {
    const auto nl = detail::read_lines(nl_path);
    if (nl.size() != nv) throw FormatError(nl_path.string(), nl.size(), "node label count != vertex count");
    std::vector<long long> raw;
    for (std::size_t i = 0; i < nv; ++i) {
      raw.push_back(detail::parse_int(detail::split_commas(nl[i]).front(), nl_path.string(), i + 1));
    }
    std::set<long long> kinds(raw.begin(), raw.end());
    std::map<long long, std::size_t> col;
    for (long long k : kinds) col.emplace(k, col.size());
    const std::size_t base = columns.size();
    columns.resize(base + kinds.size(), std::vector<double>(nv, 0.0));
    for (std::size_t i = 0; i < nv; ++i) columns[base + col.at(raw[i])][i] = 1.0;
    b.label_columns = kinds.size();
  }
  if (const auto at_path = file("_node_attributes.txt"); fs::exists(at_path)) {
    const auto at = detail::read_lines(at_path);
    if (at.size() != nv) throw FormatError(at_path.string(), at.size(), "node attribute count != vertex count");
    std::size_t width = 0;
    std::vector<std::vector<double>> attr;
    for (std::size_t i = 0; i < nv; ++i) {
      auto toks = detail::split_commas(at[i]);
      if (i == 0) {
        width = toks.size();
        attr.assign(width, std::vector<double>(nv));
      }
      if (toks.size() != width) throw FormatError(at_path.string(), i + 1, "inconsistent attribute count");
      for (std::size_t c = 0; c < width; ++c) attr[c][i] = detail::parse_real(toks[c], at_path.string(), i + 1);
    }
    for (auto& colv : attr) {
      const auto [lo, hi] = std::minmax_element(colv.begin(), colv.end());
      const double mn = *lo, mx = *hi;
      if (mn < 0.0 || mx > 1.0) {
        for (double& x : colv) x = mx > mn ? (x - mn) / (mx - mn) : 0.0;
      }
      columns.push_back(std::move(colv));
    }
  }
  if (!columns.empty()) {
    std::vector<FeatureMatrix> feats;
    for (std::size_t g = 0; g < sizes.size(); ++g) feats.emplace_back(sizes[g], columns.size());
    for (std::size_t i = 0; i < nv; ++i) {
      for (std::size_t c = 0; c < columns.size(); ++c) feats[graph_of[i]](local[i], c) = columns[c][i];
    }
    b.features = std::move(feats);
  }

  if (const auto meta = file("_meta.json"); fs::exists(meta)) {
    std::ifstream in(meta);
    try {
      const auto j = nlohmann::json::parse(in).at("provenance");
      b.provenance.source = j.at("source") == "generated" ? Provenance::Source::generated : Provenance::Source::tud;
      if (!j.at("seed").is_null()) b.provenance.seed = j.at("seed").get<std::uint64_t>();
      b.provenance.params = j.at("params");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta.string(), 1, e.what());
    }
  }
  b.validate();
  return b;
}

/// Writes `b` in TU format under `dir` (created if needed) plus a
/// `<name>_meta.json` sidecar with the provenance. Features that are one-hot
/// in every row go to `_node_labels.txt`, anything else to
/// `_node_attributes.txt`.
inline void write_tud(const DatasetBundle& b, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  b.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* suffix) {
    std::ofstream out(dir / (b.name + suffix));
    if (!out) throw IoError("cannot write " + (dir / (b.name + suffix)).string());
    return out;
  };

  auto a = open("_A.txt");
  auto ind = open("_graph_indicator.txt");
  auto lab = open("_graph_labels.txt");
  std::size_t offset = 0;
  for (std::size_t g = 0; g < b.graphs.size(); ++g) {
    const auto& gr = b.graphs[g];
    for (Vertex u = 0; u < gr.num_vertices(); ++u) {
      ind << (g + 1) << '\n';
      for (Vertex v : gr.neighbors(u)) a << (offset + u + 1) << ", " << (offset + v + 1) << '\n';
    }
    lab << b.labels[g] << '\n';
    offset += gr.num_vertices();
  }

  if (b.features && b.feature_dim() > 0) {
    bool one_hot = true;
    for (const auto& x : *b.features) {
      for (std::size_t r = 0; r < x.rows() && one_hot; ++r) {
        auto row = x.row(r);
        const auto ones = std::count(row.begin(), row.end(), 1.0);
        const auto zeros = std::count(row.begin(), row.end(), 0.0);
        one_hot = ones == 1 && static_cast<std::size_t>(ones + zeros) == row.size();
      }
    }
    if (one_hot) {
      auto nl = open("_node_labels.txt");
      for (const auto& x : *b.features) {
        for (std::size_t r = 0; r < x.rows(); ++r) {
          auto row = x.row(r);
          nl << (std::find(row.begin(), row.end(), 1.0) - row.begin()) << '\n';
        }
      }
    } else {
      auto at = open("_node_attributes.txt");
      for (const auto& x : *b.features) {
        for (std::size_t r = 0; r < x.rows(); ++r) {
          for (std::size_t c = 0; c < x.cols(); ++c) at << (c ? ", " : "") << detail::format_real(x(r, c));
          at << '\n';
        }
      }
    }
  }

  auto meta = open("_meta.json");
  nlohmann::json j;
  j["name"] = b.name;
  j["num_graphs"] = b.size();
  j["num_classes"] = b.num_classes();
  j["provenance"] = detail::provenance_json(b.provenance);
  meta << j.dump(2) << '\n';
}

/// Circular skip link parameters. The default skip set reproduces the
/// standard 10-class benchmark on 41 vertices.
struct CslSpec {
  std::size_t num_vertices = 41;
  std::vector<std::size_t> skips{2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
  std::size_t copies_per_class = 15;
};

/// Cycle 0..n-1 plus chords {i, i + skip mod n}.
inline Graph csl_graph(std::size_t n, std::size_t skip) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < n; ++i) {
    es.emplace_back(i, static_cast<Vertex>((i + 1) % n));
    es.emplace_back(i, static_cast<Vertex>((i + skip) % n));
  }
  return Graph::from_edges(n, es);
}

/// One class per skip, each holding vertex-permuted copies of the class
/// template. Rejects skips that break 4-regularity or that give two classes
/// identical cycle homomorphism vectors (cycles up to 8).
inline DatasetBundle gen_csl(const CslSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.num_vertices;
  if (n < 5) throw ParameterError("CSL needs at least 5 vertices");
  if (spec.skips.empty()) throw ParameterError("CSL needs at least one skip");
  if (spec.copies_per_class == 0) throw ParameterError("copies_per_class must be positive");
  std::vector<Graph> templates;
  const auto cycles = enumerate_cycles(8);
  std::set<std::vector<double>> signatures;
  for (std::size_t r : spec.skips) {
    if (r < 2 || 2 * r > n) {
      throw ParameterError("CSL skip " + std::to_string(r) + " must lie in [2, n/2]");
    }
    Graph t = csl_graph(n, r);
    for (Vertex v = 0; v < n; ++v) {
      if (t.degree(v) != 4) throw ParameterError("CSL skip " + std::to_string(r) + " does not give a 4-regular graph");
    }
    if (!signatures.insert(hom_vector(cycles, t)).second) {
      throw ParameterError("CSL skip " + std::to_string(r) + " is indistinguishable from an earlier skip by cycles");
    }
    templates.push_back(std::move(t));
  }

  DatasetBundle b;
  b.name = "CSL";
  Rng rng(seed);
  for (std::size_t c = 0; c < templates.size(); ++c) {
    for (std::size_t k = 0; k < spec.copies_per_class; ++k) {
      b.graphs.push_back(permute(templates[c], rng.permutation(n)));
      b.labels.push_back(static_cast<int>(c));
    }
  }
  b.provenance.source = Provenance::Source::generated;
  b.provenance.seed = seed;
  b.provenance.params = {{"generator", "csl"},
                         {"num_vertices", n},
                         {"skips", spec.skips},
                         {"copies_per_class", spec.copies_per_class}};
  return b;
}

struct BipartiteErSpec {
  std::size_t total = 200;
  std::size_t min_vertices = 40;
  std::size_t max_vertices = 100;
  double p_bipartite = 0.2;
  double p_er = 0.1;
};

/// Class 0: random bipartite graphs (parts ceil(n/2) and floor(n/2), each
/// cross pair kept with p_bipartite). Class 1: G(n, p_er), resampled while it
/// happens to be bipartite. Vertex counts uniform on [min, max]; every graph
/// is relabeled by a random permutation.
inline DatasetBundle gen_bipartite_er(const BipartiteErSpec& spec, std::uint64_t seed) {
  if (spec.min_vertices < 2 || spec.min_vertices > spec.max_vertices) {
    throw ParameterError("bipartite/ER vertex range must satisfy 2 <= min <= max");
  }
  if (!(spec.p_bipartite > 0.0 && spec.p_bipartite <= 1.0) || !(spec.p_er > 0.0 && spec.p_er <= 1.0)) {
    throw ParameterError("edge probabilities must lie in (0, 1]");
  }
  if (spec.total < 2) throw ParameterError("need at least two graphs");
  DatasetBundle b;
  b.name = "BIPARTITE";
  Rng rng(seed);
  const std::size_t half = spec.total / 2;
  for (std::size_t i = 0; i < spec.total; ++i) {
    const int label = i < half ? 0 : 1;
    const auto n = static_cast<std::size_t>(rng.uniform_int(spec.min_vertices, spec.max_vertices));
    Graph g;
    if (label == 0) {
      const std::size_t left = (n + 1) / 2;
      std::vector<Edge> es;
      for (Vertex u = 0; u < left; ++u) {
        for (Vertex v = static_cast<Vertex>(left); v < n; ++v) {
          if (rng.bernoulli(spec.p_bipartite)) es.emplace_back(u, v);
        }
      }
      g = Graph::from_edges(n, es);
    } else {
      do {
        std::vector<Edge> es;
        for (Vertex u = 0; u < n; ++u) {
          for (Vertex v = u + 1; v < n; ++v) {
            if (rng.bernoulli(spec.p_er)) es.emplace_back(u, v);
          }
        }
        g = Graph::from_edges(n, es);
      } while (is_bipartite(g));
    }
    b.graphs.push_back(permute(g, rng.permutation(n)));
    b.labels.push_back(label);
  }
  b.provenance.source = Provenance::Source::generated;
  b.provenance.seed = seed;
  b.provenance.params = {{"generator", "bipartite_er"},
                         {"total", spec.total},
                         {"min_vertices", spec.min_vertices},
                         {"max_vertices", spec.max_vertices},
                         {"p_bipartite", spec.p_bipartite},
                         {"p_er", spec.p_er}};
  return b;
}

inline constexpr std::size_t kPaulusVertices = 25;
inline constexpr std::size_t kPaulusDegree = 12;
inline constexpr std::size_t kPaulusGraphs = 14;

/// Parses blocks of 0/1 adjacency rows separated by blank lines and checks
/// each is a symmetric, loop-free, 12-regular graph on 25 vertices.
inline std::vector<Graph> parse_paulus(std::istream& in, const std::string& source = "<paulus>") {
  std::vector<Graph> out;
  std::vector<std::string> rows;
  std::size_t line_no = 0, block_start = 1;
  auto flush = [&]() {
    if (rows.empty()) return;
    const std::size_t n = rows.size();
    if (n != kPaulusVertices) {
      throw ValidationError(source + ": block at line " + std::to_string(block_start) + " has " + std::to_string(n) +
                            " rows, expected " + std::to_string(kPaulusVertices));
    }
    std::vector<Edge> es;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (rows[i][j] != rows[j][i] || (i == j && rows[i][j] == '1')) {
          throw ValidationError(source + ": block at line " + std::to_string(block_start) + " is not a simple graph");
        }
        if (i < j && rows[i][j] == '1') es.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
    Graph g = Graph::from_edges(n, es);
    for (Vertex v = 0; v < n; ++v) {
      if (g.degree(v) != kPaulusDegree) {
        throw ValidationError(source + ": block at line " + std::to_string(block_start) + " is not " +
                              std::to_string(kPaulusDegree) + "-regular");
      }
    }
    out.push_back(std::move(g));
    rows.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) {
      flush();
      block_start = line_no + 1;
      continue;
    }
    if (line.size() != kPaulusVertices || line.find_first_not_of("01") != std::string::npos) {
      throw ParseError(source, line_no, "expected " + std::to_string(kPaulusVertices) + " characters in {0,1}");
    }
    rows.push_back(line);
  }
  flush();
  return out;
}

/// Paulus dataset: each of the 14 template graphs replicated under random
/// vertex permutations, one class per template.
inline DatasetBundle load_paulus(const std::filesystem::path& file, std::size_t copies_per_class, std::uint64_t seed) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  auto templates = parse_paulus(in, file.string());
  if (templates.size() != kPaulusGraphs) {
    throw ValidationError(file.string() + ": expected " + std::to_string(kPaulusGraphs) + " graphs, found " +
                          std::to_string(templates.size()));
  }
  if (copies_per_class == 0) throw ParameterError("copies_per_class must be positive");
  DatasetBundle b;
  b.name = "PAULUS25";
  Rng rng(seed);
  for (std::size_t c = 0; c < templates.size(); ++c) {
    for (std::size_t k = 0; k < copies_per_class; ++k) {
      b.graphs.push_back(permute(templates[c], rng.permutation(kPaulusVertices)));
      b.labels.push_back(static_cast<int>(c));
    }
  }
  b.provenance.source = Provenance::Source::generated;
  b.provenance.seed = seed;
  b.provenance.params = {{"generator", "paulus"}, {"copies_per_class", copies_per_class}};
  return b;
}

}  // namespace homcount
