// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: patterns, hom, gen, embed, eval, bench.
// Exit status: 0 success, 1 usage error, 2 data or validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homcount/dataset.hpp"
#include "homcount/embed.hpp"
#include "homcount/eval.hpp"
#include "homcount/hom.hpp"
#include "homcount/pattern.hpp"
#include "json.hpp"

#ifndef HOMCOUNT_DEFAULT_PAULUS
#define HOMCOUNT_DEFAULT_PAULUS "paulus25.txt"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace homcount;

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

struct Source {
  std::string dataset;
  std::string name;
  std::string generate;
  std::string embedding;
  std::size_t copies = 15;
  std::string paulus_file = HOMCOUNT_DEFAULT_PAULUS;
};

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw IoError("cannot write " + out);
  f << j.dump(2) << '\n';
}

json pattern_json(const Pattern& p) {
  json edges = json::array();
  for (auto [u, v] : p.graph.edges()) edges.push_back({u, v});
  return {{"name", p.name},
          {"family", to_string(p.family)},
          {"vertices", p.size()},
          {"edges", edges},
          {"canonical_code", p.canonical_code}};
}

json hom_json(const HomValue& h) {
  json j;
  if (h.is_exact()) {
    const Count c = h.count();
    j["value"] = c <= UINT64_MAX ? json(static_cast<std::uint64_t>(c)) : json(h.to_double());
    j["exact"] = h.to_string();
    j["mode"] = "exact";
  } else {
    j["value"] = h.to_double();
    j["mode"] = "real";
    j["promoted"] = h.promoted();
  }
  return j;
}

/// "edge", "triangle", "C<k>", "P<k>", "S<k>" (k leaves), "K<k>", or a
/// pattern file.
std::vector<Pattern> resolve_pattern(const std::string& spec) {
  if (spec == "edge") return {enumerate_paths(2).front()};
  if (spec == "triangle") return {cycle_pattern(3)};
  if (spec.size() > 1 && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
    const std::size_t k = std::stoul(spec.substr(1));
    switch (spec[0]) {
      case 'C': return {cycle_pattern(k)};
      case 'P': return {enumerate_paths(k).back()};
      case 'S': return {enumerate_stars(k + 1).back()};
      case 'K': {
        auto p = make_custom_pattern(complete_graph(k), "K" + std::to_string(k));
        return {p};
      }
      default: break;
    }
  }
  if (fs::exists(spec)) return load_patterns(spec);
  throw UsageError("unknown pattern '" + spec + "'");
}

DatasetBundle generate(const std::string& kind, const Source& src, std::uint64_t seed) {
  if (kind == "csl") {
    CslSpec spec;
    spec.copies_per_class = src.copies;
    return gen_csl(spec, seed);
  }
  if (kind == "bipartite") return gen_bipartite_er({}, seed);
  if (kind == "paulus") return load_paulus(src.paulus_file, src.copies, seed);
  throw UsageError("unknown generator '" + kind + "' (csl, bipartite, paulus)");
}

/// TU directory; the dataset name defaults to the only *_graph_indicator.txt.
DatasetBundle load_dataset(const Source& src) {
  std::string name = src.name;
  if (name.empty()) {
    if (!fs::is_directory(src.dataset)) throw IoError("dataset directory " + src.dataset + " not found");
    const std::string suffix = "_graph_indicator.txt";
    for (const auto& e : fs::directory_iterator(src.dataset)) {
      const auto f = e.path().filename().string();
      if (f.size() > suffix.size() && f.ends_with(suffix)) {
        if (!name.empty()) throw UsageError("several datasets in " + src.dataset + "; pass --name");
        name = f.substr(0, f.size() - suffix.size());
      }
    }
    if (name.empty()) throw IoError("no *_graph_indicator.txt in " + src.dataset);
  }
  return parse_tud(src.dataset, name);
}

DatasetBundle resolve_bundle(const Source& src, std::uint64_t seed) {
  if (!src.dataset.empty()) return load_dataset(src);
  if (!src.generate.empty()) return generate(src.generate, src, seed);
  throw UsageError("one of --dataset or --generate is required");
}

json source_json(const Source& src) {
  json j;
  if (!src.dataset.empty()) j["dataset"] = src.dataset;
  if (!src.name.empty()) j["name"] = src.name;
  if (!src.generate.empty()) {
    j["generate"] = src.generate;
    j["copies"] = src.copies;
    if (src.generate == "paulus") j["paulus_file"] = src.paulus_file;
  }
  if (!src.embedding.empty()) j["embedding"] = src.embedding;
  return j;
}

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  sc->add_option("--threads", c.threads, "Worker cap (0 = all cores)")->capture_default_str();
  sc->add_option("--out", c.out, "Output path (default: stdout)");
}

void add_source(CLI::App* sc, Source& s, bool allow_embedding) {
  auto* d = sc->add_option("--dataset", s.dataset, "TU-format dataset directory");
  auto* g = sc->add_option("--generate", s.generate, "Synthetic dataset: csl, bipartite, paulus");
  d->excludes(g);
  if (allow_embedding) {
    auto* e = sc->add_option("--embedding", s.embedding, "Embedding CSV written by `embed`");
    e->excludes(d)->excludes(g);
  }
  sc->add_option("--name", s.name, "Dataset name inside --dataset");
  sc->add_option("--copies", s.copies, "Copies per class for csl/paulus")->capture_default_str();
  sc->add_option("--paulus-file", s.paulus_file, "Paulus adjacency fixture")->capture_default_str();
}

struct EmbedFlags {
  std::string family = "trees:6";
  std::vector<std::string> phis;
  bool density = false;
  bool log1p = false;
};

void add_embed_flags(CLI::App* sc, EmbedFlags& f) {
  sc->add_option("--family", f.family, "trees:K, cycles:K, stars:K, paths:K or custom:FILE")->capture_default_str();
  sc->add_option("--phi", f.phis, "Vertex encodings: one, x<i> (default: one plus label columns)")->delimiter(',');
  sc->add_flag("--density", f.density, "Homomorphism densities instead of counts");
  sc->add_flag("--log1p", f.log1p, "Apply log(1 + x) to every cell");
}

EmbedConfig embed_config(const EmbedFlags& f, std::size_t threads) {
  EmbedConfig c;
  c.family = parse_family(f.family);
  for (const auto& p : f.phis) c.phis.push_back(parse_phi(p));
  c.options.density = f.density;
  c.options.log1p = f.log1p;
  c.options.threads = threads;
  return c;
}

struct HyperFlags {
  ClassifierHyper h;
  std::string solver = "lbfgs";
  std::size_t k = 10;
  std::size_t repeats = 10;
};

void add_hyper_flags(CLI::App* sc, HyperFlags& f) {
  sc->add_option("--k", f.k, "Folds")->capture_default_str();
  sc->add_option("--repeats", f.repeats, "Repetitions of k-fold CV")->capture_default_str();
  sc->add_option("--l2", f.h.l2, "L2 penalty")->capture_default_str();
  sc->add_option("--epochs", f.h.epochs, "Solver iteration cap")->capture_default_str();
  sc->add_option("--lr", f.h.lr, "Step size (gradient_descent only)")->capture_default_str();
  sc->add_option("--solver", f.solver, "lbfgs or gradient_descent")
      ->check(CLI::IsMember({"lbfgs", "gradient_descent"}))
      ->capture_default_str();
}

ClassifierHyper hyper(const HyperFlags& f) {
  ClassifierHyper h = f.h;
  h.solver = f.solver == "lbfgs" ? ClassifierHyper::Solver::lbfgs : ClassifierHyper::Solver::gradient_descent;
  return h;
}

int run(int argc, char** argv) {
  CLI::App app{"Graph homomorphism embeddings for graph classification"};
  app.require_subcommand(1);

  Common common;
  Source source;
  EmbedFlags ef;
  HyperFlags hf;

  // patterns
  std::string pat_family = "trees";
  std::size_t pat_max = 6;
  auto* patterns = app.add_subcommand("patterns", "List a pattern family as JSON");
  patterns->add_option("--family", pat_family, "trees, cycles, stars or paths")
      ->check(CLI::IsMember({"trees", "cycles", "stars", "paths"}))
      ->capture_default_str();
  patterns->add_option("--max-size", pat_max, "Largest pattern size")->capture_default_str();
  add_common(patterns, common);

  // hom
  std::string hom_pattern, hom_graph;
  bool hom_brute_flag = false, hom_density_flag = false;
  auto* homc = app.add_subcommand("hom", "Count homomorphisms from a pattern into graphs");
  homc->add_option("--pattern", hom_pattern, "edge, triangle, C<k>, P<k>, S<k>, K<k> or a pattern file")->required();
  homc->add_option("--graph", hom_graph, "Graph file (vertex count line, then `u v` lines)")->required();
  homc->add_flag("--brute", hom_brute_flag, "Use exhaustive search");
  homc->add_flag("--density", hom_density_flag, "Report hom / |V(G)|^|V(F)|");
  add_common(homc, common);

  // gen
  std::string gen_kind;
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset in TU format");
  gen->add_option("kind", gen_kind, "csl, bipartite or paulus")->required();
  gen->add_option("--copies", source.copies, "Copies per class for csl/paulus")->capture_default_str();
  gen->add_option("--paulus-file", source.paulus_file, "Paulus adjacency fixture")->capture_default_str();
  add_common(gen, common);

  // embed
  auto* emb = app.add_subcommand("embed", "Embed a dataset and write CSV plus a JSON sidecar");
  add_source(emb, source, false);
  add_embed_flags(emb, ef);
  add_common(emb, common);

  // eval
  auto* ev = app.add_subcommand("eval", "Repeated stratified k-fold CV of the classifier");
  add_source(ev, source, true);
  add_embed_flags(ev, ef);
  add_hyper_flags(ev, hf);
  add_common(ev, common);

  // bench
  auto* bench = app.add_subcommand("bench", "Time embedding and classification");
  add_source(bench, source, false);
  add_embed_flags(bench, ef);
  add_hyper_flags(bench, hf);
  add_common(bench, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*patterns) {
    std::vector<Pattern> ps;
    if (pat_family == "trees") ps = enumerate_trees(pat_max);
    if (pat_family == "cycles") ps = enumerate_cycles(pat_max);
    if (pat_family == "stars") ps = enumerate_stars(pat_max);
    if (pat_family == "paths") ps = enumerate_paths(pat_max);
    json list = json::array();
    for (const auto& p : ps) list.push_back(pattern_json(p));
    emit({{"config", {{"command", "patterns"}, {"family", pat_family}, {"max_size", pat_max}, {"seed", common.seed}}},
          {"count", ps.size()},
          {"patterns", list}},
         common.out);
    return 0;
  }

  if (*homc) {
    const auto ps = resolve_pattern(hom_pattern);
    std::vector<Pattern> graphs = load_patterns(hom_graph);
    if (graphs.empty()) throw ValidationError(hom_graph + ": no graph found");
    json results = json::array();
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      for (const auto& p : ps) {
        const Graph& g = graphs[gi].graph;
        json r = hom_density_flag ? json{{"value", hom_density(p, g)}, {"mode", "density"}}
                                  : hom_json(hom_brute_flag ? hom_brute(p.graph, g) : hom(p, g));
        r["graph"] = gi;
        r["pattern"] = p.name;
        results.push_back(r);
      }
    }
    json cfg{{"command", "hom"},      {"pattern", hom_pattern},          {"graph", hom_graph},
             {"brute", hom_brute_flag}, {"density", hom_density_flag}, {"seed", common.seed}};
    emit({{"config", cfg}, {"results", results}}, common.out);
    return 0;
  }

  if (*gen) {
    if (common.out.empty()) throw UsageError("gen needs --out DIR");
    const auto b = generate(gen_kind, source, common.seed);
    write_tud(b, common.out);
    std::cout << json{{"config", {{"command", "gen"}, {"kind", gen_kind}, {"seed", common.seed},
                                  {"copies", source.copies}, {"out", common.out}}},
                      {"name", b.name},
                      {"graphs", b.size()},
                      {"classes", b.num_classes()}}
                     .dump(2)
              << '\n';
    return 0;
  }

  if (*emb) {
    const auto b = resolve_bundle(source, common.seed);
    const auto cfg = embed_config(ef, common.threads);
    const auto m = embed(b, cfg);
    json cols = json::array();
    for (const auto& c : m.column_meta) cols.push_back(to_json(c));
    json sidecar{{"config", {{"command", "embed"},
                             {"source", source_json(source)},
                             {"embedding", to_json(cfg, &b)},
                             {"seed", common.seed},
                             {"provenance", detail::provenance_json(b.provenance)}}},
                 {"rows", m.rows()},
                 {"columns", cols}};
    if (common.out.empty()) {
      write_embedding_csv(m, std::cout);
    } else {
      std::ofstream f(common.out);
      if (!f) throw IoError("cannot write " + common.out);
      write_embedding_csv(m, f);
      emit(sidecar, common.out + ".json");
    }
    return 0;
  }

  if (*ev) {
    const CVOptions opt{hf.k, hf.repeats, common.seed, common.threads};
    const auto hp = hyper(hf);
    CVReport r;
    if (!source.embedding.empty()) {
      std::ifstream in(source.embedding);
      if (!in) throw IoError("cannot open " + source.embedding);
      r = cross_validate(read_embedding_csv(in, source.embedding), hp, opt);
    } else {
      const auto b = resolve_bundle(source, common.seed);
      r = cross_validate(b, embed_config(ef, common.threads), hp, opt);
    }
    r.config["command"] = "eval";
    r.config["source"] = source_json(source);
    r.config["threads"] = common.threads;
    emit(to_json(r), common.out);
    std::fprintf(stderr, "accuracy %.4f +- %.4f over %zu folds (seed %llu, %.2fs)\n", r.mean, r.stddev,
                 r.fold_accuracies.size(), static_cast<unsigned long long>(r.seed), r.wall_time_seconds);
    return 0;
  }

  if (*bench) {
    const auto b = resolve_bundle(source, common.seed);
    auto r = bench_runtime(b, embed_config(ef, common.threads), hyper(hf), {hf.k, hf.repeats, common.seed, 1});
    r.config["command"] = "bench";
    r.config["source"] = source_json(source);
    r.config["threads"] = common.threads;
    r.config["total_vertices"] = b.mean_num_vertices() * static_cast<double>(b.size());
    emit(to_json(r), common.out);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
