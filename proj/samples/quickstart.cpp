// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

// Counts a few homomorphisms by hand, then classifies the CSL benchmark
// from cycle homomorphism counts.

#include <cstdio>

#include "homcount/dataset.hpp"
#include "homcount/eval.hpp"
#include "homcount/hom.hpp"
#include "homcount/pattern.hpp"

int main() {
  using namespace homcount;

  const Graph hexagon = cycle_graph(6);
  const Graph triangles = disjoint_union(cycle_graph(3), cycle_graph(3));
  for (const auto& t : enumerate_trees(4)) {
    std::printf("%-8s C6: %-6s 2C3: %s\n", t.name.c_str(), hom(t, hexagon).to_string().c_str(),
                hom(t, triangles).to_string().c_str());
  }
  const Pattern tri = cycle_pattern(3);
  std::printf("%-8s C6: %-6s 2C3: %s\n", tri.name.c_str(), hom(tri, hexagon).to_string().c_str(),
              hom(tri, triangles).to_string().c_str());

  const DatasetBundle csl = gen_csl({}, 0);
  const auto report = cross_validate(csl, {FamilySpec::cycles(8), {}, {}}, {}, {10, 1, 0, 0});
  std::printf("CSL, cycles up to 8, 10-fold CV: %.3f +- %.3f\n", report.mean, report.stddev);
  return 0;
}
