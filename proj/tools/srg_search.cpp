// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

// Randomized backtracking search for srg(25,12,5,6). Prints every graph it
// finds as a 25x25 0/1 block; blocks are separated by blank lines. Used
// offline by tools/scripts/make_paulus25.py to rebuild the Paulus fixture.
//
//   srg_search <restarts> <node-limit-per-restart>

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>

namespace {

constexpr int kN = 25;
constexpr int kDegree = 12;
constexpr int kLambda = 5;
constexpr int kMu = 6;

class Search {
 public:
  Search(std::uint64_t seed, long node_limit) : rng_(seed), limit_(node_limit) {
    for (int j = 1; j <= kDegree; ++j) {
      adj_[0][j] = adj_[j][0] = 1;
      deg_[j] = 1;
    }
    deg_[0] = kDegree;
  }

  bool run() { return next_row(1); }

  void print() const {
    for (const auto& r : adj_) {
      for (int v : r) std::putchar('0' + v);
      std::putchar('\n');
    }
    std::putchar('\n');
    std::fflush(stdout);
  }

 private:
  using Counts = std::array<int, kN>;

  int target(int r, int i) const { return adj_[r][i] ? kLambda : kMu; }

  bool next_row(int i) {
    if (i == kN) return true;
    Counts common{};
    int d = 0;
    for (int j = 0; j < i; ++j) d += adj_[i][j];
    for (int r = 0; r < i; ++r) {
      for (int j = 0; j < i; ++j) common[r] += adj_[r][j] & adj_[i][j];
    }
    return fill(i, i + 1, d, common);
  }

  bool fill(int i, int j, int d, Counts& common) {
    if (++nodes_ > limit_) return false;
    if (j == kN) {
      if (d != kDegree) return false;
      for (int r = 0; r < i; ++r) {
        if (common[r] != target(r, i)) return false;
      }
      return next_row(i + 1);
    }
    if (d + (kN - j) < kDegree) return false;
    const int first = static_cast<int>(rng_() & 1);
    for (int t = 0; t < 2; ++t) {
      const int v = t ? 1 - first : first;
      if (v == 1 && (d >= kDegree || deg_[j] >= kDegree)) continue;
      if (v == 0 && deg_[j] + (kN - 2 - i) < kDegree) continue;
      adj_[i][j] = adj_[j][i] = v;
      bool ok = true;
      if (v) {
        ++deg_[j];
        for (int r = 0; r < i; ++r) {
          if (adj_[r][j] && ++common[r] > target(r, i)) ok = false;
        }
      }
      if (ok && fill(i, j + 1, d + v, common)) return true;
      if (v) {
        for (int r = 0; r < i; ++r) {
          if (adj_[r][j]) --common[r];
        }
        --deg_[j];
      }
      adj_[i][j] = adj_[j][i] = 0;
    }
    return false;
  }

  std::array<std::array<int, kN>, kN> adj_{};
  std::array<int, kN> deg_{};
  std::mt19937_64 rng_;
  long nodes_ = 0;
  long limit_;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: srg_search <restarts> <node-limit>\n");
    return 1;
  }
  const long restarts = std::atol(argv[1]);
  const long limit = std::atol(argv[2]);
  for (long s = 0; s < restarts; ++s) {
    Search search(static_cast<std::uint64_t>(s), limit);
    if (search.run()) search.print();
  }
  return 0;
}
