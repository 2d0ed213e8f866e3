#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Rebuilds tests/data/paulus25.txt from srg_search output.

    build/tools/srg_search 1500 5000000 | python3 tools/scripts/make_paulus25.py

There are 15 isomorphism classes of srg(25,12,5,6). The Paley graph is
dropped and the remaining 14 Paulus graphs are written in a stable order
(sorted by nauty certificate), one 25x25 0/1 block each, blank-line separated.
Needs pynauty.
"""
import sys

import pynauty

N = 25


def certificate(adj):
    g = pynauty.Graph(N, adjacency_dict={v: [u for u in range(N) if adj[v][u]] for v in range(N)})
    return pynauty.certificate(g)


def paley25():
    # GF(25) = GF(5)[t] / (t^2 - 2)
    elems = [(a, b) for a in range(5) for b in range(5)]

    def mul(x, y):
        return ((x[0] * y[0] + 2 * x[1] * y[1]) % 5, (x[0] * y[1] + x[1] * y[0]) % 5)

    squares = {mul(x, x) for x in elems if x != (0, 0)}
    return [[int(i != j and ((x[0] - y[0]) % 5, (x[1] - y[1]) % 5) in squares)
             for j, y in enumerate(elems)] for i, x in enumerate(elems)]


def check_srg(adj):
    for v in range(N):
        assert sum(adj[v]) == 12
    for u in range(N):
        for v in range(u + 1, N):
            common = sum(adj[u][w] and adj[v][w] for w in range(N))
            assert common == (5 if adj[u][v] else 6)


def main():
    blocks = [b for b in sys.stdin.read().split("\n\n") if b.strip()]
    classes = {}
    for b in blocks:
        adj = [[int(c) for c in line] for line in b.split("\n") if line]
        check_srg(adj)
        classes.setdefault(certificate(adj), adj)
    classes.pop(certificate(paley25()), None)
    if len(classes) != 14:
        sys.exit(f"found {len(classes)} non-Paley classes, need 14; run more restarts")
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/paulus25.txt"
    with open(out, "w") as fh:
        fh.write("\n\n".join("\n".join("".join(map(str, row)) for row in classes[c])
                             for c in sorted(classes)) + "\n")


if __name__ == "__main__":
    main()
