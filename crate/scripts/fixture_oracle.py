#!/usr/bin/env python3
"""Brute-force scores for small 1-D fixtures, in exact rational arithmetic.

Builds the nearest-neighbour digraph by exhaustive search, the relationship
matrix R = A + A^T, hop counts by Floyd-Warshall, and the four indices plus
the two hybrid scores for the reciprocal pair. Shares no code with the Rust
crate; its printed values are frozen in the crate's regression tests.

Usage: python3 scripts/fixture_oracle.py [x0 x1 ...]   (default: 0 1 3)
"""

import sys
from fractions import Fraction as F


def scores(xs):
    n = len(xs)
    dist = [[F(abs(a - b)) for b in xs] for a in xs]
    nn = [min((j for j in range(n) if j != i), key=lambda j: (dist[i][j], j)) for i in range(n)]
    a = [[1 if nn[i] == j else 0 for j in range(n)] for i in range(n)]
    r = [[a[i][j] + a[j][i] for j in range(n)] for i in range(n)]

    inf = n + 1
    hops = [[0 if i == j else (1 if r[i][j] > 0 else inf) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                hops[i][j] = min(hops[i][j], hops[i][k] + hops[k][j])

    out = {}
    for i in range(n):
        comp = [j for j in range(n) if hops[i][j] < inf]
        d = sum(r[i])
        dbar = F(sum(sum(r[j]) for j in range(n) if r[i][j] >= 1), d)
        c = F(sum(hops[i][j] for j in comp), len(comp))
        cstar = sum((dist[i][j] / hops[i][j] for j in comp if j != i), F(0)) / len(comp)
        out[i] = (d, dbar, c, cstar)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if r[i][j] == 2]
    return r, out, pairs


def share(x, y):
    return F(x, 1) / (x + y) if x + y != 0 else F(1, 2)


def main():
    xs = [F(v) for v in sys.argv[1:]] or [F(0), F(1), F(3)]
    r, s, pairs = scores(xs)
    print("R =", [[int(v) for v in row] for row in r])
    for i, (d, dbar, c, cstar) in s.items():
        print(f"x={xs[i]}: d={d} dbar={dbar} c={c} cstar={cstar}")
    for i, j in pairs:
        di, dbi, ci, csi = s[i]
        dj, dbj, cj, csj = s[j]
        psi_i = (share(di, dj) + share(dbi, dbj) + (1 - share(ci, cj)) + (1 - share(csi, csj))) / 4
        star_i = (share(dbi, dbj) + (1 - share(csi, csj))) / 2
        print(f"pair ({xs[i]},{xs[j]}): psi=({psi_i}, {1 - psi_i}) = ({float(psi_i):.12f}, {float(1 - psi_i):.12f})")
        print(f"pair ({xs[i]},{xs[j]}): psistar=({star_i}, {1 - star_i}) = ({float(star_i):.12f}, {float(1 - star_i):.12f})")
        pick = lambda v: "tie" if v == F(1, 2) else (xs[i] if v > F(1, 2) else xs[j])
        print(f"root psi={pick(psi_i)} psistar={pick(star_i)}")


if __name__ == "__main__":
    main()
