"""Shared brute-force oracles and corpus fixtures.

The oracles enumerate subsets directly from the dense adjacency matrix
and know nothing about the library's counting kernels; they are the
ground truth the fast paths are checked against.
"""

from itertools import combinations
from math import comb

import numpy as np
import pytest

from tourprof.core import Tournament


def brute_profile3(t: Tournament):
    """(t3_count, c3_count) by 3-subset enumeration."""
    a = t.dense()
    c3 = 0
    for s in combinations(range(t.n), 3):
        sub = a[np.ix_(s, s)]
        if tuple(sorted(sub.sum(axis=1))) == (1, 1, 1):
            c3 += 1
    return comb(t.n, 3) - c3, c3


_SCORE_TO_TYPE = {(0, 1, 2, 3): "T4", (1, 1, 2, 2): "C4",
                  (0, 2, 2, 2): "W", (1, 1, 1, 3): "L"}


def brute_profile4(t: Tournament):
    """Counts dict {T4, C4, W, L} by 4-subset enumeration."""
    a = t.dense()
    counts = {"T4": 0, "C4": 0, "W": 0, "L": 0}
    for s in combinations(range(t.n), 4):
        sub = a[np.ix_(s, s)]
        counts[_SCORE_TO_TYPE[tuple(sorted(sub.sum(axis=1)))]] += 1
    return counts


def brute_edge_stats(t: Tournament):
    """Rows (u, v, cyc, thru, dom_out, dom_in) for every arc u -> v in
    np.argwhere order."""
    a = t.dense()
    rows = []
    for u in range(t.n):
        for v in range(t.n):
            if not a[u, v]:
                continue
            cyc = thru = dout = din = 0
            for w in range(t.n):
                if w == u or w == v:
                    continue
                if a[v, w] and a[w, u]:
                    cyc += 1
                elif a[u, w] and a[w, v]:
                    thru += 1
                elif a[u, w] and a[v, w]:
                    dout += 1
                else:
                    din += 1
            rows.append((u, v, cyc, thru, dout, din))
    return rows


def brute_counts3_via_matrix(dense: np.ndarray):
    """c3 count from the path matrix product, independent of the packed
    kernels (exact in int64 for n < 2^20)."""
    a = dense.astype(np.int64)
    p2 = a @ a
    return int((a * p2.T).sum()) // 3


@pytest.fixture(scope="session")
def small_random_tournaments():
    from tourprof.core import random_tournament
    out = []
    for seed in range(40):
        n = 5 + seed % 5
        out.append(random_tournament(n, seed=seed))
    return out
