"""Exact 3- and 4-vertex profiles of tournaments.

The 3-types are the transitive triangle T3 and the cyclic triangle C3;
the 4-types are T4 (transitive), C4 (strongly connected), W (cyclic
triangle plus a vertex beaten by all of it) and L (cyclic triangle plus
a vertex beating all of it).  Densities are counts over C(n, k).

All 4-counting goes through per-edge statistics.  For a directed edge
e = (u -> v) and a third vertex w there are four patterns:

    cyc(e)     #w with v -> w -> u      (w completes a cyclic triangle)
    thru(e)    #w with u -> w -> v      (w lies on a 2-path u -> w -> v)
    dom_out(e) #w with u -> w and v -> w
    dom_in(e)  #w with w -> u and w -> v

These satisfy cyc + thru + dom_out + dom_in = n - 2 per edge, and the
4-counts fall out of pair sums: sum_e C(cyc, 2) counts C4, sum_e
C(thru, 2) counts T4.  The kernel computes the per-edge counts by
word-parallel intersections of packed neighborhood bitsets (n^3/64 word
operations), never by enumerating 4-subsets.

The per-edge random variables are X = cyc/(n-2), Y = thru/(n-2) and
Z = 1 + 2(X - Y), an edge drawn uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt

import numpy as np

from . import rng
from .core import (InternalInvariantError, Tournament, TournamentError,
                   _pack_rows, popcount_u64)

FOUR_TYPES = ("T4", "C4", "W", "L")

EXACT_MOMENT_MAX_N = 1000


def _comb2(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64, copy=False)
    return a * (a - 1) // 2


def _pair_popcount(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """M[a, b] = popcount(p[a] & q[b]) for packed bitset rows, blocked so
    the (block, m, words) intermediate stays ~32MB."""
    n, w = p.shape
    m = q.shape[0]
    out = np.empty((n, m), dtype=np.int64)
    block = max(1, (1 << 22) // max(1, m * w))
    for s in range(0, n, block):
        e = min(n, s + block)
        chunk = p[s:e, None, :] & q[None, :, :]
        out[s:e] = popcount_u64(chunk).sum(axis=2, dtype=np.int64)
    return out


def paths_matrix(t: Tournament) -> np.ndarray:
    """P2[a, b] = #{w : a -> w -> b}.  Note cyc(u -> v) = P2[v, u] and
    thru(u -> v) = P2[u, v]."""
    p2 = _pair_popcount(t.packed_rows, t.packed_cols)
    np.fill_diagonal(p2, 0)
    return p2


def _neighborhood_c3_sum(t: Tournament, masks: np.ndarray) -> int:
    """sum over vertices v of the cyclic-triangle count inside the subset
    whose packed bitset is masks[v], via Goodman's identity on the subset:
    C(d, 3) - sum_u C(outdeg_in_subset(u), 2)."""
    rows = t.packed_rows
    total = 0
    for v in range(t.n):
        mask = masks[v]
        members = np.flatnonzero(
            (mask[:, None] >> np.arange(64, dtype=np.uint64)
             & np.uint64(1)).reshape(-1)[:t.n])
        d = len(members)
        if d < 3:
            continue
        restricted = popcount_u64(rows[members] & mask[None, :]).sum(
            axis=1, dtype=np.int64)
        total += comb(d, 3) - int(_comb2(restricted).sum())
    return total


@dataclass(frozen=True)
class Profile3Counts:
    n: int
    t3_count: int
    c3_count: int

    def __post_init__(self):
        if self.t3_count < 0 or self.c3_count < 0 \
                or self.t3_count + self.c3_count != comb(self.n, 3):
            raise InternalInvariantError(
                f"3-profile {self.t3_count}+{self.c3_count} != C({self.n},3)")

    @property
    def t3(self) -> float:
        return self.t3_count / comb(self.n, 3)

    @property
    def c3(self) -> float:
        return self.c3_count / comb(self.n, 3)


@dataclass(frozen=True)
class Profile4Counts:
    n: int
    t4_count: int
    c4_count: int
    w_count: int
    l_count: int

    def __post_init__(self):
        counts = (self.t4_count, self.c4_count, self.w_count, self.l_count)
        if min(counts) < 0 or sum(counts) != comb(self.n, 4):
            raise InternalInvariantError(
                f"4-profile {counts} does not sum to C({self.n},4)")

    @property
    def t4(self) -> float:
        return self.t4_count / comb(self.n, 4)

    @property
    def c4(self) -> float:
        return self.c4_count / comb(self.n, 4)

    @property
    def w(self) -> float:
        return self.w_count / comb(self.n, 4)

    @property
    def l(self) -> float:
        return self.l_count / comb(self.n, 4)

    def density(self, name: str) -> float:
        return getattr(self, name.lower() if name in ("W", "L") else name.lower())


def profile3(t: Tournament) -> Profile3Counts:
    """Goodman: #C3 = C(n, 3) - sum_v C(outdeg(v), 2)."""
    n = t.n
    if n < 3:
        return Profile3Counts(n, 0, 0)
    d = t.out_degrees()
    c3 = comb(n, 3) - int(_comb2(d).sum())
    return Profile3Counts(n, comb(n, 3) - c3, c3)


def profile4(t: Tournament) -> Profile4Counts:
    """Exact 4-profile via the per-edge kernel:

        c4 = sum_e C(cyc(e), 2)        t4 = sum_e C(thru(e), 2)
        l  = sum_v #C3(out-neighborhood of v)
        w  = sum_v #C3(in-neighborhood of v)

    and cross-checked against C(n, 4) and the triangle-link identity
    2*c4 + w + l = (n - 3)*c3 before returning."""
    n = t.n
    if n < 4:
        return Profile4Counts(n, 0, 0, 0, 0)
    p2 = paths_matrix(t)
    a = t.dense()
    c4 = int(_comb2(p2.T[a]).sum())
    t4 = int(_comb2(p2[a]).sum())
    l_count = _neighborhood_c3_sum(t, t.packed_rows)
    w_count = _neighborhood_c3_sum(t, t.packed_cols)
    rest = comb(n, 4) - c4 - w_count - l_count
    if rest != t4:
        raise InternalInvariantError(
            f"t4 mismatch: pair-sum {t4} vs complement {rest}")
    c3 = profile3(t).c3_count
    if 2 * c4 + w_count + l_count != (n - 3) * c3:
        raise InternalInvariantError("2*c4 + w + l != (n-3)*c3")
    return Profile4Counts(n, t4, c4, w_count, l_count)


_SCORES_TO_TYPE = {
    (0, 1, 2, 3): "T4",
    (1, 1, 2, 2): "C4",
    (0, 2, 2, 2): "W",
    (1, 1, 1, 3): "L",
}


def classify4(t: Tournament) -> str:
    """Type of a 4-vertex tournament from its sorted score sequence."""
    if t.n != 4:
        raise TournamentError("classify4 takes a 4-vertex tournament")
    key = tuple(sorted(int(x) for x in t.out_degrees()))
    return _SCORES_TO_TYPE[key]


@dataclass(frozen=True)
class EdgeStats:
    """Per-directed-edge third-vertex counts, edges in ascending (u, v)."""
    n: int
    edges: np.ndarray      # (E, 2) int64, E = C(n, 2)
    cyc: np.ndarray        # (E,) int64
    thru: np.ndarray
    dom_out: np.ndarray
    dom_in: np.ndarray

    def __post_init__(self):
        total = self.cyc + self.thru + self.dom_out + self.dom_in
        if not (total == self.n - 2).all():
            raise InternalInvariantError("cyc+thru+dom_out+dom_in != n-2")

    def x_values(self) -> np.ndarray:
        return self.cyc / (self.n - 2)

    def sums(self) -> dict:
        """Exact integer pair sums used by the moment identities."""
        return {
            "cyc": int(self.cyc.sum()),
            "thru": int(self.thru.sum()),
            "comb2_cyc": int(_comb2(self.cyc).sum()),
            "comb2_thru": int(_comb2(self.thru).sum()),
            "cyc_thru": int((self.cyc * self.thru).sum()),
        }


def edge_stats(t: Tournament) -> EdgeStats:
    if t.n < 3:
        raise TournamentError("edge stats need n >= 3")
    a = t.dense()
    p2 = paths_matrix(t)
    dout = _pair_popcount(t.packed_rows, t.packed_rows)
    din = _pair_popcount(t.packed_cols, t.packed_cols)
    edges = np.argwhere(a).astype(np.int64)
    u, v = edges[:, 0], edges[:, 1]
    return EdgeStats(n=t.n, edges=edges,
                     cyc=p2[v, u], thru=p2[u, v],
                     dom_out=dout[u, v], dom_in=din[u, v])


@dataclass(frozen=True)
class MomentReport:
    """Moments of (X, Y, Z) over a uniformly random directed edge.
    Exact rationals for n <= 1000, floats beyond."""
    n: int
    ex: object
    ey: object
    exx: object
    exy: object
    eyy: object
    ezz: object
    var_x: object

    def as_floats(self) -> dict:
        return {k: float(getattr(self, k))
                for k in ("ex", "ey", "exx", "exy", "eyy", "ezz", "var_x")}


def moments(t: Tournament, stats: EdgeStats | None = None) -> MomentReport:
    """E[X], E[Y], E[X^2], E[XY], E[Y^2], E[Z^2], Var(X) with
    Z = 1 + 2(X - Y).  Uses sum cyc^2 = sum cyc + 2 sum C(cyc, 2)."""
    if stats is None:
        stats = edge_stats(t)
    n = t.n
    s = stats.sums()
    m = comb(n, 2)
    k = n - 2
    num = Fraction if n <= EXACT_MOMENT_MAX_N else float
    ex = num(s["cyc"]) / (m * k)
    ey = num(s["thru"]) / (m * k)
    exx = num(s["cyc"] + 2 * s["comb2_cyc"]) / (m * k * k)
    eyy = num(s["thru"] + 2 * s["comb2_thru"]) / (m * k * k)
    exy = num(s["cyc_thru"]) / (m * k * k)
    ezz = 1 + 4 * ex - 4 * ey + 4 * exx - 8 * exy + 4 * eyy
    return MomentReport(n=n, ex=ex, ey=ey, exx=exx, exy=exy, eyy=eyy,
                        ezz=ezz, var_x=exx - ex * ex)


def x_cdf(t: Tournament, xs, stats: EdgeStats | None = None) -> np.ndarray:
    """phi(x) = fraction of directed edges with X >= x; nonincreasing,
    phi(0) = 1."""
    if stats is None:
        stats = edge_stats(t)
    cyc_sorted = np.sort(stats.cyc)
    e = len(cyc_sorted)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    thresholds = xs * (t.n - 2)
    counts = e - np.searchsorted(cyc_sorted, thresholds, side="left")
    return counts / e


@dataclass(frozen=True)
class SampleProfile4:
    """Monte Carlo 4-profile estimate: uniform 4-subsets with replacement."""
    n: int
    samples: int
    counts: dict
    estimates: dict = field(init=False)
    stderr: dict = field(init=False)

    def __post_init__(self):
        est = {k: v / self.samples for k, v in self.counts.items()}
        se = {k: sqrt(p * (1 - p) / self.samples) for k, p in est.items()}
        object.__setattr__(self, "estimates", est)
        object.__setattr__(self, "stderr", se)


def sample_profile4(t: Tournament, samples: int, seed: int) -> SampleProfile4:
    """Estimate the 4-profile by sampling `samples` uniform 4-subsets.
    Draw order: stream values are consumed sequentially; each vertex is
    value * n >> 64, redrawn on duplicates within the current 4-set."""
    if t.n < 4:
        raise TournamentError("sampling needs n >= 4")
    if samples < 1:
        raise TournamentError("samples must be >= 1")
    stream = rng.Stream(seed)
    counts = dict.fromkeys(FOUR_TYPES, 0)
    a = t.dense()
    n = t.n
    for _ in range(samples):
        picked = []
        while len(picked) < 4:
            v = stream.next_below(n)
            if v not in picked:
                picked.append(v)
        sub = a[np.ix_(picked, picked)]
        key = tuple(sorted(int(x) for x in sub.sum(axis=1)))
        counts[_SCORES_TO_TYPE[key]] += 1
    return SampleProfile4(n=n, samples=samples, counts=counts)


class FlipState:
    """Mutable tournament wrapper maintaining exact triangle/4-cycle
    counts across single-pair flips in O(n) time per flip.

    Maintains the path matrix P2[a, b] = #{w : a -> w -> b}; flipping the
    arc a -> b to b -> a touches only rows/columns a and b of P2, so the
    affected contributions to c4 = sum C(P2[b, a], 2) over arcs and
    t4 = sum C(P2[a, b], 2) over arcs are re-summed over the O(n) ordered
    pairs incident to the flipped pair.  W and L counts are not updated
    incrementally; they are recounted on demand (counts4)."""

    def __init__(self, t: Tournament):
        self.n = t.n
        if self.n < 4:
            raise TournamentError("FlipState needs n >= 4")
        self.a = t.dense().copy()
        self.p2 = paths_matrix(t)
        p3 = profile3(t)
        self.c3_count = p3.c3_count
        a = self.a
        self.c4_count = int(_comb2(self.p2.T[a]).sum())
        self.t4_count = int(_comb2(self.p2[a]).sum())
        self.flips = 0

    # -- derived views --------------------------------------------------

    def tournament(self) -> Tournament:
        return Tournament(_pack_rows(self.a), self.n)

    @property
    def c3_density(self) -> float:
        return self.c3_count / comb(self.n, 3)

    @property
    def c4_density(self) -> float:
        return self.c4_count / comb(self.n, 4)

    def counts3(self) -> Profile3Counts:
        return Profile3Counts(self.n, comb(self.n, 3) - self.c3_count,
                              self.c3_count)

    def counts4(self) -> Profile4Counts:
        """Full 4-profile; W/L are recounted from scratch here."""
        t = self.tournament()
        p4 = profile4(t)
        if p4.c4_count != self.c4_count or p4.t4_count != self.t4_count:
            raise InternalInvariantError("incremental c4/t4 drifted from recount")
        return p4

    # -- incremental update ----------------------------------------------

    def _incident_pair_sums(self, u: int, v: int) -> tuple[int, int]:
        """(c4 part, t4 part) summed over ordered pairs meeting {u, v}."""
        a, p2 = self.a, self.p2
        c4 = t4 = 0
        for x in (u, v):
            c4 += int(_comb2(p2[:, x])[a[x, :]].sum())   # arcs (x, y)
            c4 += int(_comb2(p2[x, :])[a[:, x]].sum())   # arcs (y, x)
            t4 += int(_comb2(p2[x, :])[a[x, :]].sum())
            t4 += int(_comb2(p2[:, x])[a[:, x]].sum())
        for x, y in ((u, v), (v, u)):                    # counted twice above
            if a[x, y]:
                c4 -= int(_comb2(p2[y:y + 1, x]).sum())
                t4 -= int(_comb2(p2[x:x + 1, y]).sum())
        return c4, t4

    def flip(self, u: int, v: int) -> None:
        """Reverse the orientation of pair {u, v}."""
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise TournamentError(f"bad pair ({u}, {v})")
        a, p2 = self.a, self.p2
        if a[u, v]:
            src, dst = u, v
        else:
            src, dst = v, u
        before_c4, before_t4 = self._incident_pair_sums(u, v)
        dc3 = int(p2[src, dst]) - int(p2[dst, src])

        # P2 updates for A[src,dst]: 1 -> 0 and A[dst,src]: 0 -> 1, using
        # pre-flip rows/columns of A.  The two changed arc entries meet
        # only in the diagonal terms P2[src,src] and P2[dst,dst], which
        # must stay 0; reset them after the rank-1 updates.
        row_src = a[src, :].astype(np.int64)
        row_dst = a[dst, :].astype(np.int64)
        col_src = a[:, src].astype(np.int64)
        col_dst = a[:, dst].astype(np.int64)
        p2[src, :] -= row_dst
        p2[:, src] += col_dst
        p2[dst, :] += row_src
        p2[:, dst] -= col_src
        p2[src, src] = 0
        p2[dst, dst] = 0

        a[src, dst] = False
        a[dst, src] = True

        after_c4, after_t4 = self._incident_pair_sums(u, v)
        self.c3_count += dc3
        self.c4_count += after_c4 - before_c4
        self.t4_count += after_t4 - before_t4
        self.flips += 1

    def audit(self) -> None:
        """Recount everything from scratch; raise on any drift."""
        t = self.tournament()
        p2 = paths_matrix(t)
        if not np.array_equal(p2, self.p2):
            raise InternalInvariantError("P2 matrix drifted")
        p3 = profile3(t)
        a = t.dense()
        c4 = int(_comb2(p2.T[a]).sum())
        t4 = int(_comb2(p2[a]).sum())
        if (p3.c3_count, c4, t4) != (self.c3_count, self.c4_count, self.t4_count):
            raise InternalInvariantError("incremental counts drifted")


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    ok: bool
    lhs: int
    rhs: int


@dataclass(frozen=True)
class IdentityReport:
    n: int
    checks: list

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


def verify_identities(t: Tournament) -> IdentityReport:
    """Exact integer verification of the finite-n identities tying the
    3/4-profiles and the edge statistics together (no floats anywhere):

        t4 + c4 + w + l = C(n,4)
        (t4 - c4) * C(n,3) = (C(n,3) - 4 c3) * C(n,4)   [t4-c4 = 1-4c3]
        2 c4 + w + l = (n-3) c3
        sum cyc = 3 c3;  sum thru = t3
        sum C(cyc,2) = c4;  sum C(thru,2) = t4;  sum cyc*thru = 2 c4
        4 (n-2) c3 <= (n+1) C(n,3)  for odd n  [regular-tournament max]
    """
    n = t.n
    p3 = profile3(t)
    p4 = profile4(t)
    s = edge_stats(t).sums()
    checks = [
        IdentityCheck("four_profile_total",
                      p4.t4_count + p4.c4_count + p4.w_count + p4.l_count
                      == comb(n, 4),
                      p4.t4_count + p4.c4_count + p4.w_count + p4.l_count,
                      comb(n, 4)),
        IdentityCheck("t4_minus_c4_density",
                      (p4.t4_count - p4.c4_count) * comb(n, 3)
                      == (comb(n, 3) - 4 * p3.c3_count) * comb(n, 4),
                      (p4.t4_count - p4.c4_count) * comb(n, 3),
                      (comb(n, 3) - 4 * p3.c3_count) * comb(n, 4)),
        IdentityCheck("triangle_link",
                      2 * p4.c4_count + p4.w_count + p4.l_count
                      == (n - 3) * p3.c3_count,
                      2 * p4.c4_count + p4.w_count + p4.l_count,
                      (n - 3) * p3.c3_count),
        IdentityCheck("sum_cyc", s["cyc"] == 3 * p3.c3_count,
                      s["cyc"], 3 * p3.c3_count),
        IdentityCheck("sum_thru", s["thru"] == p3.t3_count,
                      s["thru"], p3.t3_count),
        IdentityCheck("sum_comb2_cyc", s["comb2_cyc"] == p4.c4_count,
                      s["comb2_cyc"], p4.c4_count),
        IdentityCheck("sum_comb2_thru", s["comb2_thru"] == p4.t4_count,
                      s["comb2_thru"], p4.t4_count),
        IdentityCheck("sum_cyc_thru", s["cyc_thru"] == 2 * p4.c4_count,
                      s["cyc_thru"], 2 * p4.c4_count),
    ]
    if n % 2 == 1:
        checks.append(IdentityCheck(
            "c3_regular_max",
            4 * (n - 2) * p3.c3_count <= (n + 1) * comb(n, 3),
            4 * (n - 2) * p3.c3_count, (n + 1) * comb(n, 3)))
    return IdentityReport(n=n, checks=checks)
