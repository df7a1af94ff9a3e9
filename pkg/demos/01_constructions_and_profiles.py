#!/usr/bin/env python3
"""
Constructions and exact 3/4-vertex profiles
===========================================

Build the named tournament families, count their 3- and 4-vertex
sub-tournament types exactly, and watch the linear identities that tie
the two levels together.
"""
from fractions import Fraction
from math import comb

from tourprof import (cyclic, edge_stats, interval, moments, profile3,
                      profile4, random_tournament, transitive)

# Every pair of vertices carries exactly one arc.  On 3 vertices there
# are two types (transitive triangle, cyclic triangle); on 4 vertices
# there are four, told apart by their sorted out-degree sequences:
#   T4 (0,1,2,3)   C4 (1,1,2,2)   W (0,2,2,2)   L (1,1,1,3)

for name, t in [("transitive(9)", transitive(9)),
                ("cyclic(9)", cyclic(9)),
                ("interval(9, 5)", interval(9, 5)),
                ("random(9, seed=1)", random_tournament(9, 1))]:
    p3 = profile3(t)
    p4 = profile4(t)
    print(f"{name:18s} c3={p3.c3:.4f}  "
          f"T4/C4/W/L = {p4.t4_count}/{p4.c4_count}/{p4.w_count}/{p4.l_count}")

# %%
# The four 4-type counts always sum to C(n,4), and the difference of the
# two "extreme" densities is pinned by c3 alone: t4 - c4 = 1 - 4 c3.

t = random_tournament(40, 7)
p3, p4 = profile3(t), profile4(t)
n = t.n
assert p4.t4_count + p4.c4_count + p4.w_count + p4.l_count == comb(n, 4)
lhs = Fraction(p4.t4_count - p4.c4_count, comb(n, 4))
rhs = 1 - 4 * Fraction(p3.c3_count, comb(n, 3))
print("\nt4 - c4 =", lhs, "   1 - 4 c3 =", rhs, "   equal:", lhs == rhs)

# %%
# Per-edge statistics.  For an arc u -> v, count the other vertices by
# how they attach: cyc (v -> w -> u), thru (u -> w -> v), dom_out, dom_in.
# Their sums recover the global counts, e.g. sum cyc = 3 #C3 and
# sum C(cyc,2) = #C4.

st = edge_stats(t)
print("\nsum cyc =", int(st.cyc.sum()), " (3 #C3 =", 3 * p3.c3_count, ")")
print("sum C(cyc,2) =", int((st.cyc * (st.cyc - 1) // 2).sum()),
      " (#C4 =", p4.c4_count, ")")

# %%
# The normalized edge variables X = cyc/(n-2), Y = thru/(n-2) have exact
# rational moments; for the cyclic tournament E[X] = 1/2.

mom = moments(cyclic(5))
print("\ncyclic(5) moments: E[X] =", mom.ex, " E[X^2] =", mom.exx,
      " E[Z^2] =", mom.ezz)

# %%
# The cyclic tournament maximizes c3 among regular tournaments; for odd n
# the count is exactly (n^3 - n)/24.

for n in (5, 101, 201):
    got = profile3(cyclic(n)).c3_count
    print(f"cyclic({n}): #C3 = {got} = (n^3-n)/24 = {(n**3 - n) // 24}")
