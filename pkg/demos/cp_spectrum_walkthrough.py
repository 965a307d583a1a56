# Walk through the prime spectrum of C_2 and C_2 x C_2 at p = 2.
import itertools

from invprimes.abgroup import FgAbGroup
from invprimes.spectrum import PrimePoint, SpecContext, closure, enumerate_admissible, includes, specialization_order

H = 3

# %% subgroups of C_2, stored as character lattices
C2 = SpecContext(FgAbGroup(0, (2,)), 2, H)
print([C2.label(i) for i in C2.keys()])

# %% two towers of points; (C_2, n) sits below (1, n + 1) and nothing lower
for n in range(H):
    print(f"(C2,{n}) <= (1,{n + 1}):", includes(C2, PrimePoint(1, n), PrimePoint(0, n + 1)),
          f" (C2,{n}) <= (1,{n}):", includes(C2, PrimePoint(1, n), PrimePoint(0, n)))

# %% the closure of a single point is its up-set
V = closure(C2, [PrimePoint(1, 1)], H)
print("boundary", V.boundary.values)
print(sorted((C2.label(P.sub), P.n) for P in V.points(C2, H)))

# %% the Klein four group: the shift grows with the rank of the quotient
V4 = SpecContext(FgAbGroup(0, (2, 2)), 2, H)
top = len(V4.subgroups) - 1
for n in range(3):
    print(f"(C2xC2,0) <= (1,{n}):", includes(V4, PrimePoint(top, 0), PrimePoint(0, n)))

# %% counting closed sets and the size of the order relation
pts, rel = specialization_order(V4, H)
print(len(pts), "points,", int(rel.sum()), "inclusions,", len(enumerate_admissible(V4, H)), "closed sets")

# %% distinct order-2 subgroups are incomparable at every height
for i, j in itertools.permutations((1, 2, 3), 2):
    assert not any(includes(V4, PrimePoint(i, a), PrimePoint(j, b)) for a in range(H + 1) for b in range(H + 1))
print("order-2 subgroups:", [V4.label(i) for i in (1, 2, 3)], "pairwise incomparable")
