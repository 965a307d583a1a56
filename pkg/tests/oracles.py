"""Brute-force models used as independent oracles.

Groups are explicit sets of tuples; subgroups are frozensets of elements.
Nothing here touches lattices, normal forms or the library's enumeration.
"""

import itertools
from fractions import Fraction
from math import inf


def elements(orders):
    return list(itertools.product(*[range(d) for d in orders]))


def add(orders, a, b):
    return tuple((x + y) % d for x, y, d in zip(a, b, orders))


def span(orders, gens):
    zero = tuple(0 for _ in orders)
    out = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = add(orders, x, g)
                if y not in out:
                    out.add(y)
                    new.append(y)
        frontier = new
    return frozenset(out)


def subgroups(orders):
    """All subgroups, as the subsets closed under addition (spans of <= 2 elements suffice here)."""
    els = elements(orders)
    k = max(len(orders), 1)
    subs = set()
    for r in range(k + 1):
        for gens in itertools.combinations(els, r):
            subs.add(span(orders, gens))
    # double-check closure for the record
    for s in subs:
        assert all(add(orders, a, b) in s for a in s for b in s)
    return subs


def members(orders, lattice):
    """Elements of A killed by every character in the lattice (the annihilator)."""
    return frozenset(a for a in elements(orders)
                     if all(sum(Fraction(v * x, d) for v, x, d in zip(row, a, orders)).denominator == 1
                            for row in lattice))


def is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def quotient_p_rank(orders, big, small, p):
    """rank of the p-torsion of big/small: log_p #{x in big : p x in small} / |small|."""
    count = sum(1 for x in big if _times(orders, x, p) in small)
    m, r = count // len(small), 0
    while m > 1:
        m //= p
        r += 1
    return r


def _times(orders, x, k):
    return tuple((k * a) % d for a, d in zip(x, orders))


def includes(orders, p, P, Q):
    """I_{B,n} <= I_{B',n'} by brute force on element sets."""
    (B, n), (B2, n2) = P, Q
    if not B2 <= B:
        return False
    if not is_p_power(len(B) // len(B2), p):
        return False
    return n2 >= n + quotient_p_rank(orders, B, B2, p)


def admissible_functions(orders, p, values):
    subs = sorted(subgroups(orders), key=lambda s: (len(s), sorted(s)))
    cons = [(i, j, quotient_p_rank(orders, subs[j], subs[i], p))
            for i, j in itertools.product(range(len(subs)), repeat=2)
            if i != j and subs[i] <= subs[j] and is_p_power(len(subs[j]) // len(subs[i]), p)]
    out = []
    for f in itertools.product(values, repeat=len(subs)):
        if all(f[i] <= f[j] + r for i, j, r in cons):
            out.append(f)
    return subs, out


def heights(H):
    return list(range(H + 1)) + [inf]
