"""Supports of finite equivariant spectra, described through type functions.

A finite A-spectrum X is recorded by its type function B -> type(Phi^B X),
with values in {0, 1, ..., inf} or ``TRIVIAL`` when the geometric fixed points
are contractible.  Its support is {(B, n) : type(Phi^B X) <= n}, the closed
set V_{t-1}.  Contractible fixed points contribute nothing, which is not the
same as type inf: a type-inf spot still meets the point (B, inf).

For comparisons we order the values 0 < 1 < ... < inf < TRIVIAL, so smash
products take pointwise maxima and wedges pointwise minima.
"""

from __future__ import annotations

import random
from typing import NamedTuple

import numpy as np

from .abgroup import pushforward_subgroup, quotient_map
from .spectrum import (
    INF,
    AdmissibleFn,
    CircleFn,
    ClosedSet,
    Context,
    PrimePoint,
    SpecContext,
    closure,
    find_violation,
    includes,
    order_from_closed_sets,
)


class _Trivial:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "TRIVIAL"

    def __reduce__(self):
        return (_Trivial, ())


TRIVIAL = _Trivial()


def _rank(v):
    # position in 0 < 1 < ... < inf < TRIVIAL
    return (2, 0) if v is TRIVIAL else (1, 0) if v == INF else (0, v)


def tmax(a, b):
    return a if _rank(a) >= _rank(b) else b


def tmin(a, b):
    return a if _rank(a) <= _rank(b) else b


class TypeFunction(NamedTuple):
    values: tuple  # one entry per subgroup index

    def __getitem__(self, k):
        return self.values[k]


def type_values(H: int) -> list:
    return list(range(H + 1)) + [INF, TRIVIAL]


def _boundary(v, H: int):
    if v is TRIVIAL:
        return INF
    if v == INF:
        return H  # only (B, inf) on the universe {0..H, inf}
    return min(v - 1, H)


def support_of(ctx: SpecContext, t: TypeFunction, cutoff: int | None = None) -> ClosedSet:
    """The closed set {(B, n) : t(B) <= n}, exact on heights {0..H, inf}."""
    H = ctx.max_height if cutoff is None else cutoff
    return ClosedSet(AdmissibleFn(tuple(_boundary(v, H) for v in t.values)))


def smash(t1: TypeFunction, t2: TypeFunction) -> TypeFunction:
    """type(Phi^B(X ^ Y)) = max of the types; contractible absorbs."""
    return TypeFunction(tuple(tmax(a, b) for a, b in zip(t1.values, t2.values)))


def wedge(t1: TypeFunction, t2: TypeFunction) -> TypeFunction:
    """type(Phi^B(X v Y)) = min of the types; contractible is neutral."""
    return TypeFunction(tuple(tmin(a, b) for a, b in zip(t1.values, t2.values)))


def is_realizable_type(ctx: SpecContext, t: TypeFunction) -> bool:
    """Whether t(B') <= t(B) + rank along every p-toral inclusion B' <= B."""
    return type_violation(ctx, t) is None


def type_violation(ctx: SpecContext, t: TypeFunction):
    # contractible spots must be closed upwards along p-toral inclusions
    for big in ctx.keys():
        for small in ctx.keys():
            r = ctx.toral_rank(small, big)
            if r is None or small == big:
                continue
            if t[small] is TRIVIAL and t[big] is not TRIVIAL:
                return (small, big)
    finite = AdmissibleFn(tuple(INF if v is TRIVIAL else v for v in t.values))
    v = find_violation(ctx, finite)
    return None if v is None else (v.smaller, v.larger)


def enumerate_types(ctx: SpecContext, H: int) -> list[TypeFunction]:
    """All realizable type functions with values in {0..H, inf, TRIVIAL}."""
    vals = type_values(H)
    n = len(ctx.subgroups)
    cons = [[] for _ in range(n)]
    for small in range(n):
        for big in range(n):
            r = ctx.toral_rank(small, big)
            if r is not None and small != big:
                cons[max(small, big)].append((small, big, r))
    out = []
    t = [None] * n

    def ok(a, b, r):
        if a is TRIVIAL:
            return b is TRIVIAL
        if b is TRIVIAL:
            return True
        return a <= b + r

    def go(k):
        if k == n:
            out.append(TypeFunction(tuple(t)))
            return
        for v in vals:
            t[k] = v
            if all(ok(t[s], t[b], r) for s, b, r in cons[k]):
                go(k + 1)
        t[k] = None

    go(0)
    return out


def random_types(ctx: SpecContext, H: int, count: int, seed: int = 0) -> list[TypeFunction]:
    pool = enumerate_types(ctx, H)
    rng = random.Random(seed)
    return [rng.choice(pool) for _ in range(count)]


# ---------------------------------------------------------------------------
# geometric fixed points


class FixedPointData(NamedTuple):
    quotient_ctx: SpecContext
    # index in Sub(A/B) -> index in Sub(A) of the corresponding C >= B
    lift: tuple


def fixed_point_lattice(ctx: SpecContext, b: int) -> FixedPointData:
    """Identify Sub(A/B) with {C : B <= C <= A} via C -> C/B."""
    Q, q = quotient_map(ctx.subgroups[b])
    qctx = SpecContext(Q, ctx.prime, ctx.max_height)
    lift = [None] * len(qctx.subgroups)
    for c in ctx.keys():
        if ctx.contains(b, c):
            lift[qctx.index(pushforward_subgroup(q, ctx.subgroups[c]))] = c
    if any(x is None for x in lift):
        raise AssertionError("subgroups of the quotient do not all come from overgroups")
    return FixedPointData(qctx, tuple(lift))


def geom_fixed_points(ctx: SpecContext, t: TypeFunction, b: int) -> tuple[SpecContext, TypeFunction]:
    """Type function of Phi^B X as an A/B-spectrum: C/B -> t(C)."""
    data = fixed_point_lattice(ctx, b)
    return data.quotient_ctx, TypeFunction(tuple(t[c] for c in data.lift))


# ---------------------------------------------------------------------------
# comparison with the Balmer side


class BalmerCertificate(NamedTuple):
    points: list
    inclusions: np.ndarray  # [i, j]: I_i <= I_j
    balmer: np.ndarray  # [i, j]: P_j <= P_i, from the support basis
    reversed_ok: bool


def balmer_basis(ctx: SpecContext, H: int) -> list:
    """Supports {(B, n) : n >= t(B)} of all realizable types with values in {0..H, inf, TRIVIAL}.

    Contractible spots are what separate the points (B, inf): a family of
    sets {n >= f(B)} with f finite-or-inf everywhere contains all of them.
    Types run up to H + (largest p-toral rank) so that a point (B, n) with
    n <= H can be separated from (B', n') with n' < n + rank.
    """
    rmax = max((ctx.toral_rank(a, b) or 0) for a in ctx.keys() for b in ctx.keys())
    return [_SupportSet(t) for t in enumerate_types(ctx, H + rmax)]


class _SupportSet:
    def __init__(self, t: TypeFunction):
        self.t = t

    def __contains__(self, P: PrimePoint) -> bool:
        v = self.t[P.sub]
        return v is not TRIVIAL and P.n >= v


def balmer_compare(ctx: SpecContext, H: int) -> BalmerCertificate:
    """Check that I_{B,n} <= I_{B',n'} iff P_{B',n'} <= P_{B,n} on heights {0..H, inf}.

    The left side comes from includes(); the right side from closures of
    points in the basis of supports, where P <= Q iff P lies in the closure
    of Q.
    """
    pts = ctx.universe(H)
    inc = np.array([[includes(ctx, P, Q) for Q in pts] for P in pts], dtype=bool)
    # closure_rel[i, j]: pts[j] in the closure of pts[i], i.e. P_j <= P_i
    closure_rel = order_from_closed_sets(pts, balmer_basis(ctx, H))
    return BalmerCertificate(pts, inc, closure_rel, bool((inc == closure_rel).all()))


# ---------------------------------------------------------------------------
# cofiber sequences


def cofiber_types_ok(t_x: TypeFunction, t_y: TypeFunction, t_z: TypeFunction) -> bool:
    """In a cofiber sequence X -> Y -> Z each support lies in the union of the other two.

    On types: t_y >= min(t_x, t_z) and the same for the rotations.
    """
    for a, b, c in zip(t_x.values, t_y.values, t_z.values):
        for u, v, w in ((a, b, c), (b, a, c), (c, a, b)):
            if _rank(u) < _rank(tmin(v, w)):
                return False
    return True


def type_to_json(ctx: SpecContext, t: TypeFunction) -> dict:
    return {"values": {ctx.labels[i]: ("trivial" if v is TRIVIAL else "inf" if v == INF else int(v))
                       for i, v in enumerate(t.values)}}


def type_from_json(ctx: SpecContext, data: dict) -> TypeFunction:
    vals = data.get("values", data) if isinstance(data, dict) else data
    out = [None] * len(ctx.subgroups)
    items = enumerate(vals) if isinstance(vals, list) else ((ctx.resolve(k), v) for k, v in vals.items())
    for i, v in items:
        if isinstance(v, str) and v.lower() in ("trivial", "contractible", "*"):
            out[i] = TRIVIAL
        elif isinstance(v, str) and v.lower() in ("inf", "infinity"):
            out[i] = INF
        else:
            n = int(v)
            if n < 0:
                raise ValueError("types are non-negative")
            out[i] = n
    if any(v is None for v in out):
        raise ValueError("type function must give a value for every subgroup")
    return TypeFunction(tuple(out))
