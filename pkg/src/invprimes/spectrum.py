"""Points, inclusions and closed sets of the invariant prime spectrum.

A point is a pair (B, n) with B a closed subgroup of A and n in {0, 1, ..., inf}.
I_{B,n} <= I_{B',n'} when B' <= B, pi_0(B/B') is a p-group and
n' >= n + rank_p pi_0(B/B').  Closed sets are unions of the sets
V_f = {(B, n) : n > f(B)} for admissible f, that is
f(B') <= f(B) + rank_p pi_0(B/B') along every such inclusion.

Heights use ``INF`` for infinity and -1 for "no height".  Enumerations run
over the universe of heights {0..H, inf}; finite boundary values above H are
clamped to H, which leaves every closed set unchanged on that universe.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np

from .abgroup import (
    FgAbGroup,
    Subgroup,
    enumerate_subgroups,
    is_pi0_p_group,
    is_subgroup,
    quotient_group,
    rank_p_pi0,
    subgroup_labels,
)

INF = math.inf
TORUS = "T"

Height = Union[int, float]  # -1, 0, 1, ..., INF
SubKey = Union[int, str]


def fmt_height(n: Height):
    return "inf" if n == INF else int(n)


def parse_height(x) -> Height:
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    if isinstance(x, float) and x == INF:
        return INF
    n = int(x)
    if n < -1:
        raise ValueError(f"height {n} below -1")
    return n


class PrimePoint(NamedTuple):
    sub: SubKey
    n: Height


# ---------------------------------------------------------------------------
# contexts


class SpecContext:
    """A finite abelian group at a prime, with its subgroup lattice tabulated."""

    circle = False

    def __init__(self, group: FgAbGroup, prime: int, max_height: int = 5, use_cache: bool = False):
        if group.rank:
            raise ValueError("use CircleContext for the circle group")
        self.group = group
        self.prime = prime
        self.max_height = max_height
        self.subgroups: list[Subgroup] = enumerate_subgroups(group, use_cache=use_cache)
        self.labels = subgroup_labels(self.subgroups)
        self._index = {s.lattice: i for i, s in enumerate(self.subgroups)}
        n = len(self.subgroups)
        self._contains = [[False] * n for _ in range(n)]
        self._rank: list[list[int | None]] = [[None] * n for _ in range(n)]
        for i, j in itertools.product(range(n), repeat=2):
            if is_subgroup(self.subgroups[i], self.subgroups[j]):
                self._contains[i][j] = True
                q = quotient_group(self.subgroups[i], self.subgroups[j])
                if is_pi0_p_group(q, prime):
                    self._rank[i][j] = rank_p_pi0(q, prime)

    def keys(self) -> list[int]:
        return list(range(len(self.subgroups)))

    def index(self, sub: Subgroup) -> int:
        return self._index[sub.lattice]

    def contains(self, small: int, big: int) -> bool:
        return self._contains[small][big]

    def toral_rank(self, small: int, big: int) -> int | None:
        """rank_p pi_0(big/small) if small <= big with p-group quotient, else None."""
        return self._rank[small][big]

    def label(self, key: int) -> str:
        return self.labels[key]

    def resolve(self, text) -> int:
        """Look up a subgroup by label ("C2#1"), index ("#3" or 3) or "A"."""
        if isinstance(text, int):
            return text
        t = str(text).strip()
        if t in self.labels:
            return self.labels.index(t)
        if t in ("A", "whole"):
            return len(self.subgroups) - 1
        if t.startswith("#"):
            t = t[1:]
        if t.isdigit() and int(t) < len(self.subgroups):
            return int(t)
        raise ValueError(f"unknown subgroup {text!r}; known: {', '.join(self.labels)}")

    def universe(self, H: int) -> list[PrimePoint]:
        heights = list(range(H + 1)) + [INF]
        return [PrimePoint(k, n) for k in self.keys() for n in heights]


class CircleContext:
    """The circle T at a prime.  Subgroups are C_m (key m >= 1) and T itself."""

    circle = True

    def __init__(self, prime: int, max_height: int = 5):
        self.group = FgAbGroup(1, ())
        self.prime = prime
        self.max_height = max_height

    def contains(self, small: SubKey, big: SubKey) -> bool:
        if big == TORUS:
            return True
        if small == TORUS:
            return False
        return big % small == 0

    def toral_rank(self, small: SubKey, big: SubKey) -> int | None:
        if small == big:
            return 0
        if big == TORUS:
            return None if small == TORUS else 0
        if small == TORUS or big % small:
            return None
        q = big // small
        while q % self.prime == 0:
            q //= self.prime
        return 1 if q == 1 else None

    def keys(self, window: int = 12) -> list[SubKey]:
        return list(range(1, window + 1)) + [TORUS]

    def label(self, key: SubKey) -> str:
        return "T" if key == TORUS else f"C{key}"

    def resolve(self, text) -> SubKey:
        t = str(text).strip()
        if t in ("T", "A"):
            return TORUS
        if t == "1":
            return 1
        if t.startswith("C") and t[1:].isdigit() and int(t[1:]) >= 1:
            return int(t[1:])
        raise ValueError(f"unknown circle subgroup {text!r}")

    def subgroup(self, key: SubKey) -> Subgroup:
        if key == TORUS:
            return self.group.whole()
        return self.group.subgroup([[key]])

    def universe(self, H: int, window: int = 12) -> list[PrimePoint]:
        heights = list(range(H + 1)) + [INF]
        return [PrimePoint(k, n) for k in self.keys(window) for n in heights]


Context = Union[SpecContext, CircleContext]


def circle_key(text: str) -> SubKey:
    t = str(text).strip()
    if t in ("T", "A"):
        return TORUS
    if t.startswith("C"):
        t = t[1:]
    return int(t)


# ---------------------------------------------------------------------------
# functions on the subgroup lattice


@dataclass(frozen=True)
class AdmissibleFn:
    """A function on Sub(A) of a finite group, one value per subgroup index."""

    values: tuple

    def __getitem__(self, key):
        return self.values[key]

    def items(self, ctx=None):
        return enumerate(self.values)

    def to_json(self, ctx: SpecContext | None = None) -> dict:
        labels = ctx.labels if ctx is not None else [str(i) for i in range(len(self.values))]
        return {"values": {labels[i]: _enc(v) for i, v in enumerate(self.values)}}


@dataclass(frozen=True)
class CircleFn:
    """A locally constant function on Sub(T).

    It takes the value ``generic`` on all but finitely many C_m; local
    constancy at T forces ``generic == at_T``.
    """

    at_T: object
    generic: object
    exceptions: tuple = ()  # sorted ((m, value), ...)

    def __post_init__(self):
        exc = self.exceptions
        if isinstance(exc, dict):
            exc = tuple(sorted(exc.items()))
        exc = tuple((int(m), v) for m, v in exc if v != self.generic)
        object.__setattr__(self, "exceptions", tuple(sorted(exc)))
        if any(m < 1 for m, _ in exc):
            raise ValueError("circle subgroups are C_m with m >= 1")
        if self.generic != self.at_T:
            raise ValueError("not locally constant at T: generic value differs from the value at T")

    def __getitem__(self, key):
        if key == TORUS:
            return self.at_T
        return dict(self.exceptions).get(key, self.generic)

    @property
    def exception_map(self) -> dict:
        return dict(self.exceptions)

    def items(self, ctx=None):
        yield TORUS, self.at_T
        yield from self.exceptions

    def to_json(self, ctx=None) -> dict:
        return {"T": _enc(self.at_T), "generic": _enc(self.generic),
                "exceptions": {str(m): _enc(v) for m, v in self.exceptions}}


def _enc(v):
    if v == INF:
        return "inf"
    if isinstance(v, (int, float)):
        return int(v)
    return str(v)


def fn_from_json(ctx: Context, data: dict, decode=parse_height):
    if ctx.circle:
        at_T = decode(data["T"])
        generic = decode(data.get("generic", data["T"]))
        exc = {int(str(m).lstrip("C")): decode(v) for m, v in data.get("exceptions", {}).items()}
        return CircleFn(at_T, generic, exc)
    vals = data["values"] if "values" in data else data
    if isinstance(vals, list):
        if len(vals) != len(ctx.subgroups):
            raise ValueError("wrong number of values")
        return AdmissibleFn(tuple(decode(v) for v in vals))
    out = [None] * len(ctx.subgroups)
    for k, v in vals.items():
        out[ctx.resolve(k)] = decode(v)
    if any(v is None for v in out):
        missing = [ctx.labels[i] for i, v in enumerate(out) if v is None]
        raise ValueError(f"no value for subgroups {missing}")
    return AdmissibleFn(tuple(out))


class Violation(NamedTuple):
    smaller: SubKey  # B'
    larger: SubKey  # B
    deficit: Height  # f(B') - f(B) - rank


def find_violation(ctx: Context, f) -> Violation | None:
    """First p-toral inclusion B' <= B with f(B') > f(B) + rank, if any."""
    if not ctx.circle:
        n = len(ctx.subgroups)
        for big in range(n):
            for small in range(n):
                r = ctx.toral_rank(small, big)
                if r is None or small == big:
                    continue
                if f[small] > f[big] + r:
                    return Violation(small, big, _deficit(f[small], f[big], r))
        return None
    # circle: C_m <= T, and C_a <= C_b with b/a a nontrivial power of p
    g = f.generic
    exc = f.exception_map
    for m, v in sorted(exc.items()):
        if v > f.at_T:
            return Violation(m, TORUS, _deficit(v, f.at_T, 0))
    p = ctx.prime
    for b in sorted(exc):
        a = b
        while a % p == 0:
            a //= p
            fa = exc.get(a, g)
            if fa > exc[b] + 1:
                return Violation(a, b, _deficit(fa, exc[b], 1))
    # a generic C_b above an exceptional C_a only asks f(C_a) <= g + 1,
    # already implied by f(C_a) <= f(T) = g
    return None


def _deficit(a, b, r):
    return INF if a == INF else a - b - r


def is_admissible(ctx: Context, f) -> bool:
    return find_violation(ctx, f) is None


# ---------------------------------------------------------------------------
# inclusions


def includes(ctx: Context, P: PrimePoint, Q: PrimePoint) -> bool:
    """Whether I_P <= I_Q, with P = (B, n) and Q = (B', n')."""
    r = ctx.toral_rank(Q.sub, P.sub)
    return r is not None and Q.n >= P.n + r


def includes_crossprime(A: FgAbGroup, P: tuple, Q: tuple) -> bool:
    """Inclusion I_{B,p,n} <= I_{B',q,n'} between invariant primes at two primes.

    P = (B, p, n) and Q = (B', q, n') with B, B' subgroups of A.  At height
    zero the prime is irrelevant (I_{B,p,0} = I_{B,q,0}); otherwise different
    primes never compare.
    """
    (b, p, n), (b2, q, n2) = P, Q
    if p != q and n != 0:
        return False
    if not is_subgroup(b2, b):
        return False
    quo = quotient_group(b2, b)
    if not is_pi0_p_group(quo, q):
        return False
    return n2 >= n + rank_p_pi0(quo, q)


# ---------------------------------------------------------------------------
# closed sets


@dataclass(frozen=True)
class ClosedSet:
    """V_f = {(B, n) : n > f(B)} for an admissible boundary f."""

    boundary: object  # AdmissibleFn | CircleFn

    def __contains__(self, P: PrimePoint) -> bool:
        return P.n > self.boundary[P.sub]

    def points(self, ctx: Context, H: int) -> frozenset:
        return frozenset(P for P in ctx.universe(H) if P in self)


def _clamp(v, H):
    return v if v == INF or v <= H else H


def closure(ctx: Context, points, cutoff: int | None = None) -> ClosedSet:
    """Smallest V_f containing the given points, exact on heights {0..H, inf}.

    Start from g(B) = min{n : (B, n) given} - 1 (inf when B does not occur,
    H when only (B, inf) occurs) and relax f(B') <- min(f(B'), f(B) + rank)
    along p-toral inclusions until nothing changes.
    """
    H = ctx.max_height if cutoff is None else cutoff
    points = [PrimePoint(*P) for P in points]
    if ctx.circle:
        return _circle_closure(ctx, points, H)
    n = len(ctx.subgroups)
    f = [INF] * n
    for P in points:
        f[P.sub] = min(f[P.sub], H if P.n == INF else P.n - 1)
    changed = True
    while changed:
        changed = False
        for big in range(n):
            for small in range(n):
                r = ctx.toral_rank(small, big)
                if r is not None and f[big] + r < f[small]:
                    f[small] = f[big] + r
                    changed = True
    return ClosedSet(AdmissibleFn(tuple(_clamp(v, H) for v in f)))


def _circle_closure(ctx: CircleContext, points, H) -> ClosedSet:
    p = ctx.prime
    seed: dict = {}
    for P in points:
        v = H if P.n == INF else P.n - 1
        seed[P.sub] = min(seed.get(P.sub, INF), v)
    at_T = seed.get(TORUS, INF)
    exc: dict = {}
    # everything below a seeded C_b: C_a with b/a a power of p, plus the C_m <= T bound
    for b, v in seed.items():
        if b == TORUS:
            continue
        a, r = b, 0
        while True:
            exc[a] = min(exc.get(a, INF), v + min(r, 1))
            if a % p:
                break
            a //= p
            r += 1
    exc = {m: min(v, at_T) for m, v in exc.items()}
    return ClosedSet(CircleFn(_clamp(at_T, H), _clamp(at_T, H), {m: _clamp(v, H) for m, v in exc.items()}))


def closed_union(f: ClosedSet, g: ClosedSet) -> ClosedSet:
    """V_f u V_g = V_min(f, g)."""
    return ClosedSet(_pointwise(min, f.boundary, g.boundary))


def closed_intersection(f: ClosedSet, g: ClosedSet) -> ClosedSet:
    """V_f n V_g = V_max(f, g)."""
    return ClosedSet(_pointwise(max, f.boundary, g.boundary))


def _pointwise(op, a, b):
    if isinstance(a, CircleFn):
        keys = set(a.exception_map) | set(b.exception_map)
        return CircleFn(op(a.at_T, b.at_T), op(a.generic, b.generic), {m: op(a[m], b[m]) for m in keys})
    return AdmissibleFn(tuple(op(x, y) for x, y in zip(a.values, b.values)))


def boundary_values(H: int) -> list:
    return list(range(-1, H + 1)) + [INF]


def enumerate_admissible(ctx: SpecContext, H: int, values=None) -> list[AdmissibleFn]:
    """All admissible f: Sub(A) -> {-1..H, inf}, by backtracking over subgroups."""
    if ctx.circle:
        raise ValueError("the circle has infinitely many admissible functions")
    vals = boundary_values(H) if values is None else list(values)
    n = len(ctx.subgroups)
    constraints = [[] for _ in range(n)]  # for k: pairs (other, small, big, r) with other < k
    for small in range(n):
        for big in range(n):
            r = ctx.toral_rank(small, big)
            if r is None or small == big:
                continue
            constraints[max(small, big)].append((small, big, r))
    out = []
    f = [None] * n

    def go(k):
        if k == n:
            out.append(AdmissibleFn(tuple(f)))
            return
        for v in vals:
            f[k] = v
            if all(f[s] <= f[b] + r for s, b, r in constraints[k]):
                go(k + 1)
        f[k] = None

    go(0)
    return out


def inclusion_matrix(ctx: Context, pts: list[PrimePoint]) -> np.ndarray:
    return np.array([[includes(ctx, P, Q) for Q in pts] for P in pts], dtype=bool)


def specialization_order(ctx: SpecContext, H: int) -> tuple[list[PrimePoint], np.ndarray]:
    """The includes() relation on heights {0..H, inf}, checked to be a partial order."""
    pts = ctx.universe(H)
    rel = inclusion_matrix(ctx, pts)
    check_partial_order(rel)
    return pts, rel


def check_partial_order(rel: np.ndarray) -> None:
    if not rel.diagonal().all():
        raise AssertionError("relation is not reflexive")
    if (rel & rel.T & ~np.eye(len(rel), dtype=bool)).any():
        raise AssertionError("relation is not antisymmetric")
    comp = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    if (comp & ~rel).any():
        raise AssertionError("relation is not transitive")


def order_from_closed_sets(pts: list[PrimePoint], family) -> np.ndarray:
    """rel[i, j] iff every closed set in the family containing pts[i] contains pts[j]."""
    member = np.array([[P in V for P in pts] for V in family], dtype=bool)  # sets x points
    rel = np.ones((len(pts), len(pts)), dtype=bool)
    for row in member:
        # sets containing i but missing j rule out i -> j
        rel &= ~np.outer(row, ~row)
    return rel


def point_json(ctx: Context, P: PrimePoint) -> dict:
    return {"subgroup": ctx.label(P.sub), "n": fmt_height(P.n)}


def parse_point(ctx: Context, text: str) -> PrimePoint:
    """Parse "label:n", e.g. "C4:1" or "1:inf"."""
    sub, _, n = str(text).rpartition(":")
    if not sub:
        raise ValueError(f"point {text!r} is not of the form SUBGROUP:HEIGHT")
    h = parse_height(n)
    if h == -1:
        raise ValueError("points have height >= 0")
    return PrimePoint(ctx.resolve(sub), h)
