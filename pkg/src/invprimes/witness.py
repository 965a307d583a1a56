"""Explicit elements of the equivariant Lazard ring and their height functions.

Elements are symbolic expressions built from a handful of primitives whose
height functions are known (v_n, Euler classes times v_n, elements killed by
a q-torsion character, the shifted elements x_m on C_p^{m+1}) together with
products, pullbacks along homomorphisms and lifts along restriction.  The
height of an expression is computed as an interval [lo, hi] per subgroup:
exact for everything except a lift, which is only known on the subgroups of
the group it was lifted from.

``realize`` builds a finite set of such elements whose height (pointwise
maximum) is a prescribed admissible function, following the three-case
construction: an Euler class when B is not contained in B', a q-torsion
killer when pi_0(B'/B) is not a p-group, and an inflated x_m otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

from .abgroup import (
    FgAbGroup,
    Homomorphism,
    Subgroup,
    image_subgroup,
    preimage_under_inclusion,
    rank_p_pi0,
    subgroup_as_group,
    subquotient,
)
from .spectrum import INF, TORUS, AdmissibleFn, CircleContext, CircleFn, Context, SpecContext, fmt_height, parse_height

Interval = tuple  # (lo, hi)
UNKNOWN: Interval = (-1, INF)


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Vn:
    n: object  # -1 means 0, INF means 1

    def __str__(self):
        return f"v_{fmt_height(self.n)}"


@dataclass(frozen=True)
class EulerTimesV:
    character: tuple  # a character of the ambient group
    n: object

    def __str__(self):
        return f"e{list(self.character)}*v_{fmt_height(self.n)}"


@dataclass(frozen=True)
class QKiller:
    """v_n times the pullback of [q](e)/e along a surjection g onto C_q."""

    q: int
    g: Homomorphism
    n: object

    def __str__(self):
        return f"qkill[{self.q}]({_hom_str(self.g)})*v_{fmt_height(self.n)}"


@dataclass(frozen=True)
class XShift:
    """x_m on C_p^{m+1}: height m - rank(B) at an elementary abelian B."""

    m: int

    def __str__(self):
        return f"x_{self.m}"


@dataclass(frozen=True)
class Product:
    args: tuple

    def __str__(self):
        return " * ".join(f"({a})" if isinstance(a, Product) else str(a) for a in self.args)


@dataclass(frozen=True)
class Inflate:
    """Pullback along a surjection g: A -> C of an element over C."""

    g: Homomorphism
    arg: object

    def __str__(self):
        return f"inflate[{_hom_str(self.g)}]({self.arg})"


@dataclass(frozen=True)
class Restrict:
    """Restriction along an inclusion i: B -> A of an element over A."""

    i: Homomorphism
    arg: object

    def __str__(self):
        return f"restrict[{_hom_str(self.i)}]({self.arg})"


@dataclass(frozen=True)
class Lift:
    """Some element over A restricting to ``arg`` along the inclusion i: B' -> A."""

    i: Homomorphism
    arg: object

    def __str__(self):
        return f"lift[{_hom_str(self.i)}]({self.arg})"


Primitive = Union[Zero, One, Vn, EulerTimesV, QKiller, XShift]
Expr = Union[Primitive, Product, Inflate, Restrict, Lift]


def _hom_str(h: Homomorphism) -> str:
    return f"{h.source.name()}->{h.target.name()}"


# ---------------------------------------------------------------------------
# height evaluation


@lru_cache(maxsize=None)
def context(group: FgAbGroup, prime: int) -> SpecContext:
    return SpecContext(group, prime)


def _pt(v) -> Interval:
    return (v, v)


def primitive_height(ctx: SpecContext, prim: Primitive) -> list[Interval]:
    """Exact height of a primitive at every subgroup of ctx.group."""
    subs = ctx.subgroups
    if isinstance(prim, Zero):
        return [_pt(-1)] * len(subs)
    if isinstance(prim, One):
        return [_pt(INF)] * len(subs)
    if isinstance(prim, Vn):
        return [_pt(prim.n)] * len(subs)
    if isinstance(prim, EulerTimesV):
        # e_V restricts to zero exactly where V is trivial
        return [_pt(-1 if s.contains_character(prim.character) else prim.n) for s in subs]
    if isinstance(prim, QKiller):
        if prim.g.source != ctx.group:
            raise ValueError("q-killer does not live on this group")
        return [_pt(-1 if _is_onto(prim.g, s) else prim.n) for s in subs]
    if isinstance(prim, XShift):
        p = ctx.prime
        if ctx.group != FgAbGroup(0, (p,) * (prim.m + 1)):
            raise ValueError(f"x_{prim.m} lives on C_{p}^{prim.m + 1}, not {ctx.group.name()}")
        return [_pt(prim.m - rank_p_pi0(s.structure(), p)) for s in subs]
    raise TypeError(f"not a primitive: {prim!r}")


def _is_onto(g: Homomorphism, s: Subgroup) -> bool:
    return image_subgroup(g, s).lattice == g.target.whole().lattice


def expr_height(ctx: SpecContext, e: Expr) -> list[Interval]:
    """Height interval of an expression over ctx.group at every subgroup."""
    return list(_height(ctx.group, ctx.prime, e))


@lru_cache(maxsize=None)
def _height(group: FgAbGroup, prime: int, e: Expr) -> tuple:
    ctx = context(group, prime)
    if isinstance(e, Product):
        parts = [_height(group, prime, a) for a in e.args]
        if not parts:
            return tuple([_pt(INF)] * len(ctx.subgroups))
        return tuple((min(x[0] for x in col), min(x[1] for x in col)) for col in zip(*parts))
    if isinstance(e, (Inflate, Restrict)):
        h = e.g if isinstance(e, Inflate) else e.i
        if h.source != group:
            raise ValueError(f"{type(e).__name__} source {h.source.name()} is not {group.name()}")
        inner = _height(h.target, prime, e.arg)
        tctx = context(h.target, prime)
        return tuple(inner[tctx.index(image_subgroup(h, s))] for s in ctx.subgroups)
    if isinstance(e, Lift):
        if e.i.target != group:
            raise ValueError("lift does not land in this group")
        inner = _height(e.i.source, prime, e.arg)
        sctx = context(e.i.source, prime)
        image = image_subgroup(e.i, e.i.source.whole())
        out = []
        for s in ctx.subgroups:
            if ctx.contains(ctx.index(s), ctx.index(image)):
                out.append(inner[sctx.index(preimage_under_inclusion(e.i, s))])
            else:
                out.append(UNKNOWN)
        return tuple(out)
    return tuple(primitive_height(ctx, e))


def set_height(heights: list[list[Interval]]) -> list[Interval]:
    """Height of a set of elements: the pointwise maximum."""
    if not heights:
        return []
    return [(max(x[0] for x in col), max(x[1] for x in col)) for col in zip(*heights)]


# circle: height functions are CircleFn objects with interval values


def circle_height(e: Expr, prime: int) -> CircleFn:
    if isinstance(e, (Zero, One, Vn)):
        v = {Zero: -1, One: INF}.get(type(e), getattr(e, "n", None))
        return CircleFn(_pt(v), _pt(v))
    if isinstance(e, EulerTimesV):
        (k,) = e.character
        if k == 0:
            return CircleFn(_pt(-1), _pt(-1))
        return CircleFn(_pt(e.n), _pt(e.n), {d: _pt(-1) for d in _divisors(abs(k))})
    if isinstance(e, Product):
        return _circle_combine([circle_height(a, prime) for a in e.args], min)
    if isinstance(e, Lift):
        if e.i.target != FgAbGroup(1, ()):
            raise ValueError("lift does not land in the circle")
        b = e.i.source.order
        inner = _height(e.i.source, prime, e.arg)
        sctx = context(e.i.source, prime)
        exc = {}
        for d in _divisors(b):
            s = preimage_under_inclusion(e.i, FgAbGroup(1, ()).subgroup([[d]]))
            exc[d] = inner[sctx.index(s)]
        return CircleFn(UNKNOWN, UNKNOWN, exc)
    raise ValueError(f"cannot evaluate {type(e).__name__} over the circle")


def _circle_combine(fns: list[CircleFn], op) -> CircleFn:
    keys = sorted(set().union(*[f.exception_map for f in fns]))

    def comb(vals):
        vals = list(vals)
        return (op(v[0] for v in vals), op(v[1] for v in vals))

    return CircleFn(comb(f.at_T for f in fns), comb(f.generic for f in fns), {m: comb(f[m] for f in fns) for m in keys})


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# realization


class WitnessSet(NamedTuple):
    group: FgAbGroup
    prime: int
    elements: tuple


class Mismatch(NamedTuple):
    sub: object
    expected: object
    got: Interval


def _simplify_product(factors) -> Expr:
    out = []
    for x in factors:
        if isinstance(x, Zero) or (isinstance(x, Vn) and x.n == -1):
            return Zero()
        if isinstance(x, One) or (isinstance(x, Vn) and x.n == INF):
            continue
        if x not in out:
            out.append(x)
    if not out:
        return One()
    return out[0] if len(out) == 1 else Product(tuple(out))


def _is_identity(h: Homomorphism) -> bool:
    n = h.source.dim
    return h.source == h.target and h.dual == tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _pullback(cls, h: Homomorphism, arg: Expr) -> Expr:
    if isinstance(arg, (Zero, One, Vn)) or _is_identity(h):
        return arg
    return cls(h, arg)


def elementary(p: int, r: int) -> FgAbGroup:
    return FgAbGroup(0, (p,) * r)


def pair_factor(ctx: SpecContext, b: int, b2: int, value) -> Expr:
    """x_{B,B'}: height exactly f(B) at B and at most f(B') at B' (for admissible f)."""
    p = ctx.prime
    B, B2 = ctx.subgroups[b], ctx.subgroups[b2]
    if value == -1:
        return Zero()
    if not ctx.contains(b, b2):
        # a character trivial on B' but not on B
        V = next(tuple(v) for v in B2.lattice if not B.contains_character(v))
        return EulerTimesV(V, value)
    Q, gens, _ = subquotient(B.lattice, B2.lattice)  # (B'/B)*, generators as characters of A
    G, incl = subgroup_as_group(B2)
    tors = list(Q.torsion)
    offset = Q.rank
    bad = [(i, q) for i, d in enumerate(tors) for q in _prime_factors(d) if q != p]
    if bad:
        i, q = bad[0]
        chi = [(tors[i] // q) * a for a in gens[offset + i]]
        g = Homomorphism(G, FgAbGroup(0, (q,)), tuple((x,) for x in _reduce(G, incl.dual_image(chi))))
        return _pullback(Lift, incl, QKiller(q, g, value))
    if value == INF:
        return One()
    r = min(rank_p_pi0(Q, p), value + 1)
    if r == 0:
        return Vn(value)
    chis = [[(tors[i] // p) * a for a in gens[offset + i]] for i in range(r)]
    cols = [_reduce(G, incl.dual_image(c)) for c in chis]
    target = elementary(p, r)
    g = Homomorphism(G, target, tuple(tuple(col[k] for col in cols) for k in range(G.dim)))
    top = elementary(p, value + 1)
    iota = Homomorphism(target, top, tuple(tuple(int(a == c) for c in range(value + 1)) for a in range(r)))
    y = _pullback(Restrict, iota, XShift(value))
    return _pullback(Lift, incl, _pullback(Inflate, g, y))


def _reduce(G: FgAbGroup, v) -> list[int]:
    return [a % G.torsion[i - G.rank] if i >= G.rank else a for i, a in enumerate(v)]


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def realize(ctx: Context, f) -> WitnessSet:
    """A finite set of elements whose height function is exactly f."""
    if ctx.circle:
        return _realize_circle(ctx, f)
    vals = set(f.values)
    if len(vals) == 1:
        (v,) = vals
        return WitnessSet(ctx.group, ctx.prime, (_simplify_product([Vn(v)]),))
    elements = []
    for b in ctx.keys():
        x = _simplify_product(pair_factor(ctx, b, b2, f[b]) for b2 in ctx.keys() if b2 != b)
        if x not in elements:
            elements.append(x)
    if len(elements) > 1:
        elements = [x for x in elements if not isinstance(x, Zero)]
    return WitnessSet(ctx.group, ctx.prime, tuple(elements))


def _circle_pair(ctx: CircleContext, b, b2, value) -> Expr:
    T = FgAbGroup(1, ())
    if value == -1:
        return Zero()
    if not ctx.contains(b, b2):
        return EulerTimesV((b2,), value)  # tau^{b'}: trivial on C_{b'}, not on B
    if b2 == TORUS:
        # T/C_a is a torus: nothing to kill
        return Vn(value)
    G = FgAbGroup.from_orders(0, [b2])
    inner_ctx = context(G, ctx.prime)
    small = inner_ctx.index(G.subgroup([[b]]) if G.dim else G.whole())
    x = pair_factor(inner_ctx, small, len(inner_ctx.subgroups) - 1, value)
    incl = Homomorphism(G, T, tuple((1,) for _ in range(G.dim)))
    return _pullback(Lift, incl, x)


def _realize_circle(ctx: CircleContext, f: CircleFn) -> WitnessSet:
    T = FgAbGroup(1, ())
    exc = sorted(f.exception_map)
    if not exc:
        return WitnessSet(T, ctx.prime, (_simplify_product([Vn(f.at_T)]),))
    # x_T is exact on T and on every C_d not dividing an exceptional index
    covered = sorted({d for m in exc for d in _divisors(m)})
    cover = [TORUS] + exc
    elements = []
    for b in [TORUS] + covered:
        x = _simplify_product(_circle_pair(ctx, b, b2, f[b]) for b2 in cover if b2 != b)
        if x not in elements:
            elements.append(x)
    if len(elements) > 1:
        elements = [x for x in elements if not isinstance(x, Zero)]
    return WitnessSet(T, ctx.prime, tuple(elements))


def witness_heights(ctx: Context, W: WitnessSet):
    # the empty set has height -1 everywhere (an empty maximum)
    if not W.elements:
        if ctx.circle:
            return CircleFn(_pt(-1), _pt(-1))
        return [_pt(-1)] * len(ctx.subgroups)
    if ctx.circle:
        return _circle_combine([circle_height(x, ctx.prime) for x in W.elements], max)
    return set_height([expr_height(ctx, x) for x in W.elements])


def verify_realization(ctx: Context, f, W: WitnessSet) -> Mismatch | None:
    """First subgroup where the height of W is not exactly f, or None."""
    h = witness_heights(ctx, W)
    if ctx.circle:
        keys = [TORUS] + sorted(set(h.exception_map) | set(f.exception_map))
        for k in keys:
            if h[k] != (f[k], f[k]):
                return Mismatch(k, f[k], h[k])
        if h.generic != (f.generic, f.generic):
            return Mismatch("generic", f.generic, h.generic)
        return None
    for k, iv in enumerate(h):
        if iv != (f[k], f[k]):
            return Mismatch(k, f[k], iv)
    return None


# ---------------------------------------------------------------------------
# JSON


def hom_to_json(h: Homomorphism) -> dict:
    return {"source": h.source.to_json(), "target": h.target.to_json(), "dual": [list(r) for r in h.dual]}


def hom_from_json(d: dict) -> Homomorphism:
    return Homomorphism(FgAbGroup.from_json(d["source"]), FgAbGroup.from_json(d["target"]),
                        tuple(tuple(int(a) for a in r) for r in d["dual"]))


def _h(v):
    return fmt_height(v)


def to_json(e: Expr) -> dict:
    if isinstance(e, Zero):
        return {"prim": "zero"}
    if isinstance(e, One):
        return {"prim": "one"}
    if isinstance(e, Vn):
        return {"prim": "vn", "n": _h(e.n)}
    if isinstance(e, EulerTimesV):
        return {"prim": "euler", "character": list(e.character), "n": _h(e.n)}
    if isinstance(e, QKiller):
        return {"prim": "qkiller", "q": e.q, "map": hom_to_json(e.g), "n": _h(e.n)}
    if isinstance(e, XShift):
        return {"prim": "xshift", "m": e.m}
    if isinstance(e, Product):
        return {"op": "product", "args": [to_json(a) for a in e.args]}
    for cls, name, attr in ((Inflate, "inflate", "g"), (Restrict, "restrict", "i"), (Lift, "lift", "i")):
        if isinstance(e, cls):
            return {"op": name, "map": hom_to_json(getattr(e, attr)), "arg": to_json(e.arg)}
    raise TypeError(e)


def from_json(d: dict) -> Expr:
    if "prim" in d:
        kind = d["prim"]
        if kind == "zero":
            return Zero()
        if kind == "one":
            return One()
        if kind == "vn":
            return Vn(parse_height(d["n"]))
        if kind == "euler":
            return EulerTimesV(tuple(int(a) for a in d["character"]), parse_height(d["n"]))
        if kind == "qkiller":
            return QKiller(int(d["q"]), hom_from_json(d["map"]), parse_height(d["n"]))
        if kind == "xshift":
            return XShift(int(d["m"]))
        raise ValueError(f"unknown primitive {kind!r}")
    op = d["op"]
    if op == "product":
        return Product(tuple(from_json(a) for a in d["args"]))
    cls = {"inflate": Inflate, "restrict": Restrict, "lift": Lift}[op]
    return cls(hom_from_json(d["map"]), from_json(d["arg"]))


def interval_json(iv: Interval):
    lo, hi = iv
    return _h(lo) if lo == hi else [_h(lo), _h(hi)]
