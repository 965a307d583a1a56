"""Sparse truncated power series in one, two or three variables."""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import CoeffRing, NotDivisible, decode_elem, encode_elem


@dataclass
class TruncSeries:
    """Sum of c_e x^e over exponent tuples e of total degree <= trunc."""

    ring: CoeffRing
    nvars: int
    trunc: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        R = self.ring
        self.terms = {e: c for e, c in self.terms.items() if sum(e) <= self.trunc and not R.is_zero(c)}

    # construction

    @classmethod
    def var(cls, ring, nvars, trunc, i=0) -> "TruncSeries":
        e = tuple(int(j == i) for j in range(nvars))
        return cls(ring, nvars, trunc, {e: ring.one()})

    @classmethod
    def const(cls, ring, nvars, trunc, c) -> "TruncSeries":
        return cls(ring, nvars, trunc, {(0,) * nvars: c})

    def zero_like(self) -> "TruncSeries":
        return TruncSeries(self.ring, self.nvars, self.trunc, {})

    def coeff(self, *e):
        if len(e) == 1 and isinstance(e[0], tuple):
            e = e[0]
        return self.terms.get(tuple(e), self.ring.zero())

    def with_trunc(self, d: int) -> "TruncSeries":
        return TruncSeries(self.ring, self.nvars, d, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def low_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def homogeneous(self, d: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    # arithmetic

    def _check(self, other):
        if other.ring != self.ring or other.nvars != self.nvars:
            raise ValueError("series over different rings or variable counts")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        R = self.ring
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = R.add(out[e], c) if e in out else c
        return TruncSeries(R, self.nvars, min(self.trunc, other.trunc), out)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.ring, self.nvars, self.trunc, {e: self.ring.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        R = self.ring
        return TruncSeries(R, self.nvars, self.trunc, {e: R.mul(c, x) for e, x in self.terms.items()})

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        R = self.ring
        D = min(self.trunc, other.trunc)
        a = sorted(((sum(e), e, c) for e, c in self.terms.items()), key=lambda t: t[0])
        b = sorted(((sum(e), e, c) for e, c in other.terms.items()), key=lambda t: t[0])
        out: dict = {}
        n = self.nvars
        for da, ea, ca in a:
            if b and da + b[0][0] > D:
                break
            for db, eb, cb in b:
                if da + db > D:
                    break
                e = (ea[0] + eb[0],) if n == 1 else tuple(x + y for x, y in zip(ea, eb))
                prod = R.mul(ca, cb)
                out[e] = R.add(out[e], prod) if e in out else prod
        return TruncSeries(R, n, D, out)

    def __pow__(self, k: int) -> "TruncSeries":
        out = TruncSeries.const(self.ring, self.nvars, self.trunc, self.ring.one())
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def powers(self, k: int) -> list["TruncSeries"]:
        out = [TruncSeries.const(self.ring, self.nvars, self.trunc, self.ring.one())]
        for _ in range(k):
            out.append(out[-1] * self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ring == other.ring and self.nvars == other.nvars and (self - other).is_zero()

    # substitution

    def compose(self, subs: list["TruncSeries"]) -> "TruncSeries":
        """Substitute series (without constant term) for the variables."""
        if len(subs) != self.nvars:
            raise ValueError("need one series per variable")
        tgt = subs[0]
        for s in subs:
            if any(not any(e) for e in s.terms):
                raise ValueError("substituted series must have zero constant term")
        D = min(s.trunc for s in subs)
        maxdeg = max((max(e) for e in self.terms), default=0)
        R = self.ring
        if self.nvars == 1:
            # Horner in the single variable
            pw = subs[0].with_trunc(D).powers(min(maxdeg, D))
            out = TruncSeries(R, tgt.nvars, D, {})
            for (i,), c in self.terms.items():
                if i <= D:
                    out = out + pw[i].scale(c)
            return out
        first = subs[0].with_trunc(D).powers(min(maxdeg, D))
        rest = [s.with_trunc(D).powers(min(maxdeg, D)) for s in subs[1:]]
        # group by the first exponent: sum_i first^i * (sum over the rest)
        groups: dict = {}
        for e, c in self.terms.items():
            groups.setdefault(e[0], []).append((e[1:], c))
        out = TruncSeries(R, tgt.nvars, D, {})
        for i, items in sorted(groups.items()):
            if i > D:
                continue
            inner = TruncSeries(R, tgt.nvars, D, {})
            for tail, c in items:
                if sum(tail) + i > D:
                    continue
                term = None
                for pw, t in zip(rest, tail):
                    term = pw[t] if term is None else term * pw[t]
                inner = inner + term.scale(c)
            out = out + first[i] * inner
        return out

    def map_coeffs(self, ring: CoeffRing, fn) -> "TruncSeries":
        return TruncSeries(ring, self.nvars, self.trunc, {e: fn(c) for e, c in self.terms.items()})

    def change_ring(self, ring: CoeffRing) -> "TruncSeries":
        return self.map_coeffs(ring, lambda c: ring.lift(c, self.ring))

    def embed(self, nvars: int, positions) -> "TruncSeries":
        """View as a series in more variables, old variable i becoming positions[i]."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, x in zip(positions, e):
                new[i] = x
            out[tuple(new)] = c
        return TruncSeries(self.ring, nvars, self.trunc, out)

    def permute(self, perm) -> "TruncSeries":
        """Rename variable i to perm[i]."""
        return self.embed(self.nvars, perm)

    # display and JSON

    def __str__(self) -> str:
        names = "xyz" if self.nvars > 1 else "y"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.ring.fmt(self.terms[e])
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(c)
            elif c in ("1", "-1"):
                parts.append(c[:-1] + mono)
            else:
                parts.append(f"({c})*{mono}" if " " in c else f"{c}*{mono}")
        out = " + ".join(parts) or "0"
        return out.replace(" + -", " - ") + f" + O({self.trunc + 1})"

    def to_json(self) -> dict:
        return {"trunc": self.trunc, "nvars": self.nvars,
                "terms": [{"exp": list(e), "coeff": encode_elem(self.ring, self.terms[e])}
                          for e in sorted(self.terms, key=lambda e: (sum(e), e))]}

    @classmethod
    def from_json(cls, ring: CoeffRing, d: dict) -> "TruncSeries":
        terms = {tuple(t["exp"]): decode_elem(ring, t["coeff"]) for t in d["terms"]}
        nvars = d.get("nvars") or (len(next(iter(terms))) if terms else 1)
        return cls(ring, nvars, int(d["trunc"]), terms)


def exact_divide(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """One-variable c with a = b*c through degree trunc(a) - lowdeg(b).

    The lowest coefficient of b must be a non-zero-divisor that divides the
    relevant coefficients; otherwise NotDivisible is raised with the degree.
    """
    if a.nvars != 1 or b.nvars != 1:
        raise ValueError("exact_divide works on one-variable series")
    R = a.ring
    k = b.low_degree()
    if k is None:
        raise NotDivisible("division by the zero series")
    for (i,), c in a.terms.items():
        if i < k:
            raise NotDivisible(f"dividend has a nonzero term in degree {i} < {k}", i)
    D = min(a.trunc, b.trunc) - k
    if D < 0:
        raise NotDivisible("truncation too small", k)
    lead = b.coeff(k)
    c: dict = {}
    for j in range(D + 1):
        acc = a.coeff(j + k)
        for i, ci in c.items():
            bi = b.terms.get((k + j - i,))
            if bi is not None:
                acc = R.sub(acc, R.mul(ci, bi))
        if R.is_zero(acc):
            continue
        try:
            c[j] = R.exact_div(acc, lead)
        except NotDivisible as err:
            raise NotDivisible(f"division fails in degree {j}: {err}", j) from None
    return TruncSeries(R, 1, D, {(j,): x for j, x in c.items()})
